#pragma once

namespace qcap {

/// Numerical tolerances used across the library. SDP solvers return
/// approximately feasible points, so every structural check (hermiticity,
/// positivity, trace) runs against these rather than exact comparisons.
struct Tolerances {
    double hermiticity = 1e-10;  ///< max entrywise |M - M^dag|
    double psd_floor = 1e-9;     ///< smallest admissible eigenvalue is -psd_floor
    double equality = 1e-8;      ///< generic numerical-equality slack
    double trace = 1e-9;         ///< slack on trace normalization checks
    double sdp_rel_gap = 1e-7;   ///< target relative duality gap
    double sdp_feas = 1e-8;      ///< target primal/dual feasibility residual
    double sdp_near_optimal = 1e-5;  ///< gaps above this are flagged near-optimal
};

/// Library-wide tolerance record (mutable so the CLI can override the
/// solver gap via QCAP_SOLVER_TOL).
Tolerances& tolerances();

}  // namespace qcap
