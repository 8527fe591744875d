#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qcap/channel.hpp"
#include "qcap/entropies.hpp"

namespace qcap {

/// Message sizes of a one-shot code: c classical bits, q qubits, e ebits of
/// preshared entanglement, delta the trace-distance error tolerance. The
/// ebit count may be negative during intermediate searches.
struct CodeParams {
    double c = 0.0;
    double q = 0.0;
    double e = 0.0;
    double delta = 1.0;
    CodeParams(double c_, double q_, double e_, double delta_);
};

/// Block-diagonal channel input ensemble on {Sc, Sr, A}: dephasing Sc leaves
/// it unchanged and (when required) the S marginal is maximally mixed.
class InputEnsemble {
  public:
    static InputEnsemble make(DensityOperator rho, bool require_max_mixed = true);

    const DensityOperator& rho() const { return rho_; }
    int d_sc() const { return d_sc_; }
    int d_sr() const { return d_sr_; }
    int d_s() const { return d_sc_ * d_sr_; }
    bool max_mixed() const { return max_mixed_; }

    /// Channel output state on (Sc, Sr, B).
    DensityOperator output(const ChannelRep& channel) const;

  private:
    DensityOperator rho_{MatrixXcd::Identity(1, 1), SystemLayout::single("x", 1)};
    int d_sc_ = 1, d_sr_ = 1;
    bool max_mixed_ = false;
};

/// Error-budget parameters feeding the one-shot bounds.
struct SmoothingBudget {
    double epsilon = 0.0;
    double delta1 = 0.0;       // joint-inequality slack of the limited-entanglement bound
    double delta2 = 0.0;       // quantum-inequality slack
    double delta_prime = 0.0;  // single slack of the unlimited-entanglement bound
    double iota = 1.0;
};

struct DirectFeasibility {
    bool feasible = false;
    double achieved_error = 0.0;
    double slack_dim = 0.0;      // log d_Sr - (q+e)
    double slack_joint = 0.0;    // rhs - (c+q-e); +inf when the branch is dropped
    double slack_quantum = 0.0;  // rhs - (q-e); +inf when dropped
    bool joint_used = true;
    bool quantum_used = true;
};

/// Achievability conditions of the limited-entanglement one-shot bound,
/// including the degenerate single-sector branches.
DirectFeasibility direct_feasible(const InputEnsemble& ens, const ChannelRep& channel,
                                  const CodeParams& code, const SmoothingBudget& budget);

struct ConverseReport {
    bool holds = false;
    double lambda = 0.0;
    double lambda_prime = 0.0;
    bool saturated = false;  // a smoothing parameter reached 1; that inequality is vacuous
    double slack_dim = 0.0;
    double slack_joint = 0.0;
    double slack_quantum = 0.0;
};

/// Necessary conditions of the limited-entanglement converse at tolerance
/// code.delta and free parameter iota.
ConverseReport converse_holds(const InputEnsemble& ens, const ChannelRep& channel,
                              const CodeParams& code, double iota);

struct UnlimitedDirectResult {
    bool feasible = false;
    double achieved_error = 0.0;
    double slack = 0.0;
};

/// Achievability with unlimited entanglement: c + 2q against the single
/// entropic bound; uses budget.epsilon and budget.delta_prime.
UnlimitedDirectResult unlimited_direct(const InputEnsemble& ens, const ChannelRep& channel,
                                       double c, double q, const SmoothingBudget& budget);

struct UnlimitedConverseResult {
    bool holds = false;
    double lambda = 0.0;
    bool saturated = false;
    double slack = 0.0;
};

UnlimitedConverseResult unlimited_converse(const InputEnsemble& ens, const ChannelRep& channel,
                                           double c, double q, double iota, double delta);

/// Smoothing parameters of the one-shot converse as functions of the error
/// tolerance and the free parameter iota.
double oneshot_lambda(double delta, double iota);
double oneshot_lambda_prime(double delta, double iota);
/// Smoothing parameter of the one-shot direct table rows:
/// delta^2/16 - sqrt(delta')/4 (negative values mark an infeasible split).
double table_epsilon(double delta, double delta_prime);

enum class Task { Classical, Quantum };
enum class Assistance { None, Unlimited };

struct CapacitySearchConfig {
    std::vector<std::pair<int, int>> splits;  // (d_sc, d_sr); defaults chosen per channel
    int grid_points = 5;                      // coarse grid per parameter
    int refine_iters = 40;                    // simplex refinement steps
    int n_delta_prime = 10;
    int n_iota = 10;
    std::uint64_t seed = 20200615;
};

struct CapacityEstimate {
    double lower = 0.0;      // clamped at zero; rates are nonnegative
    double lower_raw = 0.0;  // unclamped optimum of the direct expression
    double upper = 0.0;
    bool upper_saturated = false;  // all admissible iota saturate the smoothing
    double best_delta_prime = 0.0;
    int best_split_sc = 1, best_split_sr = 1;
    Eigen::VectorXd best_params;
};

/// One-shot capacity window for the four scenario rows: optimizes the direct
/// expression over a parameterized ensemble family (coarse grid plus simplex
/// refinement) and the smoothing slacks over log grids.
CapacityEstimate capacity_estimate(const ChannelRep& channel, Task task, Assistance assist,
                                   double delta, const CapacitySearchConfig& cfg = {});

/// Parameterized ensemble family member used by the searches: per-sector
/// maximally-correlated pure blocks twisted by sector-dependent unitaries and
/// interpolated with the maximally mixed block, so the S marginal stays
/// maximally mixed. Parameters: x = (mixing t, angle theta, angle phi).
InputEnsemble family_member(const ChannelRep& channel, int d_sc, int d_sr,
                            const Eigen::VectorXd& x);

/// One half-plane piece {c,q >= 0, c <= cap_c, q <= cap_q, c+q <= cap_joint}.
struct RegionPiece {
    double cap_c = 0.0;
    double cap_q = 0.0;
    double cap_joint = 0.0;
    double slack_param = 0.0;  // the delta' (inner) or iota floor (outer) that built it
};

struct Region2D {
    std::vector<RegionPiece> pieces;
    std::vector<std::array<double, 2>> vertices;  // Pareto-maximal corner points
};

bool region_contains(const Region2D& region, double c, double q, double tol = 1e-9);

struct SimultaneousRegion {
    Region2D inner;
    Region2D outer;
    int skipped_smoothing = 0;  // delta' grid points with negative epsilon
};

/// Inner and outer approximations of the simultaneous classical/quantum
/// one-shot region at tolerance delta, unioned over the ensemble family and
/// the slack grids (union over delta', intersection over iota).
SimultaneousRegion simultaneous_region(const ChannelRep& channel, double delta,
                                       const std::vector<InputEnsemble>& family,
                                       int n_delta_prime = 8, int n_iota = 8);

/// Default ensemble family for a channel: for each split, grid corners of the
/// family parameters.
std::vector<InputEnsemble> default_ensemble_family(const ChannelRep& channel,
                                                   const std::vector<std::pair<int, int>>& splits,
                                                   int per_split, std::uint64_t seed);

}  // namespace qcap
