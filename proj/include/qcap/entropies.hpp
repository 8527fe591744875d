#pragma once

#include <optional>
#include <vector>

#include "qcap/density.hpp"

namespace qcap {

enum class EntropyStatus { Optimal, NearOptimal, Infeasible };

/// Result of a min/max entropy computation. Values are in bits. The achiever
/// is the smoothed state for smoothed quantities and the optimizing
/// conditioning state otherwise; when it is a smoothed state it lies in the
/// epsilon-ball of the input (purified distance <= epsilon + 1e-6).
struct SmoothEntropyResult {
    double value = 0.0;
    double epsilon = 0.0;
    std::optional<DensityOperator> achiever;
    EntropyStatus status = EntropyStatus::Optimal;
    double duality_gap = 0.0;
};

/// H_min(A|B)_{rho|varsigma} for a fixed normalized conditioning state: the
/// largest lambda with 2^{-lambda} I (x) varsigma >= rho. Returns -infinity
/// when rho has support outside I (x) supp(varsigma).
double hmin_fixed(const DensityOperator& rho, const std::vector<std::string>& target,
                  const DensityOperator& varsigma);

/// Conditional min-entropy of the `target` factors given the rest, as a
/// semidefinite program (minimize tr sigma subject to I (x) sigma >= rho).
SmoothEntropyResult hmin(const DensityOperator& rho, const std::vector<std::string>& target);

/// Conditional max-entropy via the fidelity-maximization program
/// (2 log sup_sigma F(rho, I (x) sigma)).
SmoothEntropyResult hmax(const DensityOperator& rho, const std::vector<std::string>& target);

/// Same quantity through the purification route (-H_min of the complementary
/// conditioning system); kept as an independent cross-check of `hmax`.
SmoothEntropyResult hmax_via_duality(const DensityOperator& rho,
                                     const std::vector<std::string>& target);

/// Smoothed min-entropy: sup over the epsilon-ball (purified distance, over
/// subnormalized states) of H_min, as one joint SDP over the smoothed state,
/// the conditioning operator and the fidelity certificate.
SmoothEntropyResult hmin_smooth(const DensityOperator& rho, const std::vector<std::string>& target,
                                double epsilon);

/// Smoothed max-entropy through duality on a purification.
SmoothEntropyResult hmax_smooth(const DensityOperator& rho, const std::vector<std::string>& target,
                                double epsilon);

/// Conditional von Neumann entropy H(target|rest) = H(full) - H(rest), bits.
double von_neumann_cond(const DensityOperator& rho, const std::vector<std::string>& target);

/// Mutual information I(part:rest) = H(part) + H(rest) - H(full), bits.
double mutual_info(const DensityOperator& rho, const std::vector<std::string>& part);

/// Von Neumann entropy of the reduced state on `part`, bits.
double von_neumann_marginal(const DensityOperator& rho, const std::vector<std::string>& part);

}  // namespace qcap
