#pragma once

#include <set>
#include <string>
#include <vector>

#include "qcap/density.hpp"

namespace qcap {

/// Kronecker product; layout is the concatenation of the factor lists.
/// Throws on label collision. Trace multiplies, so the product of two
/// normalized states is normalized.
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
PureState tensor(const PureState& a, const PureState& b);

/// Reduced operator on the kept factors, factor order preserved.
DensityOperator partial_trace(const DensityOperator& rho, const std::set<std::string>& keep);

/// Reorders the tensor factors into the given label order (an explicit
/// permutation of the layout; the operator is conjugated accordingly).
DensityOperator permute_factors(const DensityOperator& rho, const std::vector<std::string>& order);
PureState permute_factors(const PureState& psi, const std::vector<std::string>& order);

/// Purification on layout x reference factor. The reference dimension is the
/// rank of rho (eigenvalues below the PSD floor are dropped); tracing out the
/// reference recovers rho. Requires a normalized input.
PureState purify(const DensityOperator& rho, const std::string& ref_label = "ref");

/// Generalized fidelity of subnormalized states:
/// Fbar = ||sqrt(rho) sqrt(sigma)||_1 + sqrt((1-tr rho)(1-tr sigma)).
double generalized_fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Root fidelity ||sqrt(rho) sqrt(sigma)||_1 without the subnormalization
/// credit.
double root_fidelity(const MatrixXcd& rho, const MatrixXcd& sigma);

/// P = sqrt(1 - Fbar^2), a metric on subnormalized states.
double purified_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// ||rho - sigma||_1 via singular values.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Zeroes every matrix block that is off-diagonal in the computational basis
/// of the given factor.
DensityOperator dephase(const DensityOperator& rho, const std::string& factor);

/// Same, acting on a raw matrix: `dim_before` and `dim_after` are the
/// dimensions of the factors preceding/following the dephased one.
MatrixXcd dephase_matrix(const MatrixXcd& m, int dim_before, int dim_factor, int dim_after);

// Matrix helpers shared across modules. Square roots go through a Hermitian
// eigendecomposition with eigenvalue clamping at zero so nearly singular
// inputs do not produce NaNs.
MatrixXcd matrix_sqrt_psd(const MatrixXcd& m);
double trace_norm(const MatrixXcd& m);
double von_neumann_entropy_bits(const MatrixXcd& rho);

}  // namespace qcap
