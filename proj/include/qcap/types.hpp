#pragma once

#include <cstdint>
#include <vector>

#include "qcap/density.hpp"

namespace qcap {

/// Empirical distribution of a length-n sequence over a finite alphabet,
/// stored as occurrence counts summing to n.
struct TypeDistribution {
    std::vector<int> counts;
    int n = 0;
};

/// All types of length n over an alphabet of the given size (compositions of
/// n into alphabet_size nonnegative parts).
std::vector<TypeDistribution> enumerate_types(int alphabet_size, int n);

/// Number of sequences of the given type (multinomial coefficient).
std::uint64_t type_class_size(const TypeDistribution& t);

/// Projector onto the span of basis sequences of type t inside
/// (C^alphabet)^(x n), in the computational basis.
MatrixXcd type_projector(const TypeDistribution& t);

/// Type projectors in the eigenbasis of rho: general states are
/// eigendecomposed first, then the computational-basis projectors are
/// conjugated into that basis. Returned in the order of enumerate_types, with
/// the per-type weight q_t = prod_x p_x^{n t(x)} of rho^(x n).
struct StateTypeProjectors {
    std::vector<TypeDistribution> types;
    std::vector<MatrixXcd> projectors;
    std::vector<double> weights;
};
StateTypeProjectors type_projectors_for_state(const DensityOperator& rho, int n);

}  // namespace qcap
