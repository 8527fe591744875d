#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "qcap/layout.hpp"
#include "qcap/tolerances.hpp"

namespace qcap {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

enum class Normalization { Normalized, Subnormalized };

/// Positive operator on a labeled multipartite space, normalized or
/// subnormalized. Values are immutable after construction; all operations on
/// them are pure functions.
class DensityOperator {
  public:
    /// Validates hermiticity, positivity and trace against the global
    /// tolerances and throws std::invalid_argument on violation.
    DensityOperator(MatrixXcd matrix, SystemLayout layout,
                    Normalization norm = Normalization::Normalized);

    /// Skips validation; for internal use on operators that are positive by
    /// construction (partial traces of validated states, Kraus images, ...).
    static DensityOperator unchecked(MatrixXcd matrix, SystemLayout layout,
                                     Normalization norm);

    const MatrixXcd& matrix() const { return m_; }
    const SystemLayout& layout() const { return layout_; }
    Normalization normalization() const { return norm_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    double trace() const { return m_.trace().real(); }

    DensityOperator with_layout(SystemLayout layout) const;
    DensityOperator as_subnormalized() const;

  private:
    DensityOperator() = default;
    MatrixXcd m_;
    SystemLayout layout_;
    Normalization norm_ = Normalization::Normalized;
};

/// Unit vector on a labeled multipartite space.
class PureState {
  public:
    PureState(VectorXcd vector, SystemLayout layout);

    const VectorXcd& vector() const { return v_; }
    const SystemLayout& layout() const { return layout_; }
    int dim() const { return static_cast<int>(v_.size()); }

    /// Projector |psi><psi| as a density operator.
    DensityOperator density() const;

  private:
    VectorXcd v_;
    SystemLayout layout_;
};

/// Maximally mixed state on the given layout.
DensityOperator maximally_mixed(const SystemLayout& layout);

/// Maximally entangled pure state (1/sqrt(d)) sum_i |ii> between two factors
/// of equal dimension d, labeled `a` and `b`.
PureState maximally_entangled(const std::string& a, const std::string& b, int d);

/// Computational basis state |i> on a single labeled factor.
PureState basis_state(const std::string& label, int dim, int i);

}  // namespace qcap
