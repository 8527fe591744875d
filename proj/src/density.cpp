#include "qcap/density.hpp"

#include <stdexcept>

namespace qcap {

Tolerances& tolerances() {
    static Tolerances tols;
    return tols;
}

DensityOperator::DensityOperator(MatrixXcd matrix, SystemLayout layout, Normalization norm)
    : m_(std::move(matrix)), layout_(std::move(layout)), norm_(norm) {
    const auto& tol = tolerances();
    if (m_.rows() != m_.cols()) throw std::invalid_argument("density operator must be square");
    if (m_.rows() != layout_.dim())
        throw std::invalid_argument("matrix dimension does not match layout");
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol.hermiticity)
        throw std::invalid_argument("operator is not Hermitian within tolerance");
    m_ = 0.5 * (m_ + m_.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol.psd_floor)
        throw std::invalid_argument("operator is not positive semidefinite within tolerance");
    const double tr = m_.trace().real();
    if (tr > 1.0 + tol.trace) throw std::invalid_argument("trace exceeds 1");
    if (norm_ == Normalization::Normalized && std::abs(tr - 1.0) > tol.trace)
        throw std::invalid_argument("state tagged normalized has trace != 1");
}

DensityOperator DensityOperator::unchecked(MatrixXcd matrix, SystemLayout layout,
                                           Normalization norm) {
    DensityOperator rho;
    rho.m_ = std::move(matrix);
    rho.layout_ = std::move(layout);
    rho.norm_ = norm;
    return rho;
}

DensityOperator DensityOperator::with_layout(SystemLayout layout) const {
    if (layout.dim() != dim()) throw std::invalid_argument("relabeling layout changes dimension");
    return unchecked(m_, std::move(layout), norm_);
}

DensityOperator DensityOperator::as_subnormalized() const {
    return unchecked(m_, layout_, Normalization::Subnormalized);
}

PureState::PureState(VectorXcd vector, SystemLayout layout)
    : v_(std::move(vector)), layout_(std::move(layout)) {
    if (v_.size() != layout_.dim())
        throw std::invalid_argument("vector dimension does not match layout");
    const double n = v_.norm();
    if (std::abs(n - 1.0) > 1e-10)
        throw std::invalid_argument("pure state vector is not normalized");
}

DensityOperator PureState::density() const {
    return DensityOperator::unchecked(v_ * v_.adjoint(), layout_, Normalization::Normalized);
}

DensityOperator maximally_mixed(const SystemLayout& layout) {
    const int d = layout.dim();
    return DensityOperator::unchecked(MatrixXcd::Identity(d, d) / double(d), layout,
                                      Normalization::Normalized);
}

PureState maximally_entangled(const std::string& a, const std::string& b, int d) {
    SystemLayout layout({{a, d}, {b, d}});
    VectorXcd v = VectorXcd::Zero(d * d);
    for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
    return PureState(std::move(v), std::move(layout));
}

PureState basis_state(const std::string& label, int dim, int i) {
    if (i < 0 || i >= dim) throw std::invalid_argument("basis index out of range");
    VectorXcd v = VectorXcd::Zero(dim);
    v(i) = 1.0;
    return PureState(std::move(v), SystemLayout::single(label, dim));
}

}  // namespace qcap
