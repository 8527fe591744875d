#include "qcap/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace qcap {

namespace {

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Normalization combine(Normalization a, Normalization b) {
    return (a == Normalization::Normalized && b == Normalization::Normalized)
               ? Normalization::Normalized
               : Normalization::Subnormalized;
}

}  // namespace

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    return DensityOperator::unchecked(kron(a.matrix(), b.matrix()),
                                      a.layout().tensor_with(b.layout()),
                                      combine(a.normalization(), b.normalization()));
}

PureState tensor(const PureState& a, const PureState& b) {
    VectorXcd v(a.dim() * b.dim());
    for (int i = 0; i < a.dim(); ++i) v.segment(i * b.dim(), b.dim()) = a.vector()(i) * b.vector();
    return PureState(std::move(v), a.layout().tensor_with(b.layout()));
}

DensityOperator partial_trace(const DensityOperator& rho, const std::set<std::string>& keep) {
    const SystemLayout& lay = rho.layout();
    std::vector<int> kept_idx, traced_idx;
    for (const auto& label : keep) lay.index_of(label);  // reject unknown labels
    for (int k = 0; k < lay.num_factors(); ++k) {
        if (keep.count(lay.factors()[k].label))
            kept_idx.push_back(k);
        else
            traced_idx.push_back(k);
    }
    SystemLayout out_lay = lay.sublayout(kept_idx);
    int traced_dim = 1;
    for (int k : traced_idx) traced_dim *= lay.factor_dim(k);

    // Row index of the input = interleaving of kept digits and traced digits.
    const int dout = out_lay.dim();
    MatrixXcd out = MatrixXcd::Zero(dout, dout);
    std::vector<int> digits(lay.num_factors(), 0);
    // Precompute flat offsets: for each (kept flat, traced flat) pair.
    std::vector<int> kept_offset(dout), traced_offset(traced_dim);
    {
        std::vector<int> d(out_lay.num_factors(), 0);
        for (int i = 0; i < dout; ++i) {
            auto dg = out_lay.digits(i);
            int off = 0;
            for (size_t k = 0; k < kept_idx.size(); ++k) off += dg[k] * lay.strides()[kept_idx[k]];
            kept_offset[i] = off;
        }
        SystemLayout traced_lay = lay.sublayout(traced_idx);
        for (int t = 0; t < traced_dim; ++t) {
            auto dg = traced_lay.digits(t);
            int off = 0;
            for (size_t k = 0; k < traced_idx.size(); ++k) off += dg[k] * lay.strides()[traced_idx[k]];
            traced_offset[t] = off;
        }
    }
    const MatrixXcd& m = rho.matrix();
    for (int i = 0; i < dout; ++i)
        for (int j = 0; j < dout; ++j) {
            Complex s = 0;
            for (int t = 0; t < traced_dim; ++t)
                s += m(kept_offset[i] + traced_offset[t], kept_offset[j] + traced_offset[t]);
            out(i, j) = s;
        }
    return DensityOperator::unchecked(std::move(out), std::move(out_lay), rho.normalization());
}

namespace {

std::vector<int> permutation_map(const SystemLayout& lay, const std::vector<std::string>& order,
                                 SystemLayout& out_lay) {
    if (static_cast<int>(order.size()) != lay.num_factors())
        throw std::invalid_argument("factor permutation must list every label exactly once");
    std::vector<int> perm;
    for (const auto& label : order) perm.push_back(lay.index_of(label));
    std::vector<bool> seen(lay.num_factors(), false);
    for (int p : perm) {
        if (seen[p]) throw std::invalid_argument("factor permutation repeats a label");
        seen[p] = true;
    }
    out_lay = lay.sublayout(perm);
    std::vector<int> map(lay.dim());
    for (int i = 0; i < lay.dim(); ++i) {
        auto dg = lay.digits(i);
        std::vector<int> pd(perm.size());
        for (size_t k = 0; k < perm.size(); ++k) pd[k] = dg[perm[k]];
        map[out_lay.flat(pd)] = i;
    }
    return map;  // map[new] = old
}

}  // namespace

DensityOperator permute_factors(const DensityOperator& rho, const std::vector<std::string>& order) {
    SystemLayout out_lay;
    auto map = permutation_map(rho.layout(), order, out_lay);
    const int d = rho.dim();
    MatrixXcd out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = rho.matrix()(map[i], map[j]);
    return DensityOperator::unchecked(std::move(out), std::move(out_lay), rho.normalization());
}

PureState permute_factors(const PureState& psi, const std::vector<std::string>& order) {
    SystemLayout out_lay;
    auto map = permutation_map(psi.layout(), order, out_lay);
    VectorXcd out(psi.dim());
    for (int i = 0; i < psi.dim(); ++i) out(i) = psi.vector()(map[i]);
    return PureState(std::move(out), std::move(out_lay));
}

PureState purify(const DensityOperator& rho, const std::string& ref_label) {
    if (rho.normalization() != Normalization::Normalized)
        throw std::invalid_argument("purify requires a normalized state");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho.matrix());
    const auto& vals = es.eigenvalues();
    const int d = rho.dim();
    int rank = 0;
    for (int i = 0; i < d; ++i)
        if (vals(i) > tolerances().psd_floor) ++rank;
    if (rank == 0) throw std::invalid_argument("cannot purify the zero operator");
    VectorXcd v = VectorXcd::Zero(d * rank);
    // Eigenvalues come out ascending; take the top `rank`.
    for (int k = 0; k < rank; ++k) {
        const int col = d - 1 - k;
        const double w = std::sqrt(std::max(vals(col), 0.0));
        for (int i = 0; i < d; ++i) v(i * rank + k) += w * es.eigenvectors()(i, col);
    }
    v /= v.norm();
    std::string ref = ref_label;
    while (rho.layout().has_label(ref)) ref += "'";
    SystemLayout lay = rho.layout().tensor_with(SystemLayout::single(ref, rank));
    return PureState(std::move(v), std::move(lay));
}

MatrixXcd matrix_sqrt_psd(const MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_norm(const MatrixXcd& m) {
    Eigen::JacobiSVD<MatrixXcd> svd(m);
    return svd.singularValues().sum();
}

double root_fidelity(const MatrixXcd& rho, const MatrixXcd& sigma) {
    return trace_norm(matrix_sqrt_psd(rho) * matrix_sqrt_psd(sigma));
}

double generalized_fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("dimension mismatch");
    const double f = root_fidelity(rho.matrix(), sigma.matrix());
    const double ta = std::max(0.0, 1.0 - rho.trace());
    const double tb = std::max(0.0, 1.0 - sigma.trace());
    return std::min(1.0, f + std::sqrt(ta * tb));
}

double purified_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    const double f = generalized_fidelity(rho, sigma);
    return std::sqrt(std::max(0.0, 1.0 - f * f));
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("dimension mismatch");
    return trace_norm(rho.matrix() - sigma.matrix());
}

MatrixXcd dephase_matrix(const MatrixXcd& m, int dim_before, int dim_factor, int dim_after) {
    MatrixXcd out = MatrixXcd::Zero(m.rows(), m.cols());
    for (int b = 0; b < dim_before; ++b)
        for (int b2 = 0; b2 < dim_before; ++b2)
            for (int j = 0; j < dim_factor; ++j) {
                const int row0 = (b * dim_factor + j) * dim_after;
                const int col0 = (b2 * dim_factor + j) * dim_after;
                out.block(row0, col0, dim_after, dim_after) =
                    m.block(row0, col0, dim_after, dim_after);
            }
    return out;
}

DensityOperator dephase(const DensityOperator& rho, const std::string& factor) {
    const SystemLayout& lay = rho.layout();
    const int k = lay.index_of(factor);
    int before = 1, after = 1;
    for (int i = 0; i < k; ++i) before *= lay.factor_dim(i);
    for (int i = k + 1; i < lay.num_factors(); ++i) after *= lay.factor_dim(i);
    return DensityOperator::unchecked(dephase_matrix(rho.matrix(), before, lay.factor_dim(k), after),
                                      lay, rho.normalization());
}

double von_neumann_entropy_bits(const MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > 1e-14) h -= p * std::log2(p);
    }
    return h;
}

}  // namespace qcap
