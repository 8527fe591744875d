#include "qcap/entropies.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "qcap/hermitian_program.hpp"
#include "qcap/linalg.hpp"

namespace qcap {

namespace {

constexpr int kMaxSmoothDim = 64;  // SDP size grows like d^4 past this

struct Bipartite {
    MatrixXcd rho;   // reordered so target factors come first
    int da = 1;      // target dimension
    int db = 1;      // conditioning dimension
    SystemLayout target_layout;
    SystemLayout cond_layout;
};

Bipartite split(const DensityOperator& rho, const std::vector<std::string>& target) {
    std::set<std::string> tset(target.begin(), target.end());
    if (tset.size() != target.size()) throw std::invalid_argument("repeated target label");
    std::vector<std::string> order = target;
    std::vector<int> cond_idx;
    const auto& lay = rho.layout();
    for (const auto& t : target) lay.index_of(t);
    for (int k = 0; k < lay.num_factors(); ++k)
        if (!tset.count(lay.factors()[k].label)) {
            order.push_back(lay.factors()[k].label);
            cond_idx.push_back(k);
        }
    DensityOperator perm = permute_factors(rho, order);
    Bipartite bp;
    bp.rho = perm.matrix();
    std::vector<int> tidx(target.size());
    for (size_t k = 0; k < target.size(); ++k) tidx[k] = static_cast<int>(k);
    bp.target_layout = perm.layout().sublayout(tidx);
    std::vector<int> cidx;
    for (int k = static_cast<int>(target.size()); k < lay.num_factors(); ++k) cidx.push_back(k);
    bp.cond_layout = perm.layout().sublayout(cidx);
    bp.da = bp.target_layout.dim();
    bp.db = bp.cond_layout.dim();
    return bp;
}

sdp::Options solver_options() {
    sdp::Options opt;
    opt.rel_gap_tol = tolerances().sdp_rel_gap;
    opt.feas_tol = tolerances().sdp_feas;
    return opt;
}

EntropyStatus map_status(const HermitianProgram::Result& r) {
    if (r.status == sdp::SolveStatus::Optimal && r.rel_gap <= tolerances().sdp_near_optimal)
        return EntropyStatus::Optimal;
    if (r.status == sdp::SolveStatus::NumericalFailure) return EntropyStatus::Infeasible;
    return EntropyStatus::NearOptimal;
}

/// Isometry onto the support of a PSD matrix (columns are eigenvectors with
/// eigenvalue above the cutoff) and the restricted matrix.
std::pair<MatrixXcd, MatrixXcd> support_restrict(const MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    const double cutoff = 1e-11 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<int> cols;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > cutoff) cols.push_back(i);
    MatrixXcd v(m.rows(), cols.size());
    for (size_t k = 0; k < cols.size(); ++k) v.col(k) = es.eigenvectors().col(cols[k]);
    MatrixXcd mr = v.adjoint() * m * v;
    mr = 0.5 * (mr + mr.adjoint().eval());
    return {v, mr};
}

double log2_clamped(double x) { return std::log2(std::max(x, 1e-300)); }

}  // namespace

double hmin_fixed(const DensityOperator& rho, const std::vector<std::string>& target,
                  const DensityOperator& varsigma) {
    Bipartite bp = split(rho, target);
    if (varsigma.dim() != bp.db) throw std::invalid_argument("conditioning state dimension mismatch");
    if (std::abs(varsigma.trace() - 1.0) > tolerances().trace)
        throw std::invalid_argument("conditioning state must be normalized");

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(varsigma.matrix());
    const double cutoff = 1e-11 * std::max(1.0, es.eigenvalues().maxCoeff());
    VectorXcd inv_sqrt = VectorXcd::Zero(bp.db);
    MatrixXcd proj_off = MatrixXcd::Zero(bp.db, bp.db);  // projector outside supp(varsigma)
    for (int i = 0; i < bp.db; ++i) {
        if (es.eigenvalues()(i) > cutoff)
            inv_sqrt(i) = 1.0 / std::sqrt(es.eigenvalues()(i));
        else
            proj_off += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    // Support check: rho must vanish outside I (x) supp(varsigma).
    MatrixXcd big_off = MatrixXcd::Zero(bp.da * bp.db, bp.da * bp.db);
    for (int a = 0; a < bp.da; ++a)
        big_off.block(a * bp.db, a * bp.db, bp.db, bp.db) = proj_off;
    if ((big_off * bp.rho * big_off).cwiseAbs().maxCoeff() > 1e-9)
        return -std::numeric_limits<double>::infinity();

    MatrixXcd isq = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
    MatrixXcd big = MatrixXcd::Zero(bp.da * bp.db, bp.da * bp.db);
    for (int a = 0; a < bp.da; ++a) big.block(a * bp.db, a * bp.db, bp.db, bp.db) = isq;
    MatrixXcd scaled = big * bp.rho * big;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es2(0.5 * (scaled + scaled.adjoint().eval()),
                                                 Eigen::EigenvaluesOnly);
    return -log2_clamped(es2.eigenvalues().maxCoeff());
}

SmoothEntropyResult hmin(const DensityOperator& rho, const std::vector<std::string>& target) {
    Bipartite bp = split(rho, target);
    HermitianProgram prog;
    auto sigma = prog.hermitian(bp.db);
    const int blk = prog.block(bp.da * bp.db);
    prog.add_const_matrix(blk, -bp.rho);
    prog.add_hermitian_kron_coeff(blk, sigma, 1.0, bp.da, 1);
    prog.objective_trace(sigma, -1.0);

    auto res = prog.solve(solver_options());
    SmoothEntropyResult out;
    out.value = -log2_clamped(-res.value);
    out.epsilon = 0.0;
    out.status = map_status(res);
    out.duality_gap = res.gap;
    MatrixXcd s = prog.extract_hermitian(res, sigma);
    const double tr = s.trace().real();
    if (tr > 1e-12)
        out.achiever = DensityOperator::unchecked(s / tr, bp.cond_layout, Normalization::Normalized);
    return out;
}

SmoothEntropyResult hmax(const DensityOperator& rho, const std::vector<std::string>& target) {
    Bipartite bp = split(rho, target);
    auto [v, rho_r] = support_restrict(bp.rho);
    const int r = static_cast<int>(rho_r.rows());
    const int d = bp.da * bp.db;

    HermitianProgram prog;
    auto sigma = prog.hermitian(bp.db);
    auto x = prog.complex_matrix(r, d);
    const int fid = prog.block(r + d);
    prog.add_const_matrix(fid, rho_r, 0, 0);
    prog.add_complex_coeff(fid, x, Complex(1, 0), 0, r);
    prog.add_hermitian_kron_coeff(fid, sigma, 1.0, bp.da, 1, r);
    const int one = prog.block(1);
    prog.add_const(one, 0, 0, Complex(1, 0));
    for (int i = 0; i < bp.db; ++i)
        prog.add_scalar_coeff(one, sigma.first_coord + i, 0, 0, Complex(-1, 0));
    // objective: Re tr(V X), the root fidelity under the block certificate.
    {
        int coord = x.first_coord;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < d; ++j) {
                const Complex vj = v(j, i);  // tr(VX) = sum_ij V(j,i) X(i,j)
                prog.objective(coord, vj.real());
                prog.objective(coord + 1, -vj.imag());
                coord += 2;
            }
    }

    auto res = prog.solve(solver_options());
    SmoothEntropyResult out;
    out.value = 2.0 * log2_clamped(res.value);
    out.epsilon = 0.0;
    out.status = map_status(res);
    out.duality_gap = res.gap;
    MatrixXcd s = prog.extract_hermitian(res, sigma);
    const double tr = s.trace().real();
    if (tr > 1e-12)
        out.achiever = DensityOperator::unchecked(s / tr, bp.cond_layout, Normalization::Normalized);
    return out;
}

SmoothEntropyResult hmax_via_duality(const DensityOperator& rho,
                                     const std::vector<std::string>& target) {
    PureState psi = purify(rho, "pur");
    const std::string ref = psi.layout().factors().back().label;
    std::set<std::string> keep(target.begin(), target.end());
    keep.insert(ref);
    DensityOperator marg = partial_trace(psi.density(), keep);
    SmoothEntropyResult r = hmin(marg, target);
    r.value = -r.value;
    return r;
}

SmoothEntropyResult hmin_smooth(const DensityOperator& rho, const std::vector<std::string>& target,
                                double epsilon) {
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("smoothing parameter must lie in [0,1)");
    if (epsilon == 0.0) return hmin(rho, target);
    Bipartite bp = split(rho, target);
    const int d = bp.da * bp.db;
    if (d > kMaxSmoothDim)
        throw std::invalid_argument("joint dimension too large for smoothed entropy SDP");

    auto [v, rho_r] = support_restrict(bp.rho);
    const int r = static_cast<int>(rho_r.rows());
    const double tr_rho = std::min(1.0, bp.rho.trace().real());
    const double credit_budget = 1.0 - tr_rho;  // (1 - tr rho) in the generalized fidelity
    const bool with_credit = credit_budget > 1e-12;
    const double target_f = std::sqrt(1.0 - epsilon * epsilon);

    HermitianProgram prog;
    auto sigma = prog.hermitian(bp.db);
    auto rho_hat = prog.hermitian(d);
    auto x = prog.complex_matrix(r, d);
    int w = -1;

    // I (x) sigma - rho_hat >= 0
    const int cone = prog.block(d);
    prog.add_hermitian_kron_coeff(cone, sigma, 1.0, bp.da, 1);
    prog.add_hermitian_coeff(cone, rho_hat, -1.0);

    // Fidelity certificate [[rho_r, X], [X^dag, rho_hat]] >= 0
    const int fid = prog.block(r + d);
    prog.add_const_matrix(fid, rho_r, 0, 0);
    prog.add_complex_coeff(fid, x, Complex(1, 0), 0, r);
    prog.add_hermitian_coeff(fid, rho_hat, 1.0, r);

    // Re tr(V X) (+ credit w) >= sqrt(1 - eps^2)
    const int lin = prog.block(1);
    prog.add_const(lin, 0, 0, Complex(-target_f, 0));
    {
        int coord = x.first_coord;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < d; ++j) {
                const Complex vj = v(j, i);
                if (vj.real() != 0.0) prog.add_scalar_coeff(lin, coord, 0, 0, Complex(vj.real(), 0));
                if (vj.imag() != 0.0)
                    prog.add_scalar_coeff(lin, coord + 1, 0, 0, Complex(-vj.imag(), 0));
                coord += 2;
            }
    }
    if (with_credit) {
        w = prog.scalar();
        prog.add_scalar_coeff(lin, w, 0, 0, Complex(1, 0));
        // w^2 <= (1 - tr rho)(1 - tr rho_hat) as a 2x2 PSD block.
        const int cred = prog.block(2);
        prog.add_const(cred, 0, 0, Complex(credit_budget, 0));
        prog.add_scalar_coeff(cred, w, 0, 1, Complex(1, 0));
        prog.add_const(cred, 1, 1, Complex(1, 0));
        for (int i = 0; i < d; ++i)
            prog.add_scalar_coeff(cred, rho_hat.first_coord + i, 1, 1, Complex(-1, 0));
    } else {
        const int sub = prog.block(1);
        prog.add_const(sub, 0, 0, Complex(1, 0));
        for (int i = 0; i < d; ++i)
            prog.add_scalar_coeff(sub, rho_hat.first_coord + i, 0, 0, Complex(-1, 0));
    }
    prog.objective_trace(sigma, -1.0);

    auto res = prog.solve(solver_options());
    SmoothEntropyResult out;
    out.value = -log2_clamped(-res.value);
    out.epsilon = epsilon;
    out.status = map_status(res);
    out.duality_gap = res.gap;
    MatrixXcd hat = prog.extract_hermitian(res, rho_hat);
    SystemLayout joint = bp.target_layout.tensor_with(bp.cond_layout);
    out.achiever =
        DensityOperator::unchecked(std::move(hat), std::move(joint), Normalization::Subnormalized);
    return out;
}

SmoothEntropyResult hmax_smooth(const DensityOperator& rho, const std::vector<std::string>& target,
                                double epsilon) {
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("smoothing parameter must lie in [0,1)");
    PureState psi = purify(rho, "pur");
    const std::string ref = psi.layout().factors().back().label;
    std::set<std::string> keep(target.begin(), target.end());
    keep.insert(ref);
    DensityOperator marg = partial_trace(psi.density(), keep);
    SmoothEntropyResult r = hmin_smooth(marg, target, epsilon);
    r.value = -r.value;
    return r;
}

double von_neumann_marginal(const DensityOperator& rho, const std::vector<std::string>& part) {
    std::set<std::string> keep(part.begin(), part.end());
    return von_neumann_entropy_bits(partial_trace(rho, keep).matrix());
}

double von_neumann_cond(const DensityOperator& rho, const std::vector<std::string>& target) {
    std::set<std::string> rest;
    std::set<std::string> tset(target.begin(), target.end());
    for (const auto& f : rho.layout().factors())
        if (!tset.count(f.label)) rest.insert(f.label);
    const double h_all = von_neumann_entropy_bits(rho.matrix());
    if (rest.empty()) return h_all;
    const double h_cond = von_neumann_entropy_bits(partial_trace(rho, rest).matrix());
    return h_all - h_cond;
}

double mutual_info(const DensityOperator& rho, const std::vector<std::string>& part) {
    std::set<std::string> pset(part.begin(), part.end());
    std::vector<std::string> rest;
    for (const auto& f : rho.layout().factors())
        if (!pset.count(f.label)) rest.push_back(f.label);
    return von_neumann_marginal(rho, part) + von_neumann_marginal(rho, rest) -
           von_neumann_entropy_bits(rho.matrix());
}

}  // namespace qcap
