#include "qcap/decoupling.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qcap/linalg.hpp"

namespace qcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Block unitary sum_j |j><j| (x) U_j on Ac (x) Ar.
MatrixXcd block_unitary(const std::vector<MatrixXcd>& blocks) {
    const int J = static_cast<int>(blocks.size());
    const int r = static_cast<int>(blocks[0].rows());
    MatrixXcd u = MatrixXcd::Zero(J * r, J * r);
    for (int j = 0; j < J; ++j) u.block(j * r, j * r, r, r) = blocks[j];
    return u;
}

/// Permutation unitary sum_j |s(j)><j| (x) I_r on Ac (x) Ar.
MatrixXcd permutation_unitary(const std::vector<int>& s, int r) {
    const int J = static_cast<int>(s.size());
    MatrixXcd g = MatrixXcd::Zero(J * r, J * r);
    for (int j = 0; j < J; ++j) g.block(s[j] * r, j * r, r, r) = MatrixXcd::Identity(r, r);
    return g;
}

double hmin_maybe_smooth(const DensityOperator& rho, const std::vector<std::string>& target,
                         double eps) {
    return eps > 0 ? hmin_smooth(rho, target, eps).value : hmin(rho, target).value;
}

double hmax_maybe_smooth(const DensityOperator& rho, const std::vector<std::string>& target,
                         double eps) {
    return eps > 0 ? hmax_smooth(rho, target, eps).value : hmax(rho, target).value;
}

struct Welford {
    long long n = 0;
    double mean = 0, m2 = 0;
    void push(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    void merge(const Welford& o) {
        if (o.n == 0) return;
        const double d = o.mean - mean;
        const long long tot = n + o.n;
        mean += d * o.n / tot;
        m2 += o.m2 + d * d * double(n) * double(o.n) / tot;
        n = tot;
    }
};

}  // namespace

RPDInstance RPDInstance::make(DensityOperator psi, ChannelRep map_a_to_e, double epsilon,
                              double mu) {
    const auto& lay = psi.layout();
    if (lay.num_factors() != 4 || lay.factors()[0].label != "Ac" ||
        lay.factors()[1].label != "Ar" || lay.factors()[2].label != "Rc" ||
        lay.factors()[3].label != "Rr")
        throw std::invalid_argument("decoupling state layout must be {Ac, Ar, Rc, Rr}");
    const int J = lay.factor_dim(0), r = lay.factor_dim(1);
    if (lay.factor_dim(2) != J)
        throw std::invalid_argument("Rc dimension must equal the number of blocks");
    if (epsilon < 0 || mu < 0) throw std::invalid_argument("smoothing parameters must be >= 0");
    // Classical coherence: the (k,l) block in Ac must sit on |k><l| of Rc, so
    // any row whose Rc digit differs from its Ac digit must vanish.
    const int rr = lay.factor_dim(3);
    const auto& m = psi.matrix();
    double residual = 0;
    for (int k = 0; k < J; ++k)
        for (int ar = 0; ar < r; ++ar)
            for (int rc = 0; rc < J; ++rc) {
                if (rc == k) continue;
                for (int rrow = 0; rrow < rr; ++rrow) {
                    const int row = ((k * r + ar) * J + rc) * rr + rrow;
                    residual = std::max(residual, m.row(row).cwiseAbs().maxCoeff());
                }
            }
    if (residual > 1e-10)
        throw std::invalid_argument("state is not classically coherent between Ac and Rc");
    if (map_a_to_e.in_dim() != J * r)
        throw std::invalid_argument("map input dimension must match Ac (x) Ar");

    RPDInstance inst;
    inst.psi_ = std::move(psi);
    inst.map_ =
        map_a_to_e.with_layouts(SystemLayout({{"Ac", J}, {"Ar", r}}), map_a_to_e.out_layout());
    inst.eps_ = epsilon;
    inst.mu_ = mu;
    inst.J_ = J;
    inst.r_ = r;
    inst.rr_ = rr;
    return inst;
}

DensityOperator averaged_state(const RPDInstance& inst) {
    const int J = inst.num_blocks(), r = inst.block_dim(), rr = inst.ref_block_dim();
    const int dR = J * rr;
    MatrixXcd out = MatrixXcd::Zero(inst.psi().dim(), inst.psi().dim());
    for (int j = 0; j < J; ++j) {
        // R-marginal of the (j,j) block of Ac, traced over Ar.
        MatrixXcd blockR = MatrixXcd::Zero(dR, dR);
        for (int ar = 0; ar < r; ++ar)
            for (int x = 0; x < dR; ++x)
                for (int y = 0; y < dR; ++y)
                    blockR(x, y) +=
                        inst.psi().matrix()((j * r + ar) * dR + x, (j * r + ar) * dR + y);
        for (int ar = 0; ar < r; ++ar)
            for (int x = 0; x < dR; ++x)
                for (int y = 0; y < dR; ++y)
                    out((j * r + ar) * dR + x, (j * r + ar) * dR + y) += blockR(x, y) / double(r);
    }
    return DensityOperator::unchecked(std::move(out), inst.psi().layout(),
                                      inst.psi().normalization());
}

double sample_delta(const RPDInstance& inst, RngStream& rng) {
    const int J = inst.num_blocks(), r = inst.block_dim();
    std::vector<MatrixXcd> blocks(J);
    for (int j = 0; j < J; ++j) blocks[j] = haar_unitary(r, rng);
    const auto s = random_permutation(J, rng);

    const MatrixXcd gu = permutation_unitary(s, r) * block_unitary(blocks);
    const int dR = J * inst.ref_block_dim();
    const int dA = J * r;

    // T o G_s ( U(psi) - psi_av ): the average is invariant under every U in
    // the ensemble, so the difference is conjugated by G_s U in one pass.
    MatrixXcd big = MatrixXcd::Zero(dA * dR, dA * dR);
    for (int i = 0; i < dA; ++i)
        for (int j = 0; j < dA; ++j) {
            if (gu(i, j) == Complex(0, 0)) continue;
            for (int x = 0; x < dR; ++x) big(i * dR + x, j * dR + x) = gu(i, j);
        }
    const MatrixXcd diff =
        big * (inst.psi().matrix() - averaged_state(inst).matrix()) * big.adjoint();
    auto diff_op =
        DensityOperator::unchecked(diff, inst.psi().layout(), Normalization::Subnormalized);
    return trace_norm(inst.map().apply(diff_op).matrix());
}

DirectBound direct_bound_rhs(const RPDInstance& inst) {
    const int J = inst.num_blocks(), r = inst.block_dim();
    const double eps = inst.epsilon(), mu = inst.mu();
    DirectBound out;

    auto tau = inst.map().complementary("C").to_choi();  // on (Ac, Ar, C)
    auto tau_deph = dephase(tau, "Ac");

    if (J >= 2) {
        const double hmin_ar = hmin_maybe_smooth(inst.psi(), {"Ac", "Ar"}, eps);
        const double hmax_ac = hmax_maybe_smooth(tau_deph, {"Ac", "Ar"}, mu);
        out.exponent_perm = std::log2(double(J - 1)) + hmin_ar - hmax_ac;
        out.theta_perm = std::exp2(-0.5 * out.exponent_perm);
    } else {
        out.exponent_perm = kInf;
        out.theta_perm = 0.0;
    }
    if (r >= 2) {
        const double hmin_deph = hmin_maybe_smooth(dephase(inst.psi(), "Ac"), {"Ac", "Ar"}, eps);
        const double hmax_block = hmax_maybe_smooth(tau_deph, {"Ar"}, mu);
        out.exponent_block = hmin_deph - hmax_block;
        out.theta_block = std::exp2(-0.5 * out.exponent_block);
    } else {
        out.exponent_block = kInf;
        out.theta_block = 0.0;
    }
    out.bound_rhs = out.theta_perm + out.theta_block + 4.0 * (eps + mu + eps * mu);
    return out;
}

DecouplingReport verify_direct_theorem(const RPDInstance& inst, int n_samples, std::uint64_t seed,
                                       int n_threads) {
    if (n_samples < 2) throw std::invalid_argument("need at least two samples");
    const DirectBound bound = direct_bound_rhs(inst);

    if (n_threads <= 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
    const int chunk = 64;
    const int n_chunks = (n_samples + chunk - 1) / chunk;

    std::vector<Welford> acc(n_chunks);
    auto run_chunk = [&](int c) {
        RngStream rng(seed, static_cast<std::uint64_t>(c) + 1);
        const int lo = c * chunk;
        const int hi = std::min(n_samples, lo + chunk);
        for (int i = lo; i < hi; ++i) acc[c].push(sample_delta(inst, rng));
    };
    if (n_threads == 1) {
        for (int c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (int t = 0; t < n_threads; ++t)
            futs.push_back(std::async(std::launch::async, [&]() {
                for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
            }));
        for (auto& f : futs) f.get();
    }
    Welford total;
    for (const auto& w : acc) total.merge(w);

    DecouplingReport rep;
    rep.mean_delta = total.mean;
    rep.std_error = std::sqrt(total.m2 / double(total.n - 1)) / std::sqrt(double(total.n));
    rep.bound_rhs = bound.bound_rhs;
    rep.n_samples = n_samples;
    rep.exponent_perm = bound.exponent_perm;
    rep.exponent_block = bound.exponent_block;
    rep.pass = rep.mean_delta - 3.0 * rep.std_error <= rep.bound_rhs;
    return rep;
}

double converse_lambda(double delta, double iota, double upsilon) {
    const double t = 20.0 * upsilon + 2.0 * delta;
    return 2.0 * std::sqrt(iota + 4.0 * std::sqrt(t)) + std::sqrt(2.0 * std::sqrt(t)) +
           2.0 * std::sqrt(2.0 * delta) + 2.0 * std::sqrt(t) + 3.0 * upsilon;
}

double converse_lambda_prime(double delta, double iota, double upsilon) {
    const double x = std::sqrt(2.0) * std::pow(24.0 * upsilon + 2.0 * delta, 0.25);
    return upsilon + std::sqrt(4.0 * std::sqrt(iota + 2.0 * x) + 2.0 * std::sqrt(x) +
                               (4.0 * std::sqrt(iota + 8.0) + 24.0) * x);
}

ConverseCheck check_converse_theorem(const RPDInstance& inst, const DensityOperator& omega,
                                     double delta, double iota, double upsilon) {
    if (inst.map().trace_flag() != TraceFlag::TracePreserving)
        throw std::invalid_argument("converse bound requires a trace-preserving map");
    if (iota <= 0 || iota > 1) throw std::invalid_argument("iota must lie in (0,1]");
    if (upsilon < 0 || upsilon >= 0.5) throw std::invalid_argument("upsilon must lie in [0,1/2)");

    ConverseCheck out;
    out.lambda = converse_lambda(delta, iota, upsilon);
    out.lambda_prime = converse_lambda_prime(delta, iota, upsilon);

    auto mapped = inst.map().apply(inst.psi());  // on (E, Rc, Rr)
    if (!(omega.layout() == mapped.layout()))
        throw std::invalid_argument("omega must live on the map output layout (E, Rc, Rr)");
    // Decoupled form: omega = sum_j p_j sigma_j^E (x) |j><j|^{Rc} (x) psi_j^{Rr}
    // with p_j and psi_j^{Rr} the block weights and marginals of psi.
    {
        auto deph = dephase(omega, "Rc");
        if (trace_distance(deph, omega) > 1e-8)
            throw std::invalid_argument("omega must be diagonal in Rc");
        const int dE = omega.layout().factor_dim(0);
        const int J = inst.num_blocks(), rr = inst.ref_block_dim();
        const int r = inst.block_dim();
        const auto& m = omega.matrix();
        for (int j = 0; j < J; ++j) {
            MatrixXcd block(dE * rr, dE * rr);
            for (int e = 0; e < dE; ++e)
                for (int x = 0; x < rr; ++x)
                    for (int e2 = 0; e2 < dE; ++e2)
                        for (int x2 = 0; x2 < rr; ++x2)
                            block(e * rr + x, e2 * rr + x2) =
                                m((e * J + j) * rr + x, (e2 * J + j) * rr + x2);
            const double pj = block.trace().real();
            if (pj < 1e-12) continue;
            MatrixXcd epart = MatrixXcd::Zero(dE, dE), rpart = MatrixXcd::Zero(rr, rr);
            for (int e = 0; e < dE; ++e)
                for (int e2 = 0; e2 < dE; ++e2)
                    for (int x = 0; x < rr; ++x) epart(e, e2) += block(e * rr + x, e2 * rr + x);
            for (int x = 0; x < rr; ++x)
                for (int x2 = 0; x2 < rr; ++x2)
                    for (int e = 0; e < dE; ++e) rpart(x, x2) += block(e * rr + x, e * rr + x2);
            MatrixXcd prod(dE * rr, dE * rr);
            for (int e = 0; e < dE; ++e)
                for (int e2 = 0; e2 < dE; ++e2)
                    for (int x = 0; x < rr; ++x)
                        for (int x2 = 0; x2 < rr; ++x2)
                            prod(e * rr + x, e2 * rr + x2) = epart(e, e2) * rpart(x, x2) / pj;
            if (trace_norm(block - prod) > 1e-8)
                throw std::invalid_argument("omega block is not a product across E and Rr");
            // The Rr factor must be the corresponding block marginal of psi.
            MatrixXcd psi_j = MatrixXcd::Zero(rr, rr);
            for (int ar = 0; ar < r; ++ar)
                for (int x = 0; x < rr; ++x)
                    for (int x2 = 0; x2 < rr; ++x2)
                        psi_j(x, x2) += inst.psi().matrix()(((j * r + ar) * J + j) * rr + x,
                                                            ((j * r + ar) * J + j) * rr + x2);
            if ((rpart - psi_j).cwiseAbs().maxCoeff() > 1e-8)
                throw std::invalid_argument("omega Rr marginal must match the psi block marginal");
        }
    }
    out.hypothesis_distance = trace_distance(mapped, omega);
    out.hypothesis_ok = out.hypothesis_distance <= delta + 1e-12;
    if (!out.hypothesis_ok)
        throw std::invalid_argument("omega is farther from the mapped state than delta");

    const int J = inst.num_blocks();

    PureState psi_pure = purify(inst.psi(), "B");
    const std::string b_label = psi_pure.layout().factors().back().label;
    auto comp = inst.map().complementary("C");
    auto mapped_c = comp.apply(dephase(psi_pure.density(), "Ac"));  // on (C, Rc, Rr, B)

    const double log_iota = std::log2(iota);

    if (out.lambda >= 1.0) {
        out.saturated = true;
        out.ineq_mixing = true;
        out.slack_mixing = kInf;
    } else {
        const double h1 = hmin_maybe_smooth(inst.psi(), {"Ac", "Ar"}, out.lambda);
        const double h2 = hmin_maybe_smooth(mapped_c, {b_label, "Rc", "Rr"}, upsilon);
        out.slack_mixing = h1 - h2 + std::log2(double(J)) - log_iota;
        out.ineq_mixing = out.slack_mixing >= -1e-7;
    }

    if (out.lambda_prime >= 1.0) {
        out.saturated = true;
        out.ineq_block = true;
        out.slack_block = kInf;
    } else {
        const double h1 =
            hmin_maybe_smooth(dephase(inst.psi(), "Ac"), {"Ac", "Ar"}, out.lambda_prime);
        const double h2 = hmin_maybe_smooth(mapped_c, {b_label, "Rr"}, upsilon);
        out.slack_block = h1 - h2 - log_iota - std::log2(1.0 - 2.0 * upsilon);
        out.ineq_block = out.slack_block >= -1e-7;
    }
    return out;
}

DensityOperator random_classically_coherent(int num_blocks, int block_dim, int ref_dim,
                                            RngStream& rng) {
    const int J = num_blocks, r = block_dim, rr = ref_dim;
    std::vector<VectorXcd> phis(J);
    std::vector<double> p(J);
    double tot = 0;
    for (int k = 0; k < J; ++k) {
        phis[k] = random_pure_vector(r * rr, rng);
        p[k] = 0.2 + rng.uniform();
        tot += p[k];
    }
    SystemLayout lay({{"Ac", J}, {"Ar", r}, {"Rc", J}, {"Rr", rr}});
    VectorXcd v = VectorXcd::Zero(lay.dim());
    for (int k = 0; k < J; ++k) {
        const double amp = std::sqrt(p[k] / tot);
        for (int ar = 0; ar < r; ++ar)
            for (int x = 0; x < rr; ++x)
                v(((k * r + ar) * J + k) * rr + x) = amp * phis[k](ar * rr + x);
    }
    return PureState(v, lay).density();
}

}  // namespace qcap
