#include "qcap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "qcap/linalg.hpp"
#include "qcap/random.hpp"

namespace qcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hmax_eps(const DensityOperator& rho, const std::vector<std::string>& target, double eps) {
    return eps > 0 ? hmax_smooth(rho, target, eps).value : hmax(rho, target).value;
}

double log2d(double x) { return std::log2(x); }

/// Downhill simplex maximization on [0,1]^k (reflections clipped to the box).
Eigen::VectorXd nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& start, double step, int iters,
                                double* best_val) {
    const int k = static_cast<int>(start.size());
    std::vector<Eigen::VectorXd> pts;
    std::vector<double> vals;
    auto clip = [](Eigen::VectorXd v) {
        for (int i = 0; i < v.size(); ++i) v(i) = std::min(1.0, std::max(0.0, v(i)));
        return v;
    };
    pts.push_back(clip(start));
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd p = start;
        p(i) += (p(i) + step <= 1.0) ? step : -step;
        pts.push_back(clip(p));
    }
    for (auto& p : pts) vals.push_back(f(p));
    for (int it = 0; it < iters; ++it) {
        // order: vals[order[0]] is the worst point for a maximization
        int worst = 0, best = 0;
        for (int i = 1; i <= k; ++i) {
            if (vals[i] < vals[worst]) worst = i;
            if (vals[i] > vals[best]) best = i;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(k);
        for (int i = 0; i <= k; ++i)
            if (i != worst) centroid += pts[i];
        centroid /= double(k);
        Eigen::VectorXd refl = clip(centroid + (centroid - pts[worst]));
        const double fr = f(refl);
        if (fr > vals[best]) {
            Eigen::VectorXd exp_pt = clip(centroid + 2.0 * (centroid - pts[worst]));
            const double fe = f(exp_pt);
            if (fe > fr) {
                pts[worst] = exp_pt;
                vals[worst] = fe;
            } else {
                pts[worst] = refl;
                vals[worst] = fr;
            }
        } else if (fr > vals[worst]) {
            pts[worst] = refl;
            vals[worst] = fr;
        } else {
            Eigen::VectorXd con = clip(centroid + 0.5 * (pts[worst] - centroid));
            const double fc = f(con);
            if (fc > vals[worst]) {
                pts[worst] = con;
                vals[worst] = fc;
            } else {
                for (int i = 0; i <= k; ++i)
                    if (i != best) {
                        pts[i] = clip(pts[best] + 0.5 * (pts[i] - pts[best]));
                        vals[i] = f(pts[i]);
                    }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= k; ++i)
        if (vals[i] > vals[best]) best = i;
    if (best_val) *best_val = vals[best];
    return pts[best];
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    if (n <= 1) {
        g.push_back(hi);
        return g;
    }
    for (int i = 0; i < n; ++i)
        g.push_back(lo * std::pow(hi / lo, double(i) / double(n - 1)));
    return g;
}

}  // namespace

CodeParams::CodeParams(double c_, double q_, double e_, double delta_)
    : c(c_), q(q_), e(e_), delta(delta_) {
    if (c < 0 || q < 0) throw std::invalid_argument("message sizes must be nonnegative");
    if (delta <= 0 || delta > 2) throw std::invalid_argument("delta must lie in (0,2]");
}

InputEnsemble InputEnsemble::make(DensityOperator rho, bool require_max_mixed) {
    const auto& lay = rho.layout();
    if (lay.num_factors() != 3 || lay.factors()[0].label != "Sc" ||
        lay.factors()[1].label != "Sr" || lay.factors()[2].label != "A")
        throw std::invalid_argument("ensemble layout must be {Sc, Sr, A}");
    if (trace_distance(dephase(rho, "Sc"), rho) > 1e-10)
        throw std::invalid_argument("ensemble must be block diagonal in Sc");
    InputEnsemble e;
    e.d_sc_ = lay.factor_dim(0);
    e.d_sr_ = lay.factor_dim(1);
    auto s_marg = partial_trace(rho, {"Sc", "Sr"});
    const int ds = e.d_sc_ * e.d_sr_;
    e.max_mixed_ =
        (s_marg.matrix() - MatrixXcd::Identity(ds, ds) / double(ds)).cwiseAbs().maxCoeff() <= 1e-8;
    if (require_max_mixed && !e.max_mixed_)
        throw std::invalid_argument("ensemble marginal on S must be maximally mixed");
    e.rho_ = std::move(rho);
    return e;
}

DensityOperator InputEnsemble::output(const ChannelRep& channel) const {
    if (channel.in_dim() != rho_.layout().factor_dim(2))
        throw std::invalid_argument("channel input does not match the ensemble A factor");
    auto ch = channel.with_layouts(SystemLayout::single("A", channel.in_dim()),
                                   SystemLayout::single("B", channel.out_dim()));
    return ch.apply(rho_);
}

DirectFeasibility direct_feasible(const InputEnsemble& ens, const ChannelRep& channel,
                                  const CodeParams& code, const SmoothingBudget& budget) {
    if (!ens.max_mixed())
        throw std::invalid_argument("direct bound requires a maximally mixed S marginal");
    if (budget.epsilon < 0) throw std::invalid_argument("epsilon must be nonnegative");
    const int d_sc = ens.d_sc(), d_sr = ens.d_sr();
    if (d_sc == 1 && code.c > 0)
        throw std::invalid_argument("classical bits require d_Sc >= 2^c");
    if (d_sc > 1 && std::exp2(code.c) > d_sc + 1e-9)
        throw std::invalid_argument("classical register too small: d_Sc < 2^c");
    if (d_sr == 1 && (code.q > 0 || code.e > 0))
        throw std::invalid_argument("the single-sector branch needs q = e = 0");

    DirectFeasibility out;
    out.joint_used = d_sc >= 2;
    out.quantum_used = d_sr >= 2;
    const double delta1 = out.joint_used ? budget.delta1 : 0.0;
    const double delta2 = out.quantum_used ? budget.delta2 : 0.0;
    if (out.joint_used && delta1 <= 0)
        throw std::invalid_argument("delta1 must be positive when the joint bound is active");
    if (out.quantum_used && delta2 <= 0)
        throw std::invalid_argument("delta2 must be positive when the quantum bound is active");

    auto nrho = ens.output(channel);
    out.slack_dim = log2d(d_sr) - (code.q + code.e);
    bool ok = out.slack_dim >= -1e-12;

    if (out.joint_used) {
        const double h = hmax_eps(nrho, {"Sc", "Sr"}, budget.epsilon);
        out.slack_joint = -h + log2d(d_sc - 1) + log2d(delta1) - (code.c + code.q - code.e);
        ok = ok && out.slack_joint >= -1e-12;
    } else {
        out.slack_joint = kInf;
    }
    if (out.quantum_used) {
        const double h = hmax_eps(nrho, {"Sr"}, budget.epsilon);
        out.slack_quantum = -h + log2d(delta2) - (code.q - code.e);
        ok = ok && out.slack_quantum >= -1e-12;
    } else {
        out.slack_quantum = kInf;
    }
    out.achieved_error =
        2.0 * std::sqrt(std::sqrt(delta1) + std::sqrt(delta2) + 4.0 * budget.epsilon);
    out.feasible = ok;
    return out;
}

double oneshot_lambda(double delta, double iota) {
    const double x = 2.0 * std::pow(delta, 0.125);
    return 2.0 * std::sqrt(iota + 2.0 * x * x) + x + 2.0 * x * x;
}

double oneshot_lambda_prime(double delta, double iota) {
    const double x = 2.0 * std::pow(delta, 0.125);
    return std::sqrt(4.0 * std::sqrt(iota + 2.0 * x) + 2.0 * std::sqrt(x) +
                     (4.0 * std::sqrt(iota + 8.0) + 24.0) * x);
}

double table_epsilon(double delta, double delta_prime) {
    return delta * delta / 16.0 - std::sqrt(delta_prime) / 4.0;
}

ConverseReport converse_holds(const InputEnsemble& ens, const ChannelRep& channel,
                              const CodeParams& code, double iota) {
    if (!ens.max_mixed())
        throw std::invalid_argument("converse bound requires a maximally mixed S marginal");
    if (iota <= 0 || iota > 1) throw std::invalid_argument("iota must lie in (0,1]");
    ConverseReport out;
    out.lambda = oneshot_lambda(code.delta, iota);
    out.lambda_prime = oneshot_lambda_prime(code.delta, iota);
    auto nrho = ens.output(channel);

    out.slack_dim = log2d(ens.d_sr()) - (code.q + code.e);
    bool ok = out.slack_dim >= -1e-12;

    if (out.lambda >= 1.0) {
        out.saturated = true;
        out.slack_joint = kInf;
    } else {
        const double h = hmax_eps(nrho, {"Sc", "Sr"}, out.lambda);
        out.slack_joint =
            -h + log2d(ens.d_sc()) - std::log2(iota) - (code.c + code.q - code.e);
        ok = ok && out.slack_joint >= -1e-12;
    }
    if (out.lambda_prime >= 1.0) {
        out.saturated = true;
        out.slack_quantum = kInf;
    } else {
        const double h = hmax_eps(nrho, {"Sr"}, out.lambda_prime);
        out.slack_quantum = -h - std::log2(iota) - (code.q - code.e);
        ok = ok && out.slack_quantum >= -1e-12;
    }
    out.holds = ok;
    return out;
}

UnlimitedDirectResult unlimited_direct(const InputEnsemble& ens, const ChannelRep& channel,
                                       double c, double q, const SmoothingBudget& budget) {
    if (!ens.max_mixed())
        throw std::invalid_argument("direct bound requires a maximally mixed S marginal");
    if (budget.epsilon < 0 || budget.epsilon >= 0.5)
        throw std::invalid_argument("epsilon must lie in [0, 1/2)");
    if (budget.delta_prime <= 0 || budget.delta_prime > 1.0 - 2.0 * budget.epsilon)
        throw std::invalid_argument("delta' must lie in (0, 1-2 epsilon]");
    UnlimitedDirectResult out;
    auto nrho = ens.output(channel);
    const double h = hmax_eps(nrho, {"Sc", "Sr"}, budget.epsilon);
    out.slack = log2d(ens.d_s()) - h + std::log2(budget.delta_prime) - (c + 2.0 * q);
    out.achieved_error = 2.0 * std::sqrt(std::sqrt(2.0 * budget.delta_prime) +
                                         std::sqrt(budget.delta_prime) + 4.0 * budget.epsilon);
    out.feasible = out.slack >= -1e-12;
    return out;
}

UnlimitedConverseResult unlimited_converse(const InputEnsemble& ens, const ChannelRep& channel,
                                           double c, double q, double iota, double delta) {
    if (iota <= 0 || iota > 1) throw std::invalid_argument("iota must lie in (0,1]");
    UnlimitedConverseResult out;
    out.lambda = oneshot_lambda(delta, iota);
    if (out.lambda >= 1.0) {
        out.saturated = true;
        out.slack = kInf;
        out.holds = true;
        return out;
    }
    auto nrho = ens.output(channel);
    const double h = hmax_eps(nrho, {"Sc", "Sr"}, out.lambda);
    out.slack = log2d(ens.d_s()) - h - std::log2(iota) - (c + 2.0 * q);
    out.holds = out.slack >= -1e-12;
    return out;
}

InputEnsemble family_member(const ChannelRep& channel, int d_sc, int d_sr,
                            const Eigen::VectorXd& x) {
    const int d_a = channel.in_dim();
    if (d_sr > d_a)
        throw std::invalid_argument("family requires d_Sr <= channel input dimension");
    const double t = std::min(1.0, std::max(0.0, x.size() > 0 ? x(0) : 0.0));
    const double theta = (x.size() > 1 ? x(1) : 0.0) * M_PI;
    const double phi = (x.size() > 2 ? x(2) : 0.0) * M_PI;

    // two fixed Hermitian generators give a two-angle unitary family in any
    // dimension; sectors are distinguished by a cyclic shift
    MatrixXcd g1 = MatrixXcd::Zero(d_a, d_a), g2 = MatrixXcd::Zero(d_a, d_a);
    for (int i = 0; i + 1 < d_a; ++i) {
        g1(i, i + 1) = Complex(0.5, 0);
        g1(i + 1, i) = Complex(0.5, 0);
        g2(i, i + 1) = Complex(0, -0.5);
        g2(i + 1, i) = Complex(0, 0.5);
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> e1(g1), e2(g2);
    auto expi = [](const Eigen::SelfAdjointEigenSolver<MatrixXcd>& es, double a) {
        VectorXcd ph(es.eigenvalues().size());
        for (int i = 0; i < ph.size(); ++i) ph(i) = std::exp(Complex(0, -a * es.eigenvalues()(i)));
        return MatrixXcd(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    };
    const MatrixXcd rot = expi(e1, theta) * expi(e2, phi);
    MatrixXcd shift = MatrixXcd::Zero(d_a, d_a);
    for (int i = 0; i < d_a; ++i) shift((i + 1) % d_a, i) = 1.0;

    const int dsa = d_sr * d_a;
    MatrixXcd rho = MatrixXcd::Zero(d_sc * dsa, d_sc * dsa);
    MatrixXcd shifted = MatrixXcd::Identity(d_a, d_a);
    for (int j = 0; j < d_sc; ++j) {
        const MatrixXcd u = shifted * rot;
        VectorXcd v = VectorXcd::Zero(dsa);
        for (int i = 0; i < d_sr; ++i)
            for (int a = 0; a < d_a; ++a) v(i * d_a + a) += u(a, i) / std::sqrt(double(d_sr));
        MatrixXcd block = (1.0 - t) * (v * v.adjoint()).eval() +
                          t * MatrixXcd::Identity(dsa, dsa) / double(dsa);
        rho.block(j * dsa, j * dsa, dsa, dsa) = block / double(d_sc);
        shifted = shift * shifted;
    }
    SystemLayout lay({{"Sc", d_sc}, {"Sr", d_sr}, {"A", d_a}});
    return InputEnsemble::make(DensityOperator(rho, lay));
}

std::vector<InputEnsemble> default_ensemble_family(const ChannelRep& channel,
                                                   const std::vector<std::pair<int, int>>& splits,
                                                   int per_split, std::uint64_t seed) {
    std::vector<InputEnsemble> fam;
    RngStream rng(seed);
    for (auto [sc, sr] : splits) {
        if (sr > channel.in_dim()) continue;
        for (int k = 0; k < per_split; ++k) {
            Eigen::VectorXd x(3);
            if (k == 0)
                x << 0.0, 0.0, 0.0;
            else if (k == 1)
                x << 1.0, 0.0, 0.0;
            else
                x << rng.uniform(), rng.uniform(), rng.uniform();
            fam.push_back(family_member(channel, sc, sr, x));
        }
    }
    return fam;
}

CapacityEstimate capacity_estimate(const ChannelRep& channel, Task task, Assistance assist,
                                   double delta, const CapacitySearchConfig& cfg) {
    if (delta <= 0 || delta > 2) throw std::invalid_argument("delta must lie in (0,2]");
    std::vector<std::pair<int, int>> splits = cfg.splits;
    if (splits.empty()) {
        splits = {{2, 1}, {4, 1}};
        if (channel.in_dim() >= 2) splits.push_back({1, 2});
        if (channel.in_dim() >= 2) splits.push_back({2, 2});
    }
    const double dp_hi = std::pow(delta, 4) / 16.0;
    const auto dp_grid = log_grid(dp_hi * 1e-5, dp_hi, cfg.n_delta_prime);
    const auto iota_grid = log_grid(1e-6, 1.0, cfg.n_iota);

    const bool dephase_all = (task == Task::Classical && assist == Assistance::None);
    auto outstate = [&](const InputEnsemble& ens) {
        auto out = ens.output(channel);
        if (dephase_all) out = dephase(dephase(out, "Sc"), "Sr");
        return out;
    };
    auto lower_term = [&](const InputEnsemble& ens, double dprime) {
        const double eps = table_epsilon(delta, dprime);
        if (eps < 0) return -kInf;
        const double h = hmax_eps(outstate(ens), {"Sc", "Sr"}, eps);
        const double base = log2d(ens.d_s());
        switch (task) {
            case Task::Classical:
                return assist == Assistance::None ? base - h + std::log2(2.0 * dprime)
                                                  : base - h + std::log2(dprime);
            case Task::Quantum:
                return assist == Assistance::None ? -h + std::log2(dprime)
                                                  : 0.5 * (base - h + std::log2(dprime));
        }
        return -kInf;
    };
    auto upper_term = [&](const InputEnsemble& ens, double iota, bool* saturated) {
        const bool use_lambda = (task == Task::Classical && assist == Assistance::None);
        const double smoothing =
            use_lambda ? oneshot_lambda(delta, iota) : oneshot_lambda_prime(delta, iota);
        if (smoothing >= 1.0) {
            *saturated = true;
            return kInf;
        }
        *saturated = false;
        const double h = hmax_eps(outstate(ens), {"Sc", "Sr"}, smoothing);
        const double base = log2d(ens.d_s());
        switch (task) {
            case Task::Classical:
                return base - h - std::log2(iota);
            case Task::Quantum:
                return assist == Assistance::None ? -h - std::log2(iota)
                                                  : 0.5 * (base - h - std::log2(iota));
        }
        return kInf;
    };

    CapacityEstimate best;
    best.lower = -kInf;
    best.upper = -kInf;
    best.upper_saturated = true;
    for (auto [sc, sr] : splits) {
        if (sr > channel.in_dim()) continue;
        auto eval_lower = [&](const Eigen::VectorXd& x) {
            InputEnsemble ens = family_member(channel, sc, sr, x);
            double v = -kInf;
            for (double dp : dp_grid) v = std::max(v, lower_term(ens, dp));
            return v;
        };
        // coarse grid on the mixing parameter and the first angle
        Eigen::VectorXd x0(3);
        double best_grid = -kInf;
        Eigen::VectorXd best_x(3);
        best_x << 0, 0, 0;
        for (int i = 0; i < cfg.grid_points; ++i)
            for (int j = 0; j < cfg.grid_points; ++j) {
                x0 << double(i) / std::max(1, cfg.grid_points - 1),
                    double(j) / std::max(1, cfg.grid_points - 1), 0.0;
                const double v = eval_lower(x0);
                if (v > best_grid) {
                    best_grid = v;
                    best_x = x0;
                }
            }
        double refined_val = best_grid;
        Eigen::VectorXd refined =
            cfg.refine_iters > 0
                ? nelder_mead_max(eval_lower, best_x, 0.15, cfg.refine_iters, &refined_val)
                : best_x;
        if (refined_val > best.lower) {
            best.lower = refined_val;
            best.best_split_sc = sc;
            best.best_split_sr = sr;
            best.best_params = refined;
            // record the maximizing delta'
            InputEnsemble ens = family_member(channel, sc, sr, refined);
            double bdp = dp_grid.back(), bval = -kInf;
            for (double dp : dp_grid) {
                const double v = lower_term(ens, dp);
                if (v > bval) {
                    bval = v;
                    bdp = dp;
                }
            }
            best.best_delta_prime = bdp;
        }
        // upper expression at the refined point and the grid corners
        std::vector<Eigen::VectorXd> probes = {refined, best_x};
        for (const auto& x : probes) {
            InputEnsemble ens = family_member(channel, sc, sr, x);
            double up = kInf;
            bool all_sat = true;
            for (double io : iota_grid) {
                bool sat = false;
                const double v = upper_term(ens, io, &sat);
                if (!sat) {
                    all_sat = false;
                    up = std::min(up, v);
                }
            }
            if (all_sat) up = kInf;
            if (up > best.upper) {
                best.upper = up;
                best.upper_saturated = all_sat;
            }
        }
    }
    best.lower_raw = best.lower;
    best.lower = std::max(0.0, best.lower);  // rates are nonnegative
    if (best.upper < 0) best.upper = 0.0;
    return best;
}

bool region_contains(const Region2D& region, double c, double q, double tol) {
    if (c < -tol || q < -tol) return false;
    if (c <= tol && q <= tol) return true;  // the origin is always achievable
    for (const auto& p : region.pieces)
        if (c <= p.cap_c + tol && q <= p.cap_q + tol && c + q <= p.cap_joint + tol) return true;
    return false;
}

namespace {

// unbounded faces are clipped here for vertex reporting; membership checks
// use the exact caps
constexpr double kVertexClip = 16.0;

void collect_vertices(Region2D& region) {
    std::vector<std::array<double, 2>> pts = {{0.0, 0.0}};
    for (const auto& p : region.pieces) {
        const double cc = std::min(p.cap_c, kVertexClip);
        const double cq = std::min(p.cap_q, kVertexClip);
        const double cj = std::min(p.cap_joint, 2.0 * kVertexClip);
        const double cmax = std::min(cc, cj);
        const double qmax = std::min(cq, cj);
        if (cmax < 0 || qmax < 0) continue;
        pts.push_back({cmax, 0.0});
        pts.push_back({0.0, qmax});
        if (cq < cj) pts.push_back({std::max(0.0, std::min(cc, cj - cq)), cq});
        if (cc < cj) pts.push_back({cc, std::max(0.0, std::min(cq, cj - cc))});
    }
    // Pareto-maximal points only (the pieces are downward closed)
    std::vector<std::array<double, 2>> keep;
    for (const auto& a : pts) {
        bool dominated = false;
        for (const auto& b : pts)
            if (b[0] >= a[0] + 1e-12 && b[1] >= a[1] + 1e-12) {
                dominated = true;
                break;
            }
        if (!dominated) {
            bool dup = false;
            for (const auto& b : keep)
                if (std::abs(a[0] - b[0]) < 1e-9 && std::abs(a[1] - b[1]) < 1e-9) dup = true;
            if (!dup) keep.push_back(a);
        }
    }
    std::sort(keep.begin(), keep.end());
    region.vertices = keep;
}

}  // namespace

SimultaneousRegion simultaneous_region(const ChannelRep& channel, double delta,
                                       const std::vector<InputEnsemble>& family,
                                       int n_delta_prime, int n_iota) {
    if (delta <= 0 || delta > 2) throw std::invalid_argument("delta must lie in (0,2]");
    SimultaneousRegion out;
    const double dp_hi = std::pow(delta, 4) / 16.0;
    const auto dp_grid = log_grid(dp_hi * 1e-4, dp_hi, n_delta_prime);
    const auto iota_grid = log_grid(1e-6, 1.0, n_iota);

    for (const auto& ens : family) {
        if (!ens.max_mixed()) continue;
        auto nrho = ens.output(channel);
        // inner pieces: union over delta'
        for (double dp : dp_grid) {
            const double eps = table_epsilon(delta, dp);
            if (eps < 0) {
                ++out.skipped_smoothing;
                continue;
            }
            RegionPiece piece;
            piece.slack_param = dp;
            piece.cap_joint = kInf;
            piece.cap_c = kInf;
            piece.cap_q = kInf;
            if (ens.d_sc() >= 2) {
                const double h = hmax_eps(nrho, {"Sc", "Sr"}, eps);
                piece.cap_joint = -h + log2d(ens.d_sc() - 1) + std::log2(dp);
            } else {
                piece.cap_c = 0.0;
            }
            if (ens.d_sr() >= 2) {
                const double h = hmax_eps(nrho, {"Sr"}, eps);
                piece.cap_q = -h + std::log2(dp * (1.0 - 2.0 * eps));
            } else {
                piece.cap_q = 0.0;
            }
            if (std::min({piece.cap_c, piece.cap_q, piece.cap_joint}) < 0) continue;  // empty
            out.inner.pieces.push_back(piece);
        }
        // outer piece: intersection over iota
        RegionPiece op;
        op.cap_c = kInf;
        op.cap_joint = kInf;
        op.cap_q = kInf;
        op.slack_param = iota_grid.front();
        for (double io : iota_grid) {
            const double lam = oneshot_lambda(delta, io);
            if (lam < 1.0) {
                const double h = hmax_eps(nrho, {"Sc", "Sr"}, lam);
                op.cap_joint = std::min(op.cap_joint, -h + log2d(ens.d_sc()) - std::log2(io));
            }
            const double lamp = oneshot_lambda_prime(delta, io);
            if (lamp < 1.0) {
                const double h = hmax_eps(nrho, {"Sr"}, lamp);
                op.cap_q = std::min(op.cap_q, -h - std::log2(io));
            }
        }
        out.outer.pieces.push_back(op);
    }
    collect_vertices(out.inner);
    collect_vertices(out.outer);
    return out;
}

}  // namespace qcap
