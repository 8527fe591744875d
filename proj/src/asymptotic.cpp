#include "qcap/asymptotic.hpp"

#include <cmath>
#include <stdexcept>

#include "qcap/linalg.hpp"
#include "qcap/sdp.hpp"

namespace qcap {

namespace {

struct RegionEntropies {
    double h_sr_sc_in;    // H(Sr|Sc) of the input ensemble
    double h_sc;          // H(Sc)
    double h_s_b;         // H(S|B) of the channel output
    double h_sr_bsc;      // H(Sr|B Sc) of the channel output
    double i_s_b;         // I(S:B)
    double i_sc_b;        // I(Sc:B)
    double h_sr_sc_out;   // H(Sr|Sc) of the channel output
};

RegionEntropies region_entropies(const ChannelRep& channel, const InputEnsemble& ens) {
    RegionEntropies e{};
    e.h_sr_sc_in = von_neumann_cond(partial_trace(ens.rho(), {"Sc", "Sr"}), {"Sr"});
    auto out = ens.output(channel);
    e.h_sc = von_neumann_marginal(out, {"Sc"});
    e.h_s_b = von_neumann_cond(out, {"Sc", "Sr"});
    e.h_sr_bsc = von_neumann_cond(out, {"Sr"});
    e.i_s_b = mutual_info(out, {"Sc", "Sr"});
    e.i_sc_b = mutual_info(partial_trace(out, {"Sc", "B"}), {"Sc"});
    e.h_sr_sc_out = von_neumann_cond(partial_trace(out, {"Sc", "Sr"}), {"Sr"});
    return e;
}

std::vector<Halfspace> nonnegativity() {
    return {{{-1, 0, 0}, 0.0, "C >= 0"},
            {{0, -1, 0}, 0.0, "Q >= 0"},
            {{0, 0, -1}, 0.0, "E >= 0"}};
}

}  // namespace

std::vector<Eigen::Vector3d> enumerate_region_vertices(const std::vector<Halfspace>& ineq,
                                                       double tol) {
    std::vector<Eigen::Vector3d> verts;
    const int m = static_cast<int>(ineq.size());
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            for (int c = b + 1; c < m; ++c) {
                Eigen::Matrix3d mat;
                mat.row(0) = ineq[a].normal;
                mat.row(1) = ineq[b].normal;
                mat.row(2) = ineq[c].normal;
                if (std::abs(mat.determinant()) < 1e-12) continue;
                Eigen::Vector3d rhs(ineq[a].offset, ineq[b].offset, ineq[c].offset);
                Eigen::Vector3d x = mat.fullPivLu().solve(rhs);
                bool feasible = true;
                for (const auto& h : ineq)
                    if (h.normal.dot(x) > h.offset + tol) {
                        feasible = false;
                        break;
                    }
                if (!feasible) continue;
                bool dup = false;
                for (const auto& v : verts)
                    if ((v - x).norm() < 1e-8) dup = true;
                if (!dup) verts.push_back(x);
            }
    return verts;
}

bool region_satisfies(const RateRegion& region, const Eigen::Vector3d& p, double tol) {
    for (const auto& h : region.inequalities)
        if (h.normal.dot(p) > h.offset + tol) return false;
    return true;
}

RateRegion theta_region(const ChannelRep& channel, const InputEnsemble& ens) {
    RegionEntropies e = region_entropies(channel, ens);
    RateRegion r;
    r.label = "theta";
    r.inequalities = {{{0, 1, 1}, e.h_sr_sc_in, "Q+E"},
                      {{1, 1, -1}, e.h_sc - e.h_s_b, "C+Q-E"},
                      {{0, 1, -1}, -e.h_sr_bsc, "Q-E"}};
    for (auto& h : nonnegativity()) r.inequalities.push_back(h);
    r.vertices = enumerate_region_vertices(r.inequalities);
    return r;
}

RateRegion lambda_region(const ChannelRep& channel, const InputEnsemble& ens) {
    RegionEntropies e = region_entropies(channel, ens);
    RateRegion r;
    r.label = "lambda";
    r.inequalities = {{{1, 2, 0}, e.i_s_b, "C+2Q"},
                      {{1, 1, -1}, e.h_sc - e.h_s_b, "C+Q-E"},
                      {{0, 1, -1}, -e.h_sr_bsc, "Q-E"}};
    for (auto& h : nonnegativity()) r.inequalities.push_back(h);
    r.vertices = enumerate_region_vertices(r.inequalities);
    return r;
}

LambdaVertexSet lambda_vertices(const ChannelRep& channel, const InputEnsemble& ens) {
    RegionEntropies e = region_entropies(channel, ens);
    LambdaVertexSet out;
    out.neg_h_sr_bsc = -e.h_sr_bsc;
    out.degenerate = std::abs(out.neg_h_sr_bsc) < 1e-9;
    const double i_sr_b_sc = e.i_s_b - e.i_sc_b;  // I(Sr:B|Sc) by the chain rule

    auto add = [&](const std::string& name, double c, double q, double eb) {
        out.vertices.push_back({name, {c, q, eb}});
    };
    const bool plus = out.neg_h_sr_bsc > 0;
    if (plus || out.degenerate) {
        add("P0", 0, 0, 0);
        add("P1+", 0, -e.h_sr_bsc, 0);
        add("P2", 0, 0.5 * e.i_s_b, 0.5 * e.i_s_b + e.h_sr_bsc);
        add("P3+", e.i_sc_b, -e.h_sr_bsc, 0);
        add("P4", e.i_sc_b, 0.5 * i_sr_b_sc, 0.5 * i_sr_b_sc + e.h_sr_bsc);
        add("P5", e.h_sc - e.h_s_b, 0, 0);
        add("P6", e.i_s_b, 0, e.h_sr_sc_out);
    }
    if (!plus || out.degenerate) {
        add("P1-", 0, 0, e.h_sr_bsc);
        if (out.degenerate) {
            add("P3-", e.i_sc_b, 0, e.h_sr_bsc);
        } else {
            add("P2", 0, 0.5 * e.i_s_b, 0.5 * e.i_s_b + e.h_sr_bsc);
            add("P3-", e.i_sc_b, 0, e.h_sr_bsc);
            add("P4", e.i_sc_b, 0.5 * i_sr_b_sc, 0.5 * i_sr_b_sc + e.h_sr_bsc);
            add("P6", e.i_s_b, 0, e.h_sr_sc_out);
        }
    }
    return out;
}

RateRegion region_union(const ChannelRep& channel, const std::vector<InputEnsemble>& family,
                        int n_max) {
    if (n_max < 1 || n_max > 2)
        throw std::invalid_argument("union supported for block lengths 1 and 2 only");
    RateRegion r;
    r.label = "theta-union";
    r.vertices.push_back(Eigen::Vector3d::Zero());
    for (const auto& ens : family) {
        auto tr = theta_region(channel, ens);
        for (const auto& v : tr.vertices) r.vertices.push_back(v);
    }
    if (n_max == 2) {
        auto ch2 = channel.tensor_power(2);
        auto ch2_flat = ch2.with_layouts(SystemLayout::single("A", ch2.in_dim()),
                                         SystemLayout::single("B", ch2.out_dim()));
        for (size_t i = 0; i < family.size(); ++i)
            for (size_t j = i; j < family.size(); ++j) {
                const auto& r1 = family[i].rho();
                const auto& r2 = family[j].rho();
                auto r2_re = r2.with_layout(SystemLayout(
                    {{"Sc2", r2.layout().factor_dim(0)},
                     {"Sr2", r2.layout().factor_dim(1)},
                     {"A2", r2.layout().factor_dim(2)}}));
                auto prod = tensor(r1, r2_re);
                auto perm = permute_factors(prod, {"Sc", "Sc2", "Sr", "Sr2", "A", "A2"});
                SystemLayout merged({{"Sc", family[i].d_sc() * family[j].d_sc()},
                                     {"Sr", family[i].d_sr() * family[j].d_sr()},
                                     {"A", r1.layout().factor_dim(2) * r2.layout().factor_dim(2)}});
                auto ens2 = InputEnsemble::make(perm.with_layout(merged),
                                                family[i].max_mixed() && family[j].max_mixed());
                auto tr = theta_region(ch2_flat, ens2);
                for (const auto& v : tr.vertices) r.vertices.push_back(0.5 * v);
            }
    }
    // deduplicate
    std::vector<Eigen::Vector3d> dedup;
    for (const auto& v : r.vertices) {
        bool dup = false;
        for (const auto& w : dedup)
            if ((v - w).norm() < 1e-9) dup = true;
        if (!dup) dedup.push_back(v);
    }
    r.vertices = std::move(dedup);
    return r;
}

bool hull_contains(const std::vector<Eigen::Vector3d>& points, const Eigen::Vector3d& p,
                   double tol) {
    if (points.empty()) return false;
    const int n = static_cast<int>(points.size());
    // feasibility LP: lambda >= 0, sum lambda = 1, sum lambda v - p = u+ - u-,
    // minimize the slack mass sum(u+ + u-).
    sdp::Problem prob;
    prob.blocks = {{sdp::BlockSpec::Type::Diag, n + 6}};
    prob.constraints.resize(4);
    prob.b = Eigen::VectorXd::Zero(4);
    for (int i = 0; i < n; ++i) prob.constraints[0].push_back({0, i, i, 1.0});
    prob.b(0) = 1.0;
    for (int x = 0; x < 3; ++x) {
        for (int i = 0; i < n; ++i)
            if (points[i](x) != 0.0) prob.constraints[x + 1].push_back({0, i, i, points[i](x)});
        prob.constraints[x + 1].push_back({0, n + 2 * x, n + 2 * x, -1.0});
        prob.constraints[x + 1].push_back({0, n + 2 * x + 1, n + 2 * x + 1, 1.0});
        prob.b(x + 1) = p(x);
    }
    for (int x = 0; x < 6; ++x) prob.objective.push_back({0, n + x, n + x, 1.0});
    sdp::Options opt;
    opt.rel_gap_tol = 1e-9;
    opt.feas_tol = 1e-9;
    auto sol = sdp::solve(prob, opt);
    return sol.primal_objective <= tol * (1.0 + p.norm());
}

}  // namespace qcap
