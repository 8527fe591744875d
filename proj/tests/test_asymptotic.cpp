#include "doctest.h"

#include <cmath>

#include "qcap/asymptotic.hpp"
#include "qcap/linalg.hpp"
#include "qcap/random.hpp"

using namespace qcap;

namespace {

InputEnsemble phi_ensemble(int d) {
    VectorXcd v = VectorXcd::Zero(d * d);
    for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
    SystemLayout lay({{"Sc", 1}, {"Sr", d}, {"A", d}});
    return InputEnsemble::make(DensityOperator(v * v.adjoint(), lay));
}

InputEnsemble classical_ensemble(int d) {
    MatrixXcd m = MatrixXcd::Zero(d * d, d * d);
    for (int j = 0; j < d; ++j) m(j * d + j, j * d + j) = 1.0 / d;
    SystemLayout lay({{"Sc", d}, {"Sr", 1}, {"A", d}});
    return InputEnsemble::make(DensityOperator(m, lay));
}

InputEnsemble random_ensemble(int d_sc, int d_sr, int d_a, RngStream& rng) {
    // random block-diagonal ensemble, not necessarily maximally mixed on S
    const int dsa = d_sr * d_a;
    MatrixXcd m = MatrixXcd::Zero(d_sc * dsa, d_sc * dsa);
    double tot = 0;
    std::vector<double> p(d_sc);
    for (int j = 0; j < d_sc; ++j) {
        p[j] = 0.2 + rng.uniform();
        tot += p[j];
    }
    for (int j = 0; j < d_sc; ++j)
        m.block(j * dsa, j * dsa, dsa, dsa) = (p[j] / tot) * random_density_matrix(dsa, rng);
    SystemLayout lay({{"Sc", d_sc}, {"Sr", d_sr}, {"A", d_a}});
    return InputEnsemble::make(DensityOperator(m, lay), false);
}

}  // namespace

TEST_CASE("theta region of the identity channel on the entangled ensemble") {
    auto id = identity_channel("A", "B", 2);
    auto reg = theta_region(id, phi_ensemble(2));
    // -H(Sr|B) = 1, so (0,1,0) lies in the region
    CHECK(region_satisfies(reg, {0, 1, 0}, 1e-9));
    bool found = false;
    for (const auto& v : reg.vertices)
        if ((v - Eigen::Vector3d(0, 1, 0)).norm() < 1e-9) found = true;
    CHECK(found);
    // all enumerated vertices satisfy all inequalities
    for (const auto& v : reg.vertices) CHECK(region_satisfies(reg, v, 1e-9));
}

TEST_CASE("theta region of the useless channel forces Q <= E") {
    auto dep = standard_channel("depolarizing", 1.0);
    auto reg = theta_region(dep, phi_ensemble(2));
    // H(Sr|B Sc) = 1 on the product output, so Q - E <= -1 and C+Q-E <= -1;
    // with Q+E <= 1 only the pure entanglement-consumption point remains
    CHECK(!region_satisfies(reg, {0, 1, 0}, 1e-9));
    CHECK(region_satisfies(reg, {0, 0, 1}, 1e-9));
    for (const auto& v : reg.vertices) CHECK(region_satisfies(reg, v, 1e-9));

    // the product output makes the quantum face equal the conditioned input
    // entropy, which is the Q <= E (and C+Q <= E) shape of a useless channel
    RngStream rng(3);
    MatrixXcd m = MatrixXcd::Zero(8, 8);
    m.block(0, 0, 4, 4) = 0.5 * random_density_matrix(4, rng);
    m.block(4, 4, 4, 4) = 0.5 * random_density_matrix(4, rng);
    auto ens = InputEnsemble::make(
        DensityOperator(m, SystemLayout({{"Sc", 2}, {"Sr", 2}, {"A", 2}})), false);
    auto reg2 = theta_region(dep, ens);
    auto out = ens.output(dep);
    for (const auto& h : reg2.inequalities)
        if (h.name == "Q-E")
            CHECK(h.offset ==
                  doctest::Approx(-von_neumann_cond(partial_trace(out, {"Sc", "Sr"}), {"Sr"}))
                      .epsilon(1e-9));
}

TEST_CASE("lambda region and containment of theta") {
    auto id = identity_channel("A", "B", 2);
    SUBCASE("mutual information face of the entangled ensemble") {
        auto reg = lambda_region(id, phi_ensemble(2));
        bool has_mi_face = false;
        for (const auto& h : reg.inequalities)
            if (h.name == "C+2Q") {
                has_mi_face = true;
                CHECK(h.offset == doctest::Approx(2.0).epsilon(1e-9));
            }
        CHECK(has_mi_face);
    }
    SUBCASE("theta vertices lie inside lambda on random ensembles") {
        RngStream rng(7);
        for (int rep = 0; rep < 20; ++rep) {
            auto ens = random_ensemble(2, 2, 2, rng);
            auto th = theta_region(id, ens);
            auto la = lambda_region(id, ens);
            for (const auto& v : th.vertices) CHECK(region_satisfies(la, v, 1e-8));
        }
    }
    SUBCASE("chain-rule face identity") {
        RngStream rng(8);
        for (int rep = 0; rep < 10; ++rep) {
            auto ens = random_ensemble(2, 2, 2, rng);
            auto out = ens.output(identity_channel("A", "B", 2));
            const double lhs = von_neumann_marginal(out, {"Sc"}) -
                               von_neumann_cond(out, {"Sc", "Sr"});
            const double i_sc_b = mutual_info(partial_trace(out, {"Sc", "B"}), {"Sc"});
            const double rhs = i_sc_b - von_neumann_cond(out, {"Sr"});
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("closed-form lambda vertices") {
    auto id = identity_channel("A", "B", 2);
    SUBCASE("identity channel entangled ensemble") {
        auto vs = lambda_vertices(id, phi_ensemble(2));
        CHECK(vs.neg_h_sr_bsc == doctest::Approx(1.0).epsilon(1e-9));
        bool p1 = false, p2 = false;
        for (const auto& v : vs.vertices) {
            if (v.name == "P1+") {
                CHECK((v.point - Eigen::Vector3d(0, 1, 0)).norm() < 1e-9);
                p1 = true;
            }
            if (v.name == "P2") {
                CHECK((v.point - Eigen::Vector3d(0, 1, 0)).norm() < 1e-9);
                p2 = true;
            }
        }
        CHECK(p1);
        CHECK(p2);
    }
    SUBCASE("every returned vertex lies on the boundary of the region") {
        RngStream rng(11);
        auto channels = std::vector<ChannelRep>{identity_channel("A", "B", 2),
                                                standard_channel("amplitude_damping", 0.3),
                                                standard_channel("dephasing", 0.6)};
        for (int rep = 0; rep < 12; ++rep) {
            auto ens = random_ensemble(2, 2, 2, rng);
            const auto& ch = channels[rep % channels.size()];
            auto reg = lambda_region(ch, ens);
            auto vs = lambda_vertices(ch, ens);
            for (const auto& lv : vs.vertices) {
                CHECK(region_satisfies(reg, lv.point, 1e-8));
                double min_slack = 1e9;
                for (const auto& h : reg.inequalities)
                    min_slack = std::min(min_slack, h.offset - h.normal.dot(lv.point));
                CHECK(min_slack < 1e-8);  // at least one face is tight
            }
        }
    }
}

TEST_CASE("region union") {
    auto id = identity_channel("A", "B", 2);
    std::vector<InputEnsemble> family = {phi_ensemble(2), classical_ensemble(2)};
    SUBCASE("identity channel reaches the unit classical and quantum points") {
        auto u = region_union(id, family, 1);
        CHECK(hull_contains(u.vertices, {1, 0, 0}, 1e-6));
        CHECK(hull_contains(u.vertices, {0, 1, 0}, 1e-6));
        CHECK(!hull_contains(u.vertices, {2.5, 0, 0}, 1e-6));
    }
    SUBCASE("hull membership is convex") {
        auto u = region_union(id, family, 1);
        RngStream rng(13);
        for (int rep = 0; rep < 10; ++rep) {
            const auto& a = u.vertices[rng.uniform_int(int(u.vertices.size()))];
            const auto& b = u.vertices[rng.uniform_int(int(u.vertices.size()))];
            CHECK(hull_contains(u.vertices, 0.5 * (a + b), 1e-6));
        }
    }
    SUBCASE("two copies contain the single-copy region") {
        auto u1 = region_union(id, family, 1);
        auto u2 = region_union(id, family, 2);
        for (const auto& v : u1.vertices) CHECK(hull_contains(u2.vertices, v, 1e-6));
    }
    SUBCASE("block lengths above two are rejected") {
        CHECK_THROWS(region_union(id, family, 3));
    }
}
