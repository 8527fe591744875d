#include "doctest.h"

#include <cmath>

#include "qcap/encoder.hpp"
#include "qcap/linalg.hpp"
#include "qcap/random.hpp"

using namespace qcap;

namespace {

MatrixXcd entangled_block(int d_sr, int d_a, const MatrixXcd& u_on_a) {
    // (I (x) U)|Phi><Phi|(I (x) U)^dag with Phi maximally entangled; requires d_a >= d_sr
    VectorXcd v = VectorXcd::Zero(d_sr * d_a);
    for (int i = 0; i < d_sr; ++i) v(i * d_a + i) = 1.0 / std::sqrt(double(d_sr));
    MatrixXcd big = MatrixXcd::Zero(d_sr * d_a, d_sr * d_a);
    for (int i = 0; i < d_sr; ++i) big.block(i * d_a, i * d_a, d_a, d_a) = u_on_a;
    VectorXcd w = big * v;
    return w * w.adjoint();
}

std::vector<MatrixXcd> random_blocks(int d_sc, int d_sr, int d_a, RngStream& rng) {
    std::vector<MatrixXcd> blocks;
    for (int j = 0; j < d_sc; ++j) blocks.push_back(entangled_block(d_sr, d_a, haar_unitary(d_a, rng)));
    return blocks;
}

}  // namespace

TEST_CASE("protocol state construction") {
    SUBCASE("output is a unit vector and the visible marginal matches the channel output") {
        RngStream rng(1);
        auto rho = block_ensemble(random_blocks(2, 2, 2, rng), 2, 2);
        auto channel = standard_channel("amplitude_damping", 0.25);
        auto psi = build_psi_rho(rho, channel);
        CHECK(std::abs(psi.vector().norm() - 1.0) < 1e-9);

        auto marg = partial_trace(psi.density(), {"Rhc", "Rhr", "B"});
        auto out = channel.apply(rho);  // on (Sc, Sr, B)
        CHECK((marg.matrix() - out.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("trivial channel output leaves a dephased reference structure") {
        RngStream rng(2);
        // classical blocks, channel mapping everything to a fixed state
        std::vector<MatrixXcd> blocks;
        for (int j = 0; j < 2; ++j) {
            MatrixXcd b = MatrixXcd::Zero(2, 2);
            b(j, j) = 1.0;
            blocks.push_back(b);
        }
        auto rho = block_ensemble(blocks, 1, 2);
        // depolarizing to maximally mixed output
        auto psi = build_psi_rho(rho, standard_channel("depolarizing", 1.0));
        auto rh = partial_trace(psi.density(), {"Rhc", "Rhr"});
        CHECK(trace_distance(dephase(rh, "Rhc"), rh) < 1e-9);
    }
    SUBCASE("non maximally mixed ensembles are rejected") {
        // a pure product block leaves the Sr marginal pure, not mixed
        MatrixXcd b = MatrixXcd::Zero(4, 4);
        b(0, 0) = 1.0;  // |0>_{Sr} |0>_A
        auto rho = block_ensemble({b}, 2, 2);
        CHECK_THROWS(build_psi_rho(rho, identity_channel("A", "B", 2)));
    }
}

TEST_CASE("encoder identity") {
    RngStream rng(5);
    auto channel = standard_channel("amplitude_damping", 0.3);

    SUBCASE("identity permutation and blocks, classical code") {
        std::vector<MatrixXcd> blocks;
        for (int j = 0; j < 2; ++j) {
            MatrixXcd b = MatrixXcd::Zero(2, 2);
            b(j, j) = 1.0;
            blocks.push_back(b);
        }
        auto rho = block_ensemble(blocks, 1, 2);
        auto res = verify_encoder_identity(rho, channel, {1, 0, 0}, {0, 1},
                                           {MatrixXcd::Identity(1, 1), MatrixXcd::Identity(1, 1)});
        CHECK(res.protocol_residual < 1e-8);
        CHECK(res.dephasing_residual < 1e-10);
    }
    SUBCASE("random permutation and blocks, hybrid code") {
        auto rho = block_ensemble(random_blocks(2, 2, 2, rng), 2, 2);
        for (int rep = 0; rep < 4; ++rep) {
            auto s = random_permutation(2, rng);
            std::vector<MatrixXcd> u = {haar_unitary(2, rng), haar_unitary(2, rng)};
            auto res = verify_encoder_identity(rho, channel, {1, 1, 0}, s, u);
            CHECK(res.protocol_residual < 1e-8);
            CHECK(res.dephasing_residual < 1e-10);
        }
    }
    SUBCASE("pure quantum code without classical part") {
        auto rho = block_ensemble(random_blocks(1, 2, 2, rng), 2, 2);
        auto s = std::vector<int>{0};
        auto res = verify_encoder_identity(rho, channel, {0, 1, 0}, s, {haar_unitary(2, rng)});
        CHECK(res.protocol_residual < 1e-8);
        CHECK(res.dephasing_residual < 1e-10);
    }
    SUBCASE("entanglement-consuming code") {
        // q = 0, e = 1 uses the reference register pair as an ebit
        auto rho = block_ensemble(random_blocks(1, 2, 2, rng), 2, 2);
        auto res = verify_encoder_identity(rho, channel, {0, 0, 1}, {0}, {haar_unitary(2, rng)});
        CHECK(res.protocol_residual < 1e-8);
    }
    SUBCASE("dimension violations are rejected") {
        auto rho = block_ensemble(random_blocks(2, 1, 2, rng), 1, 2);
        CHECK_THROWS(verify_encoder_identity(rho, channel, {2, 0, 0}, {0, 1},
                                             {MatrixXcd::Identity(1, 1), MatrixXcd::Identity(1, 1)}));
        CHECK_THROWS(verify_encoder_identity(rho, channel, {1, 1, 0}, {0, 1},
                                             {MatrixXcd::Identity(1, 1), MatrixXcd::Identity(1, 1)}));
    }
}
