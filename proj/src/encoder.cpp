#include "qcap/encoder.hpp"

#include <cmath>
#include <stdexcept>

#include "qcap/linalg.hpp"

namespace qcap {

namespace {

/// (V (x) I_rest) |psi> for an isometry V acting on the leading factor group.
VectorXcd apply_front(const MatrixXcd& v, const VectorXcd& psi, int d_in_front, int d_rest) {
    const int d_out = static_cast<int>(v.rows());
    VectorXcd out = VectorXcd::Zero(d_out * d_rest);
    for (int i = 0; i < d_out; ++i)
        for (int j = 0; j < d_in_front; ++j) {
            if (v(i, j) == Complex(0, 0)) continue;
            out.segment(i * d_rest, d_rest) += v(i, j) * psi.segment(j * d_rest, d_rest);
        }
    return out;
}

struct EnsembleParts {
    int d_sc, d_sr, d_a;
    std::vector<MatrixXcd> blocks;  // normalized rho_j on Sr (x) A
};

EnsembleParts split_ensemble(const DensityOperator& rho) {
    const auto& lay = rho.layout();
    if (lay.num_factors() != 3 || lay.factors()[0].label != "Sc" ||
        lay.factors()[1].label != "Sr" || lay.factors()[2].label != "A")
        throw std::invalid_argument("ensemble layout must be {Sc, Sr, A}");
    EnsembleParts p;
    p.d_sc = lay.factor_dim(0);
    p.d_sr = lay.factor_dim(1);
    p.d_a = lay.factor_dim(2);
    if (trace_distance(dephase(rho, "Sc"), rho) > 1e-10)
        throw std::invalid_argument("ensemble must be block diagonal in Sc");
    auto s_marg = partial_trace(rho, {"Sc", "Sr"});
    const int ds = p.d_sc * p.d_sr;
    if ((s_marg.matrix() - MatrixXcd::Identity(ds, ds) / double(ds)).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("ensemble marginal on S must be maximally mixed");
    const int dsa = p.d_sr * p.d_a;
    for (int j = 0; j < p.d_sc; ++j) {
        MatrixXcd b = rho.matrix().block(j * dsa, j * dsa, dsa, dsa) * double(p.d_sc);
        p.blocks.push_back(std::move(b));
    }
    return p;
}

/// Stinespring isometries of the maps induced by the blocks, padded to a
/// common environment dimension.
std::vector<MatrixXcd> block_dilations(const EnsembleParts& p, int& d_e0) {
    std::vector<std::vector<MatrixXcd>> kraus(p.d_sc);
    size_t kmax = 0;
    for (int j = 0; j < p.d_sc; ++j) {
        SystemLayout in = SystemLayout::single("Sr", p.d_sr);
        SystemLayout out = SystemLayout::single("A", p.d_a);
        auto choi = DensityOperator::unchecked(p.blocks[j], in.tensor_with(out),
                                               Normalization::Normalized);
        kraus[j] = ChannelRep::from_choi(choi, in, out).kraus();
        kmax = std::max(kmax, kraus[j].size());
    }
    d_e0 = static_cast<int>(kmax);
    std::vector<MatrixXcd> gammas;
    for (int j = 0; j < p.d_sc; ++j) {
        MatrixXcd g = MatrixXcd::Zero(p.d_a * d_e0, p.d_sr);
        for (size_t e = 0; e < kraus[j].size(); ++e)
            for (int a = 0; a < p.d_a; ++a) g.row(a * d_e0 + static_cast<int>(e)) = kraus[j][e].row(a);
        gammas.push_back(std::move(g));
    }
    return gammas;
}

}  // namespace

DensityOperator block_ensemble(const std::vector<MatrixXcd>& blocks, int d_sr, int d_a) {
    const int j = static_cast<int>(blocks.size());
    const int dsa = d_sr * d_a;
    MatrixXcd m = MatrixXcd::Zero(j * dsa, j * dsa);
    for (int k = 0; k < j; ++k) m.block(k * dsa, k * dsa, dsa, dsa) = blocks[k] / double(j);
    return DensityOperator(m, SystemLayout({{"Sc", j}, {"Sr", d_sr}, {"A", d_a}}));
}

PureState build_psi_rho(const DensityOperator& rho, const ChannelRep& channel) {
    EnsembleParts p = split_ensemble(rho);
    if (channel.in_dim() != p.d_a)
        throw std::invalid_argument("channel input does not match the ensemble A factor");

    int d_e0 = 0;
    auto gammas = block_dilations(p, d_e0);
    const int ds = p.d_sc * p.d_sr;

    // Extended source: maximally entangled between S and Rh.
    VectorXcd ext = VectorXcd::Zero(ds * ds);
    for (int i = 0; i < ds; ++i) ext(i * ds + i) = 1.0 / std::sqrt(double(ds));

    // Block Stinespring of the ensemble-induced map, S -> A (x) E0 (x) Ec.
    MatrixXcd v_rho = MatrixXcd::Zero(p.d_a * d_e0 * p.d_sc, ds);
    for (int j = 0; j < p.d_sc; ++j)
        for (int a = 0; a < p.d_a; ++a)
            for (int e0 = 0; e0 < d_e0; ++e0)
                for (int sr = 0; sr < p.d_sr; ++sr)
                    v_rho((a * d_e0 + e0) * p.d_sc + j, j * p.d_sr + sr) =
                        gammas[j](a * d_e0 + e0, sr);

    VectorXcd after_v = apply_front(v_rho, ext, ds, ds);
    // Channel dilation on A.
    auto w = channel.stinespring();
    const int d_be = channel.out_dim() * w.env_dim();
    MatrixXcd w_mat = MatrixXcd::Zero(d_be, p.d_a);
    {
        int e = 0;
        for (const auto& k : w.kraus()) {
            for (int b = 0; b < channel.out_dim(); ++b)
                for (int a = 0; a < p.d_a; ++a) w_mat(b * w.env_dim() + e, a) = k(b, a);
            ++e;
        }
    }
    VectorXcd full = apply_front(w_mat, after_v, p.d_a, d_e0 * p.d_sc * ds);

    SystemLayout lay({{"B", channel.out_dim()},
                      {"E", w.env_dim()},
                      {"E0", d_e0},
                      {"Ec", p.d_sc},
                      {"Rhc", p.d_sc},
                      {"Rhr", p.d_sr}});
    PureState psi(std::move(full), lay);
    return permute_factors(psi, {"Rhc", "Rhr", "B", "Ec", "E", "E0"});
}

EncoderIdentityResult verify_encoder_identity(const DensityOperator& rho,
                                              const ChannelRep& channel, const CodeBits& code,
                                              const std::vector<int>& s,
                                              const std::vector<MatrixXcd>& u_blocks) {
    EnsembleParts p = split_ensemble(rho);
    const int mc = 1 << code.c, mq = 1 << code.q, me = 1 << code.e;
    if (p.d_sc < mc) throw std::invalid_argument("classical register does not fit: d_Sc < 2^c");
    if (p.d_sr < mq * me) throw std::invalid_argument("quantum register does not fit: d_Sr < 2^(q+e)");
    if (static_cast<int>(s.size()) != p.d_sc || static_cast<int>(u_blocks.size()) != p.d_sc)
        throw std::invalid_argument("need one permutation image and one block unitary per sector");
    const int ds = p.d_sc * p.d_sr;
    const int dmsg = mc * mq * me;

    // Embeddings |j> -> |j> and |m,f> -> |m 2^e + f>.
    MatrixXcd embed = MatrixXcd::Zero(ds, dmsg);
    for (int j = 0; j < mc; ++j)
        for (int m = 0; m < mq; ++m)
            for (int f = 0; f < me; ++f)
                embed(j * p.d_sr + m * me + f, (j * mq + m) * me + f) = 1.0;

    // Block unitary and permutation on the S index.
    MatrixXcd u = MatrixXcd::Zero(ds, ds), g = MatrixXcd::Zero(ds, ds);
    for (int j = 0; j < p.d_sc; ++j) {
        if (u_blocks[j].rows() != p.d_sr) throw std::invalid_argument("block unitary has wrong size");
        u.block(j * p.d_sr, j * p.d_sr, p.d_sr, p.d_sr) = u_blocks[j];
        g.block(s[j] * p.d_sr, j * p.d_sr, p.d_sr, p.d_sr) =
            MatrixXcd::Identity(p.d_sr, p.d_sr);
    }

    // Left route: the randomizing map on the reference side of psi_rho.
    PureState psi = build_psi_rho(rho, channel);
    auto psi_rb = partial_trace(psi.density(), {"Rhc", "Rhr", "B"});
    const double scale = std::sqrt(double(ds) / double(dmsg));
    MatrixXcd k_left = scale * embed.adjoint() * g * u;
    SystemLayout msg_out({{"Rc", mc}, {"Rq", mq}, {"FB", me}});
    auto route_left = ChannelRep::from_kraus({k_left}, SystemLayout({{"Rhc", p.d_sc}, {"Rhr", p.d_sr}}),
                                             msg_out, TraceFlag::GeneralCP)
                          .apply(psi_rb);  // on (Rc, Rq, FB, B)

    // Right route: composed encoder on the purified source.
    VectorXcd pur = VectorXcd::Zero(dmsg * dmsg);
    for (int j = 0; j < mc; ++j)
        for (int m = 0; m < mq; ++m)
            for (int f = 0; f < me; ++f) {
                const int idx = (j * mq + m) * me + f;
                pur(idx * dmsg + idx) = 1.0 / std::sqrt(double(dmsg));
            }
    SystemLayout pur_lay({{"Mc", mc}, {"Mq", mq}, {"FA", me}, {"Rc", mc}, {"Rq", mq}, {"FB", me}});
    auto phi_pur = PureState(pur, pur_lay).density();

    auto e_rho = ChannelRep::from_choi(
        DensityOperator::unchecked(rho.matrix(), SystemLayout({{"S", ds}, {"A", p.d_a}}),
                                   Normalization::Normalized),
        SystemLayout::single("S", ds), SystemLayout::single("A", p.d_a));
    const MatrixXcd p_su = u.transpose() * g.transpose() * embed;
    std::vector<MatrixXcd> enc_kraus;
    for (const auto& k : e_rho.kraus()) enc_kraus.push_back(k * p_su);
    SystemLayout msg_in({{"Mc", mc}, {"Mq", mq}, {"FA", me}});
    auto encoder = ChannelRep::from_kraus(enc_kraus, msg_in, channel.in_layout());
    auto route_right = channel.apply(encoder.apply(phi_pur));  // on (B, Rc, Rq, FB)
    route_right = permute_factors(route_right, {"Rc", "Rq", "FB", "B"});

    EncoderIdentityResult out;
    out.protocol_residual = trace_distance(route_left, route_right);

    // Dephasing commutation: the encoder must ignore coherences in Mc.
    std::vector<MatrixXcd> enc_deph;
    for (const auto& k : enc_kraus)
        for (int j = 0; j < mc; ++j) {
            MatrixXcd d = MatrixXcd::Zero(dmsg, dmsg);
            d.block(j * mq * me, j * mq * me, mq * me, mq * me) =
                MatrixXcd::Identity(mq * me, mq * me);
            enc_deph.push_back(k * d);
        }
    auto encoder_deph = ChannelRep::from_kraus(enc_deph, msg_in, channel.in_layout());
    out.dephasing_residual =
        (encoder.to_choi().matrix() - encoder_deph.to_choi().matrix()).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace qcap
