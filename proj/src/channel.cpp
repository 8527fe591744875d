#include "qcap/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qcap {

namespace {

SystemLayout suffixed(const SystemLayout& lay, int copy) {
    std::vector<Factor> fs;
    for (const auto& f : lay.factors()) fs.push_back({f.label + "#" + std::to_string(copy), f.dim});
    return SystemLayout(fs);
}

MatrixXcd kron_m(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

ChannelRep ChannelRep::from_kraus(std::vector<MatrixXcd> kraus, SystemLayout in, SystemLayout out,
                                  TraceFlag flag) {
    ChannelRep ch;
    ch.kind_ = ChannelKind::Kraus;
    ch.flag_ = flag;
    ch.in_ = std::move(in);
    ch.out_ = std::move(out);
    ch.kraus_ = std::move(kraus);
    ch.env_dim_ = static_cast<int>(ch.kraus_.size());
    ch.validate();
    return ch;
}

ChannelRep ChannelRep::from_choi(DensityOperator choi, SystemLayout in, SystemLayout out,
                                 TraceFlag flag) {
    ChannelRep ch;
    ch.kind_ = ChannelKind::Choi;
    ch.flag_ = flag;
    ch.in_ = std::move(in);
    ch.out_ = std::move(out);
    if (choi.dim() != ch.in_.dim() * ch.out_.dim())
        throw std::invalid_argument("Choi state dimension does not match in (x) out");
    ch.choi_ = choi.matrix();
    ch.validate();
    return ch;
}

ChannelRep ChannelRep::from_stinespring(MatrixXcd isometry, SystemLayout in, SystemLayout out,
                                        int env_dim, TraceFlag flag) {
    ChannelRep ch;
    ch.kind_ = ChannelKind::Stinespring;
    ch.flag_ = flag;
    ch.in_ = std::move(in);
    ch.out_ = std::move(out);
    ch.env_dim_ = env_dim;
    if (isometry.rows() != ch.out_.dim() * env_dim || isometry.cols() != ch.in_.dim())
        throw std::invalid_argument("Stinespring operator has wrong shape");
    ch.stine_ = std::move(isometry);
    ch.validate();
    return ch;
}

void ChannelRep::validate() const {
    const double tol = 1e-8;
    switch (kind_) {
        case ChannelKind::Kraus: {
            if (kraus_.empty()) throw std::invalid_argument("empty Kraus list");
            MatrixXcd sum = MatrixXcd::Zero(in_.dim(), in_.dim());
            for (const auto& k : kraus_) {
                if (k.rows() != out_.dim() || k.cols() != in_.dim())
                    throw std::invalid_argument("Kraus operator has wrong shape");
                sum += k.adjoint() * k;
            }
            const MatrixXcd gap = MatrixXcd::Identity(in_.dim(), in_.dim()) - sum;
            if (flag_ == TraceFlag::TracePreserving && gap.cwiseAbs().maxCoeff() > tol)
                throw std::invalid_argument("Kraus set of a trace-preserving map must resolve identity");
            if (flag_ == TraceFlag::TraceNonIncreasing) {
                Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gap, Eigen::EigenvaluesOnly);
                if (es.eigenvalues().minCoeff() < -tol)
                    throw std::invalid_argument("Kraus set exceeds trace preservation");
            }
            break;
        }
        case ChannelKind::Choi: {
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(choi_, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -1e-8)
                throw std::invalid_argument("Choi state is not positive semidefinite");
            if (flag_ == TraceFlag::TracePreserving) {
                // Under the normalized convention the input marginal of the
                // Choi state of a TP map is maximally mixed.
                SystemLayout lay = SystemLayout({{"in", in_.dim()}, {"out", out_.dim()}});
                auto J = DensityOperator::unchecked(choi_, lay, Normalization::Subnormalized);
                auto marg = partial_trace(J, {"in"});
                const MatrixXcd expect = MatrixXcd::Identity(in_.dim(), in_.dim()) / double(in_.dim());
                if ((marg.matrix() - expect).cwiseAbs().maxCoeff() > tol)
                    throw std::invalid_argument("Choi state of a TP map must have maximally mixed input marginal");
            }
            break;
        }
        case ChannelKind::Stinespring: {
            if (flag_ == TraceFlag::TracePreserving) {
                const MatrixXcd g = stine_.adjoint() * stine_ - MatrixXcd::Identity(in_.dim(), in_.dim());
                if (g.cwiseAbs().maxCoeff() > tol)
                    throw std::invalid_argument("Stinespring operator of a TP map must be an isometry");
            }
            break;
        }
    }
}

int ChannelRep::env_dim() const {
    if (kind_ == ChannelKind::Stinespring || kind_ == ChannelKind::Kraus) return env_dim_;
    return static_cast<int>(kraus().size());
}

const std::vector<MatrixXcd>& ChannelRep::kraus() const {
    if (!kraus_.empty()) return kraus_;
    if (kind_ == ChannelKind::Stinespring) {
        for (int e = 0; e < env_dim_; ++e) {
            MatrixXcd k(out_.dim(), in_.dim());
            for (int b = 0; b < out_.dim(); ++b) k.row(b) = stine_.row(b * env_dim_ + e);
            kraus_.push_back(std::move(k));
        }
        return kraus_;
    }
    // Choi -> Kraus by eigendecomposition with rank truncation.
    const int da = in_.dim(), db = out_.dim();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(choi_);
    for (int i = da * db - 1; i >= 0; --i) {
        const double lam = es.eigenvalues()(i);
        if (lam <= 1e-10) continue;
        MatrixXcd k(db, da);
        for (int a = 0; a < da; ++a)
            for (int b = 0; b < db; ++b) k(b, a) = std::sqrt(da * lam) * es.eigenvectors()(a * db + b, i);
        kraus_.push_back(std::move(k));
    }
    if (kraus_.empty()) kraus_.push_back(MatrixXcd::Zero(db, da));
    return kraus_;
}

DensityOperator ChannelRep::to_choi() const {
    const int da = in_.dim(), db = out_.dim();
    if (kind_ == ChannelKind::Choi) {
        SystemLayout lay = in_.tensor_with(out_);
        return DensityOperator::unchecked(choi_, lay,
                                          flag_ == TraceFlag::TracePreserving
                                              ? Normalization::Normalized
                                              : Normalization::Subnormalized);
    }
    MatrixXcd J = MatrixXcd::Zero(da * db, da * db);
    for (const auto& k : kraus()) {
        // Image of the normalized maximally entangled state: the component on
        // |a>(x)K|a> weighted 1/sqrt(d_A).
        VectorXcd v(da * db);
        for (int a = 0; a < da; ++a)
            for (int b = 0; b < db; ++b) v(a * db + b) = k(b, a) / std::sqrt(double(da));
        J += v * v.adjoint();
    }
    SystemLayout lay = in_.tensor_with(out_);
    return DensityOperator::unchecked(std::move(J), lay,
                                      flag_ == TraceFlag::TracePreserving
                                          ? Normalization::Normalized
                                          : Normalization::Subnormalized);
}

ChannelRep ChannelRep::stinespring() const {
    if (kind_ == ChannelKind::Stinespring) return *this;
    const auto& ks = kraus();
    const int env = static_cast<int>(ks.size());
    MatrixXcd gamma(out_.dim() * env, in_.dim());
    for (int e = 0; e < env; ++e)
        for (int b = 0; b < out_.dim(); ++b) gamma.row(b * env + e) = ks[e].row(b);
    return from_stinespring(std::move(gamma), in_, out_, env, flag_);
}

ChannelRep ChannelRep::complementary(const std::string& env_label) const {
    ChannelRep st = stinespring();
    const int env = st.env_dim_;
    std::vector<MatrixXcd> comp;
    for (int b = 0; b < out_.dim(); ++b) {
        MatrixXcd k(env, in_.dim());
        for (int e = 0; e < env; ++e) k.row(e) = st.stine_.row(b * env + e);
        comp.push_back(std::move(k));
    }
    TraceFlag flag = flag_ == TraceFlag::TracePreserving ? TraceFlag::TracePreserving : flag_;
    return from_kraus(std::move(comp), in_, SystemLayout::single(env_label, env), flag);
}

MatrixXcd ChannelRep::apply_matrix(const MatrixXcd& m) const {
    if (m.rows() != in_.dim()) throw std::invalid_argument("matrix does not match channel input");
    if (kind_ == ChannelKind::Choi) {
        const int da = in_.dim(), db = out_.dim();
        MatrixXcd out = MatrixXcd::Zero(db, db);
        for (int b = 0; b < db; ++b)
            for (int b2 = 0; b2 < db; ++b2) {
                Complex s = 0;
                for (int a = 0; a < da; ++a)
                    for (int a2 = 0; a2 < da; ++a2) s += m(a2, a) * choi_(a2 * db + b, a * db + b2);
                out(b, b2) = double(da) * s;
            }
        return out;
    }
    MatrixXcd out = MatrixXcd::Zero(out_.dim(), out_.dim());
    for (const auto& k : kraus()) out += k * m * k.adjoint();
    return out;
}

DensityOperator ChannelRep::apply(const DensityOperator& rho) const {
    const SystemLayout& lay = rho.layout();
    // Locate the channel input factors; they must sit contiguously and in
    // channel order (reordering is the caller's explicit job).
    const int nf_in = in_.num_factors();
    const int first = lay.index_of(in_.factors()[0].label);
    for (int k = 0; k < nf_in; ++k) {
        if (first + k >= lay.num_factors() ||
            lay.factors()[first + k].label != in_.factors()[k].label ||
            lay.factors()[first + k].dim != in_.factors()[k].dim)
            throw std::invalid_argument("channel input factors must appear contiguously in the state layout");
    }
    int before = 1, after = 1;
    for (int k = 0; k < first; ++k) before *= lay.factor_dim(k);
    for (int k = first + nf_in; k < lay.num_factors(); ++k) after *= lay.factor_dim(k);

    std::vector<Factor> out_fs;
    for (int k = 0; k < first; ++k) out_fs.push_back(lay.factors()[k]);
    for (const auto& f : out_.factors()) out_fs.push_back(f);
    for (int k = first + nf_in; k < lay.num_factors(); ++k) out_fs.push_back(lay.factors()[k]);
    SystemLayout out_lay(out_fs);

    const MatrixXcd ib = MatrixXcd::Identity(before, before);
    const MatrixXcd ia = MatrixXcd::Identity(after, after);
    MatrixXcd acc = MatrixXcd::Zero(out_lay.dim(), out_lay.dim());
    for (const auto& k : kraus()) {
        MatrixXcd big = kron_m(kron_m(ib, k), ia);
        acc += big * rho.matrix() * big.adjoint();
    }
    return DensityOperator::unchecked(std::move(acc), std::move(out_lay),
                                      flag_ == TraceFlag::TracePreserving
                                          ? rho.normalization()
                                          : Normalization::Subnormalized);
}

ChannelRep ChannelRep::tensor_power(int n) const {
    if (n < 1) throw std::invalid_argument("tensor power requires n >= 1");
    std::vector<MatrixXcd> ks = {MatrixXcd::Identity(1, 1)};
    SystemLayout in_n, out_n;
    for (int c = 1; c <= n; ++c) {
        std::vector<MatrixXcd> next;
        for (const auto& a : ks)
            for (const auto& k : kraus()) next.push_back(kron_m(a, k));
        ks = std::move(next);
        SystemLayout ic = suffixed(in_, c), oc = suffixed(out_, c);
        in_n = (c == 1) ? ic : in_n.tensor_with(ic);
        out_n = (c == 1) ? oc : out_n.tensor_with(oc);
    }
    if (n == 1) return from_kraus(kraus(), in_, out_, flag_);
    return from_kraus(std::move(ks), in_n, out_n, flag_);
}

ChannelRep ChannelRep::with_layouts(SystemLayout in, SystemLayout out) const {
    if (in.dim() != in_.dim() || out.dim() != out_.dim())
        throw std::invalid_argument("relabeling cannot change dimensions");
    ChannelRep ch = *this;
    ch.in_ = std::move(in);
    ch.out_ = std::move(out);
    return ch;
}

DensityOperator choi_apply(const DensityOperator& choi, const SystemLayout& in,
                           const SystemLayout& out, const DensityOperator& varsigma) {
    if (varsigma.dim() != in.dim()) throw std::invalid_argument("input state dimension mismatch");
    if (choi.dim() != in.dim() * out.dim())
        throw std::invalid_argument("Choi dimension does not match in (x) out");
    auto ch = ChannelRep::from_choi(choi.as_subnormalized(), in, out, TraceFlag::GeneralCP);
    return DensityOperator::unchecked(ch.apply_matrix(varsigma.matrix()), out,
                                      varsigma.normalization());
}

ChannelRep identity_channel(const std::string& in_label, const std::string& out_label, int dim) {
    return ChannelRep::from_kraus({MatrixXcd::Identity(dim, dim)}, SystemLayout::single(in_label, dim),
                                  SystemLayout::single(out_label, dim));
}

ChannelRep standard_channel(const std::string& name, double param, const std::string& in_label,
                            const std::string& out_label) {
    const SystemLayout in = SystemLayout::single(in_label, 2);
    const SystemLayout out = SystemLayout::single(out_label, 2);
    MatrixXcd I2 = MatrixXcd::Identity(2, 2);
    if (name == "depolarizing") {
        const double p = param;
        if (p < 0 || p > 4.0 / 3.0) throw std::invalid_argument("depolarizing parameter out of range");
        MatrixXcd X(2, 2), Y(2, 2), Z(2, 2);
        X << 0, 1, 1, 0;
        Y << 0, Complex(0, -1), Complex(0, 1), 0;
        Z << 1, 0, 0, -1;
        std::vector<MatrixXcd> ks;
        ks.push_back(std::sqrt(1.0 - 3.0 * p / 4.0) * I2);
        if (p > 0) {
            ks.push_back(std::sqrt(p / 4.0) * X);
            ks.push_back(std::sqrt(p / 4.0) * Y);
            ks.push_back(std::sqrt(p / 4.0) * Z);
        }
        return ChannelRep::from_kraus(std::move(ks), in, out);
    }
    if (name == "dephasing") {
        const double p = param;
        if (p < 0 || p > 1) throw std::invalid_argument("dephasing parameter out of range");
        std::vector<MatrixXcd> ks;
        if (p < 1) ks.push_back(std::sqrt(1.0 - p) * I2);
        if (p > 0) {
            MatrixXcd p0 = MatrixXcd::Zero(2, 2), p1 = MatrixXcd::Zero(2, 2);
            p0(0, 0) = std::sqrt(p);
            p1(1, 1) = std::sqrt(p);
            ks.push_back(p0);
            ks.push_back(p1);
        }
        return ChannelRep::from_kraus(std::move(ks), in, out);
    }
    if (name == "amplitude_damping") {
        const double g = param;
        if (g < 0 || g > 1) throw std::invalid_argument("damping parameter out of range");
        MatrixXcd k0 = MatrixXcd::Zero(2, 2), k1 = MatrixXcd::Zero(2, 2);
        k0(0, 0) = 1;
        k0(1, 1) = std::sqrt(1.0 - g);
        k1(0, 1) = std::sqrt(g);
        std::vector<MatrixXcd> ks = {k0};
        if (g > 0) ks.push_back(k1);
        return ChannelRep::from_kraus(std::move(ks), in, out);
    }
    if (name == "erasure") {
        const double p = param;
        if (p < 0 || p > 1) throw std::invalid_argument("erasure parameter out of range");
        const int d = 2;
        SystemLayout outs = SystemLayout::single(out_label, d + 1);
        std::vector<MatrixXcd> ks;
        MatrixXcd embed = MatrixXcd::Zero(d + 1, d);
        embed.topLeftCorner(d, d) = std::sqrt(1.0 - p) * MatrixXcd::Identity(d, d);
        if (p < 1) ks.push_back(embed);
        if (p > 0)
            for (int a = 0; a < d; ++a) {
                MatrixXcd k = MatrixXcd::Zero(d + 1, d);
                k(d, a) = std::sqrt(p);
                ks.push_back(k);
            }
        return ChannelRep::from_kraus(std::move(ks), in, outs);
    }
    throw std::invalid_argument("unknown standard channel '" + name + "'");
}

}  // namespace qcap
