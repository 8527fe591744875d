#include "qcap/types.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qcap {

namespace {

void compositions(int remaining, int slots, std::vector<int>& cur,
                  std::vector<TypeDistribution>& out, int n) {
    if (slots == 1) {
        cur.push_back(remaining);
        out.push_back({cur, n});
        cur.pop_back();
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        cur.push_back(k);
        compositions(remaining - k, slots - 1, cur, out, n);
        cur.pop_back();
    }
}

void sequences_of_type(std::vector<int>& remaining, std::vector<int>& seq, int pos, int n,
                       int alphabet, const std::function<void(const std::vector<int>&)>& emit) {
    if (pos == n) {
        emit(seq);
        return;
    }
    for (int x = 0; x < alphabet; ++x) {
        if (remaining[x] == 0) continue;
        --remaining[x];
        seq.push_back(x);
        sequences_of_type(remaining, seq, pos + 1, n, alphabet, emit);
        seq.pop_back();
        ++remaining[x];
    }
}

}  // namespace

std::vector<TypeDistribution> enumerate_types(int alphabet_size, int n) {
    if (alphabet_size < 1 || n < 0) throw std::invalid_argument("bad alphabet or length");
    std::vector<TypeDistribution> out;
    std::vector<int> cur;
    compositions(n, alphabet_size, cur, out, n);
    return out;
}

std::uint64_t type_class_size(const TypeDistribution& t) {
    // multinomial n! / prod c_i!, computed by incremental binomials
    std::uint64_t result = 1;
    int used = 0;
    auto binom = [](int n, int k) {
        std::uint64_t r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    for (int c : t.counts) {
        used += c;
        result *= binom(used, c);
    }
    return result;
}

MatrixXcd type_projector(const TypeDistribution& t) {
    const int alphabet = static_cast<int>(t.counts.size());
    const int n = t.n;
    std::int64_t dim = 1;
    for (int i = 0; i < n; ++i) dim *= alphabet;
    MatrixXcd proj = MatrixXcd::Zero(dim, dim);
    std::vector<int> remaining = t.counts;
    std::vector<int> seq;
    sequences_of_type(remaining, seq, 0, n, alphabet, [&](const std::vector<int>& s) {
        std::int64_t idx = 0;
        for (int x : s) idx = idx * alphabet + x;
        proj(idx, idx) = 1.0;
    });
    return proj;
}

StateTypeProjectors type_projectors_for_state(const DensityOperator& rho, int n) {
    const int d = rho.dim();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho.matrix());
    MatrixXcd u = es.eigenvectors();
    MatrixXcd un = MatrixXcd::Ones(1, 1);
    for (int i = 0; i < n; ++i) {
        MatrixXcd next(un.rows() * d, un.cols() * d);
        for (int r = 0; r < un.rows(); ++r)
            for (int c = 0; c < un.cols(); ++c) next.block(r * d, c * d, d, d) = un(r, c) * u;
        un = std::move(next);
    }
    StateTypeProjectors out;
    out.types = enumerate_types(d, n);
    for (const auto& t : out.types) {
        out.projectors.push_back(un * type_projector(t) * un.adjoint());
        double q = 1.0;
        for (int x = 0; x < d; ++x) q *= std::pow(es.eigenvalues()(x), t.counts[x]);
        out.weights.push_back(q);
    }
    return out;
}

}  // namespace qcap
