#include "qcap/random.hpp"

#include <Eigen/QR>

namespace qcap {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t mixed = stream ^ 0x9e3779b97f4a7c15ull;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32)};
    engine_.seed(seq);
}

double RngStream::gauss() { return normal_(engine_); }
double RngStream::uniform() { return unif_(engine_); }
int RngStream::uniform_int(int n) {
    std::uniform_int_distribution<int> d(0, n - 1);
    return d(engine_);
}

MatrixXcd haar_unitary(int dim, RngStream& rng) {
    MatrixXcd g(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) g(i, j) = Complex(rng.gauss(), rng.gauss());
    Eigen::HouseholderQR<MatrixXcd> qr(g);
    MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(dim, dim);
    MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the gauge: scale columns so R has positive diagonal, which makes
    // the distribution exactly Haar rather than QR-convention dependent.
    for (int j = 0; j < dim; ++j) {
        Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0) ? d / a : Complex(1, 0);
    }
    return q;
}

MatrixXcd haar_unitary(int dim, std::uint64_t seed) {
    RngStream rng(seed);
    return haar_unitary(dim, rng);
}

std::vector<int> random_permutation(int n, RngStream& rng) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.uniform_int(i + 1)]);
    return p;
}

VectorXcd random_pure_vector(int dim, RngStream& rng) {
    VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(rng.gauss(), rng.gauss());
    v /= v.norm();
    return v;
}

MatrixXcd random_density_matrix(int dim, RngStream& rng, int rank) {
    if (rank <= 0 || rank > dim) rank = dim;
    MatrixXcd g(dim, rank);
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < dim; ++i) g(i, j) = Complex(rng.gauss(), rng.gauss());
    MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

DensityOperator random_state(const SystemLayout& layout, RngStream& rng, int rank) {
    return DensityOperator::unchecked(random_density_matrix(layout.dim(), rng, rank), layout,
                                      Normalization::Normalized);
}

PureState random_pure_state(const SystemLayout& layout, RngStream& rng) {
    return PureState(random_pure_vector(layout.dim(), rng), layout);
}

}  // namespace qcap
