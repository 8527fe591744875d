#pragma once

#include <cstdint>
#include <random>

#include "qcap/density.hpp"

namespace qcap {

/// Deterministic RNG stream: (seed, stream) pairs give independent,
/// reproducible sequences so parallel workers can own private streams.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    double gauss();              ///< standard normal
    double uniform();            ///< uniform on [0,1)
    int uniform_int(int n);      ///< uniform on {0,...,n-1}
    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

/// Haar-distributed unitary, sampled by QR of a complex Gaussian matrix with
/// the R-diagonal phase correction.
MatrixXcd haar_unitary(int dim, RngStream& rng);
MatrixXcd haar_unitary(int dim, std::uint64_t seed);

/// Uniform random permutation of {0,...,n-1} by Fisher-Yates.
std::vector<int> random_permutation(int n, RngStream& rng);

/// Random pure state vector (Haar on the sphere).
VectorXcd random_pure_vector(int dim, RngStream& rng);

/// Random full-rank density matrix: GG^dag / tr from a Ginibre sample.
MatrixXcd random_density_matrix(int dim, RngStream& rng, int rank = 0);

DensityOperator random_state(const SystemLayout& layout, RngStream& rng, int rank = 0);
PureState random_pure_state(const SystemLayout& layout, RngStream& rng);

}  // namespace qcap
