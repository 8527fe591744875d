#pragma once

#include <cstdint>

#include "qcap/channel.hpp"
#include "qcap/entropies.hpp"
#include "qcap/random.hpp"

namespace qcap {

/// Instance of randomized partial decoupling: a classically coherent state on
/// A (x) R with A = Ac (x) Ar and R = Rc (x) Rr, a CP map A -> E, and the two
/// smoothing parameters entering the bound. The state layout is fixed to the
/// labels {Ac, Ar, Rc, Rr} with dim(Ac) = dim(Rc) = J.
class RPDInstance {
  public:
    /// Validates the layout and classical coherence (every Ac block (k,l)
    /// must be supported on |k><l| of Rc, residual below 1e-10).
    static RPDInstance make(DensityOperator psi, ChannelRep map_a_to_e, double epsilon = 0.0,
                            double mu = 0.0);

    const DensityOperator& psi() const { return psi_; }
    const ChannelRep& map() const { return map_; }
    double epsilon() const { return eps_; }
    double mu() const { return mu_; }
    int num_blocks() const { return J_; }    // J
    int block_dim() const { return r_; }     // r
    int ref_block_dim() const { return rr_; }

  private:
    DensityOperator psi_{MatrixXcd::Identity(1, 1), SystemLayout::single("x", 1)};
    ChannelRep map_ = identity_channel("a", "e", 1);
    double eps_ = 0, mu_ = 0;
    int J_ = 1, r_ = 1, rr_ = 1;
};

/// Closed-form Haar average of U psi U^dag over block unitaries: the Ac
/// blocks collapse to their diagonal, each block twirls to maximally mixed
/// on Ar times the R marginal.
DensityOperator averaged_state(const RPDInstance& inst);

/// One sample of the partial decoupling error: draws a block permutation and
/// independent Haar blocks, returns || T o G_s (U(psi) - psi_av) ||_1.
double sample_delta(const RPDInstance& inst, RngStream& rng);

struct DirectBound {
    double bound_rhs = 0.0;       // theta_perm + theta_block + 4(eps + mu + eps*mu)
    double theta_perm = 0.0;      // permutation-mixing term (zero when J = 1)
    double theta_block = 0.0;     // block-twirl term (zero when block dim = 1)
    double exponent_perm = 0.0;   // its exponent (infinite when the term is zero)
    double exponent_block = 0.0;
};

/// Entropic right-hand side of the direct decoupling bound.
DirectBound direct_bound_rhs(const RPDInstance& inst);

struct DecouplingReport {
    double mean_delta = 0.0;
    double std_error = 0.0;
    double bound_rhs = 0.0;
    int n_samples = 0;
    double exponent_perm = 0.0;
    double exponent_block = 0.0;
    bool pass = false;  // mean - 3 stderr <= bound
};

/// Monte-Carlo estimate of E[Delta] against the direct bound. Sampling is
/// partitioned into fixed chunks with private RNG streams and merged in
/// chunk order, so the result is independent of thread scheduling.
DecouplingReport verify_direct_theorem(const RPDInstance& inst, int n_samples,
                                       std::uint64_t seed, int n_threads = 0);

struct ConverseCheck {
    bool hypothesis_ok = false;      // || T(psi) - omega ||_1 <= delta
    double hypothesis_distance = 0.0;
    bool ineq_mixing = false;        // first converse inequality
    bool ineq_block = false;         // second converse inequality
    double lambda = 0.0;
    double lambda_prime = 0.0;
    bool saturated = false;          // smoothing parameter >= 1, inequality vacuous
    double slack_mixing = 0.0;       // lhs - rhs of each inequality
    double slack_block = 0.0;
};

/// Converse bound check: verifies the decoupled-form hypothesis on omega and
/// evaluates both converse inequalities at the smoothing parameters induced
/// by (delta, iota, upsilon). Throws if the hypothesis distance exceeds
/// delta; the inequalities are expected to hold whenever it does.
ConverseCheck check_converse_theorem(const RPDInstance& inst, const DensityOperator& omega,
                                     double delta, double iota, double upsilon = 0.0);

/// Smoothing parameters of the converse bound.
double converse_lambda(double delta, double iota, double upsilon);
double converse_lambda_prime(double delta, double iota, double upsilon);

/// Random classically coherent pure state on {Ac, Ar, Rc, Rr}.
DensityOperator random_classically_coherent(int num_blocks, int block_dim, int ref_dim,
                                            RngStream& rng);

}  // namespace qcap
