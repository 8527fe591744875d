#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qcap::sdp {

/// Cone blocks: dense symmetric PSD blocks plus diagonal (linear) blocks.
struct BlockSpec {
    enum class Type { Dense, Diag };
    Type type = Type::Dense;
    int dim = 1;
};

/// One nonzero of a symmetric coefficient matrix. Entries are stored for
/// row <= col; off-diagonal entries implicitly include the mirrored element.
struct Entry {
    int block = 0;
    int row = 0;
    int col = 0;
    double value = 0.0;
};

using SymMat = std::vector<Entry>;

/// Standard-form pair over a product of symmetric cones:
///   (P) min <C,X>  s.t. <A_i,X> = b_i,  X psd
///   (D) max b'y    s.t. C - sum_i y_i A_i = S psd
/// Problems built from linear matrix inequalities in free variables load
/// naturally as (D) with one constraint per scalar variable.
struct Problem {
    std::vector<BlockSpec> blocks;
    std::vector<SymMat> constraints;  // A_i
    Eigen::VectorXd b;
    SymMat objective;  // C
};

enum class SolveStatus { Optimal, NearOptimal, MaxIterations, NumericalFailure };

struct Options {
    double rel_gap_tol = 1e-8;
    double feas_tol = 1e-8;
    int max_iterations = 120;
    double step_fraction = 0.98;
    bool verbose = false;
};

struct Solution {
    SolveStatus status = SolveStatus::NumericalFailure;
    double primal_objective = 0.0;  // <C,X>
    double dual_objective = 0.0;    // b'y
    double gap = 0.0;               // |<C,X> - b'y|
    double rel_gap = 0.0;
    double primal_infeas = 0.0;
    double dual_infeas = 0.0;
    int iterations = 0;
    Eigen::VectorXd y;
    std::vector<Eigen::MatrixXd> X;  // per block (diagonal blocks as full matrices)
    std::vector<Eigen::MatrixXd> S;
    std::string message;
};

/// Infeasible-start primal-dual interior-point method (HKM direction with a
/// Mehrotra predictor-corrector step). Dense Schur complement; intended for
/// problems with a few thousand constraints and blocks up to a few hundred.
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace qcap::sdp
