#include "qcap/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qcap::sdp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using BlockMats = std::vector<MatrixXd>;

struct Indexed {
    // entries of each constraint grouped by block: per block, (constraint id, local entries)
    struct PerBlock {
        std::vector<int> constraint;           // which A_i touch this block
        std::vector<std::vector<Entry>> rows;  // their entries in this block
    };
    std::vector<PerBlock> blocks;
    std::vector<std::vector<Entry>> by_constraint_block(int m, int nblocks,
                                                        const std::vector<SymMat>& cons) const;
};

double inner(const SymMat& a, const BlockMats& x) {
    double s = 0;
    for (const auto& e : a) {
        if (e.row == e.col)
            s += e.value * x[e.block](e.row, e.col);
        else
            s += 2.0 * e.value * x[e.block](e.row, e.col);
    }
    return s;
}

void add_scaled(BlockMats& acc, const SymMat& a, double w) {
    for (const auto& e : a) {
        acc[e.block](e.row, e.col) += w * e.value;
        if (e.row != e.col) acc[e.block](e.col, e.row) += w * e.value;
    }
}

double dot_blocks(const BlockMats& a, const BlockMats& b) {
    double s = 0;
    for (size_t k = 0; k < a.size(); ++k) s += (a[k].array() * b[k].array()).sum();
    return s;
}

double frob(const BlockMats& a) { return std::sqrt(dot_blocks(a, a)); }

/// Largest alpha with X + alpha*D psd, given the Cholesky factor of X.
double step_to_boundary(const Eigen::LLT<MatrixXd>& llt, const MatrixXd& d) {
    MatrixXd w = llt.matrixL().solve(d);
    w = llt.matrixL().solve(w.transpose().eval()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (w + w.transpose()),
                                               Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin >= -1e-14) return std::numeric_limits<double>::infinity();
    return -1.0 / lmin;
}

}  // namespace

Solution solve(const Problem& prob, const Options& opt) {
    const int m = static_cast<int>(prob.constraints.size());
    const int nb = static_cast<int>(prob.blocks.size());
    int ntot = 0;
    for (const auto& b : prob.blocks) ntot += b.dim;

    Solution sol;
    if (m == 0 || ntot == 0) {
        sol.status = SolveStatus::Optimal;
        return sol;
    }

    // Group constraint entries per block so the Schur loop touches only the
    // constraints that live on each block.
    std::vector<std::vector<int>> touchers(nb);
    std::vector<std::vector<std::vector<Entry>>> entries(nb);  // [block][slot] -> entries
    std::vector<std::vector<int>> slot_of(nb, std::vector<int>(m, -1));
    for (int i = 0; i < m; ++i) {
        for (const auto& e : prob.constraints[i]) {
            if (slot_of[e.block][i] < 0) {
                slot_of[e.block][i] = static_cast<int>(touchers[e.block].size());
                touchers[e.block].push_back(i);
                entries[e.block].emplace_back();
            }
            entries[e.block][slot_of[e.block][i]].push_back(e);
        }
    }

    auto zeros = [&]() {
        BlockMats z;
        for (const auto& b : prob.blocks) z.push_back(MatrixXd::Zero(b.dim, b.dim));
        return z;
    };
    auto identity_scaled = [&](double t) {
        BlockMats z;
        for (const auto& b : prob.blocks) z.push_back(t * MatrixXd::Identity(b.dim, b.dim));
        return z;
    };

    BlockMats C = zeros();
    add_scaled(C, prob.objective, 1.0);

    // Initial point scaling (SDPA-style heuristics).
    double amax = 1.0;
    for (const auto& a : prob.constraints) {
        double f = 0;
        for (const auto& e : a) f += e.value * e.value * (e.row == e.col ? 1 : 2);
        amax = std::max(amax, std::sqrt(f));
    }
    const double bmax = prob.b.size() ? prob.b.cwiseAbs().maxCoeff() : 0.0;
    double cfro = frob(C);
    const double tau_p = std::max(10.0, 2.0 * (1.0 + bmax) / (1.0 + amax) * std::sqrt(double(ntot)));
    const double tau_d = std::max(10.0, 1.0 + cfro + amax);

    BlockMats X = identity_scaled(tau_p);
    BlockMats S = identity_scaled(tau_d);
    VectorXd y = VectorXd::Zero(m);

    MatrixXd M(m, m);
    VectorXd rp(m), rhs(m);
    BlockMats Rd = zeros(), Rc = zeros();
    std::vector<Eigen::LLT<MatrixXd>> xllt(nb), sllt(nb);
    BlockMats Sinv = zeros();

    double best_err = std::numeric_limits<double>::infinity();
    Solution best;

    auto record = [&](double relgap, double pinf, double dinf, int iter) {
        const double err = std::max({relgap, pinf, dinf});
        if (err < best_err) {
            best_err = err;
            best.y = y;
            best.X.assign(X.begin(), X.end());
            best.S.assign(S.begin(), S.end());
            best.primal_objective = dot_blocks(C, X);
            best.dual_objective = prob.b.dot(y);
            best.gap = std::abs(best.primal_objective - best.dual_objective);
            best.rel_gap = relgap;
            best.primal_infeas = pinf;
            best.dual_infeas = dinf;
            best.iterations = iter;
        }
    };

    int iter = 0;
    int stall = 0;
    double prev_err = std::numeric_limits<double>::infinity();
    for (; iter < opt.max_iterations; ++iter) {
        // Residuals.
        for (int i = 0; i < m; ++i) rp(i) = prob.b(i) - inner(prob.constraints[i], X);
        for (int k = 0; k < nb; ++k) Rd[k] = C[k];
        for (int i = 0; i < m; ++i)
            if (y(i) != 0.0) add_scaled(Rd, prob.constraints[i], -y(i));
        double mu = 0;
        for (int k = 0; k < nb; ++k) mu += (X[k].array() * S[k].array()).sum();
        mu /= ntot;

        const double pobj = dot_blocks(C, X);
        const double dobj = prob.b.dot(y);
        const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        const double pinf = rp.norm() / (1.0 + prob.b.norm());
        double dnorm = 0;
        {
            BlockMats rd_minus_s = Rd;
            for (int k = 0; k < nb; ++k) rd_minus_s[k] -= S[k];
            dnorm = frob(rd_minus_s) / (1.0 + cfro);
            Rd = std::move(rd_minus_s);  // from here Rd holds C - A*(y) - S
        }
        record(relgap, pinf, dnorm, iter);
        if (opt.verbose)
            std::printf("it %3d  mu %9.2e  gap %9.2e  pinf %9.2e  dinf %9.2e\n", iter, mu, relgap,
                        pinf, dnorm);
        if (relgap <= opt.rel_gap_tol && pinf <= opt.feas_tol && dnorm <= opt.feas_tol) {
            sol.status = SolveStatus::Optimal;
            break;
        }
        const double err = std::max({relgap, pinf, dnorm});
        if (err > 0.9 * prev_err)
            ++stall;
        else
            stall = 0;
        prev_err = std::min(prev_err, err);
        if (stall >= 12) break;

        // Factorizations.
        bool fail = false;
        for (int k = 0; k < nb; ++k) {
            xllt[k].compute(X[k]);
            sllt[k].compute(S[k]);
            if (xllt[k].info() != Eigen::Success || sllt[k].info() != Eigen::Success) {
                fail = true;
                break;
            }
            Sinv[k] = sllt[k].solve(MatrixXd::Identity(S[k].rows(), S[k].cols()));
        }
        if (fail) break;

        // Schur complement M_ij = tr(A_i X A_j S^-1), symmetric.
        M.setZero();
        for (int k = 0; k < nb; ++k) {
            const int nk = prob.blocks[k].dim;
            MatrixXd T(nk, nk);
            for (size_t sj = 0; sj < touchers[k].size(); ++sj) {
                const int j = touchers[k][sj];
                T.setZero();
                for (const auto& e : entries[k][sj]) {
                    T.noalias() += e.value * X[k].col(e.row) * Sinv[k].row(e.col);
                    if (e.row != e.col)
                        T.noalias() += e.value * X[k].col(e.col) * Sinv[k].row(e.row);
                }
                for (size_t si = 0; si < touchers[k].size(); ++si) {
                    const int i = touchers[k][si];
                    if (i > j) continue;
                    double acc = 0;
                    for (const auto& e : entries[k][si]) {
                        if (e.row == e.col)
                            acc += e.value * T(e.row, e.col);
                        else
                            acc += e.value * (T(e.row, e.col) + T(e.col, e.row));
                    }
                    M(i, j) += acc;
                }
            }
        }
        M = M.selfadjointView<Eigen::Upper>();

        Eigen::LDLT<MatrixXd> mldlt(M);
        if (mldlt.info() != Eigen::Success || !mldlt.isPositive()) {
            // Tiny diagonal lift for degenerate constraint sets.
            const double lift = 1e-12 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
            M.diagonal().array() += lift;
            mldlt.compute(M);
            if (mldlt.info() != Eigen::Success) break;
        }

        auto solve_directions = [&](const BlockMats& rc, BlockMats& dX, BlockMats& dS,
                                    VectorXd& dy) {
            // rhs_i = rp_i - tr(A_i (Rc - X Rd) S^-1)
            BlockMats G = zeros();
            for (int k = 0; k < nb; ++k)
                G[k] = (rc[k] - X[k] * Rd[k]) * Sinv[k];
            for (int i = 0; i < m; ++i) {
                double s = 0;
                for (const auto& e : prob.constraints[i]) {
                    if (e.row == e.col)
                        s += e.value * G[e.block](e.row, e.col);
                    else
                        s += e.value * (G[e.block](e.row, e.col) + G[e.block](e.col, e.row));
                }
                rhs(i) = rp(i) - s;
            }
            dy = mldlt.solve(rhs);
            dS = Rd;
            for (int i = 0; i < m; ++i)
                if (dy(i) != 0.0) add_scaled(dS, prob.constraints[i], -dy(i));
            for (int k = 0; k < nb; ++k) {
                MatrixXd t = (rc[k] - X[k] * dS[k]) * Sinv[k];
                dX[k] = 0.5 * (t + t.transpose());
            }
        };

        // Predictor (affine scaling).
        for (int k = 0; k < nb; ++k) Rc[k] = -X[k] * S[k];
        BlockMats dX = zeros(), dS = zeros();
        VectorXd dy(m);
        solve_directions(Rc, dX, dS, dy);

        double ap = 1.0, ad = 1.0;
        for (int k = 0; k < nb; ++k) {
            ap = std::min(ap, opt.step_fraction * step_to_boundary(xllt[k], dX[k]));
            ad = std::min(ad, opt.step_fraction * step_to_boundary(sllt[k], dS[k]));
        }
        double mu_aff = 0;
        for (int k = 0; k < nb; ++k)
            mu_aff += ((X[k] + ap * dX[k]).array() * (S[k] + ad * dS[k]).array()).sum();
        mu_aff = std::max(mu_aff / ntot, 0.0);
        double sigma = std::pow(mu_aff / mu, 3.0);
        sigma = std::min(1.0, std::max(sigma, 1e-8));

        // Corrector.
        for (int k = 0; k < nb; ++k) {
            Rc[k] = -X[k] * S[k] - dX[k] * dS[k];
            Rc[k].diagonal().array() += sigma * mu;
        }
        solve_directions(Rc, dX, dS, dy);

        ap = 1.0;
        ad = 1.0;
        for (int k = 0; k < nb; ++k) {
            ap = std::min(ap, opt.step_fraction * step_to_boundary(xllt[k], dX[k]));
            ad = std::min(ad, opt.step_fraction * step_to_boundary(sllt[k], dS[k]));
        }
        if (ap < 1e-10 && ad < 1e-10) break;

        for (int k = 0; k < nb; ++k) {
            X[k] += ap * dX[k];
            S[k] += ad * dS[k];
        }
        y += ad * dy;
    }

    sol = best;
    sol.iterations = iter;
    if (sol.rel_gap <= opt.rel_gap_tol && sol.primal_infeas <= opt.feas_tol &&
        sol.dual_infeas <= opt.feas_tol)
        sol.status = SolveStatus::Optimal;
    else if (iter >= opt.max_iterations)
        sol.status = SolveStatus::MaxIterations;
    else if (best_err < std::numeric_limits<double>::infinity())
        sol.status = SolveStatus::NearOptimal;
    else
        sol.status = SolveStatus::NumericalFailure;
    return sol;
}

}  // namespace qcap::sdp
