#pragma once

#include <complex>
#include <vector>

#include "qcap/density.hpp"
#include "qcap/sdp.hpp"

namespace qcap {

/// Builder for semidefinite programs over complex Hermitian matrix
/// inequalities with real scalar variables:
///
///   maximize  g'y   subject to   E_k(y) >= 0 for each block k,
///
/// where every E_k(y) is a complex Hermitian matrix affine in y. Hermitian
/// PSD constraints are lowered to the real symmetric cone through the
/// standard 2x2 real/imaginary block embedding before handing off to the
/// interior-point solver.
class HermitianProgram {
  public:
    struct HermVar {
        int first_coord;  // diag coords, then (re,im) pairs for row<col
        int dim;
    };
    struct CplxVar {
        int first_coord;  // (re,im) per entry, row-major
        int rows, cols;
    };

    /// Free real scalar variable.
    int scalar();
    /// Hermitian matrix variable of complex dimension d (d^2 real coords).
    HermVar hermitian(int d);
    /// Unstructured complex matrix variable (2*rows*cols real coords).
    CplxVar complex_matrix(int rows, int cols);

    /// New complex Hermitian LMI block of dimension d.
    int block(int d);

    /// expression_k += v at (r,c) (Hermitian mirror implied).
    void add_const(int blk, int r, int c, Complex v);
    /// expression_k += m placed at (row_offset, col_offset); m Hermitian.
    void add_const_matrix(int blk, const MatrixXcd& m, int row_offset = 0, int col_offset = 0);

    /// expression_k += scale * y_var at (r,c) (+ mirror).
    void add_scalar_coeff(int blk, int var, int r, int c, Complex scale);
    /// expression_k += scale * H placed at (offset, offset).
    void add_hermitian_coeff(int blk, const HermVar& h, double scale, int offset = 0);
    /// expression_k += scale * (X at (roff,coff) and X^dag at (coff,roff)).
    void add_complex_coeff(int blk, const CplxVar& x, Complex scale, int roff, int coff);
    /// expression_k += scale * kron(I_left, H, I_right) at (offset, offset).
    void add_hermitian_kron_coeff(int blk, const HermVar& h, double scale, int left_dim,
                                  int right_dim, int offset = 0);

    /// objective += w * y_var  (maximized).
    void objective(int var, double w);
    /// objective += w * tr(H).
    void objective_trace(const HermVar& h, double w);

    struct Result {
        sdp::SolveStatus status;
        double value = 0.0;     ///< optimal objective g'y
        double gap = 0.0;       ///< duality gap certificate
        double rel_gap = 0.0;
        int iterations = 0;
        Eigen::VectorXd y;
    };

    Result solve(const sdp::Options& options) const;

    MatrixXcd extract_hermitian(const Result& r, const HermVar& h) const;
    MatrixXcd extract_complex(const Result& r, const CplxVar& x) const;
    double extract_scalar(const Result& r, int var) const { return r.y(var); }

    int num_vars() const { return nvars_; }

  private:
    void emit_complex_entry(std::vector<sdp::Entry>& out, int blk, int r, int c, Complex v) const;

    int nvars_ = 0;
    std::vector<int> block_dims_;                    // complex dims
    std::vector<sdp::SymMat> var_entries_;           // realified coefficient of each variable
    sdp::SymMat const_entries_;                      // realified constant term C
    std::vector<std::pair<int, double>> objective_;  // (var, weight)
};

}  // namespace qcap
