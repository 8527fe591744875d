#include "qcap/hermitian_program.hpp"

#include <map>
#include <stdexcept>
#include <tuple>

namespace qcap {

int HermitianProgram::scalar() {
    var_entries_.emplace_back();
    return nvars_++;
}

HermitianProgram::HermVar HermitianProgram::hermitian(int d) {
    HermVar h{nvars_, d};
    const int n = d + d * (d - 1);  // d diag + 2 per off-diag pair
    for (int i = 0; i < n; ++i) var_entries_.emplace_back();
    nvars_ += n;
    return h;
}

HermitianProgram::CplxVar HermitianProgram::complex_matrix(int rows, int cols) {
    CplxVar x{nvars_, rows, cols};
    for (int i = 0; i < 2 * rows * cols; ++i) var_entries_.emplace_back();
    nvars_ += 2 * rows * cols;
    return x;
}

int HermitianProgram::block(int d) {
    block_dims_.push_back(d);
    return static_cast<int>(block_dims_.size()) - 1;
}

void HermitianProgram::emit_complex_entry(std::vector<sdp::Entry>& out, int blk, int r, int c,
                                          Complex v) const {
    const int d = block_dims_[blk];
    auto push = [&](int a, int b, double w) {
        if (w == 0.0) return;
        if (a > b) std::swap(a, b);
        out.push_back({blk, a, b, w});
    };
    if (r == c) {
        // Hermitian diagonal entries are real.
        push(r, r, v.real());
        push(d + r, d + r, v.real());
        if (v.imag() != 0.0) throw std::invalid_argument("diagonal entry must be real");
        return;
    }
    // [[Re, -Im], [Im, Re]] with the (c,r) mirror of value conj(v) implied.
    push(r, c, v.real());
    push(d + r, d + c, v.real());
    push(r, d + c, -v.imag());
    push(c, d + r, v.imag());
}

void HermitianProgram::add_const(int blk, int r, int c, Complex v) {
    emit_complex_entry(const_entries_, blk, r, c, v);
}

void HermitianProgram::add_const_matrix(int blk, const MatrixXcd& m, int roff, int coff) {
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            const int gr = roff + r, gc = coff + c;
            if (gr > gc) continue;  // keep one triangle; mirror is implied
            Complex v = m(r, c);
            if (gr == gc) v = Complex(v.real(), 0.0);
            if (std::abs(v) > 0) emit_complex_entry(const_entries_, blk, gr, gc, v);
        }
}

void HermitianProgram::add_scalar_coeff(int blk, int var, int r, int c, Complex scale) {
    emit_complex_entry(var_entries_[var], blk, r, c, scale);
}

void HermitianProgram::add_hermitian_coeff(int blk, const HermVar& h, double scale, int offset) {
    int coord = h.first_coord;
    auto emit = [&](int hr, int hc, Complex v) {
        emit_complex_entry(var_entries_[coord], blk, offset + hr, offset + hc, v);
    };
    for (int i = 0; i < h.dim; ++i) {
        emit(i, i, Complex(scale, 0));
        ++coord;
    }
    for (int r = 0; r < h.dim; ++r)
        for (int c = r + 1; c < h.dim; ++c) {
            emit(r, c, Complex(scale, 0));
            ++coord;
            emit(r, c, Complex(0, scale));
            ++coord;
        }
}

void HermitianProgram::add_hermitian_kron_coeff(int blk, const HermVar& h, double scale,
                                                int left_dim, int right_dim, int offset) {
    // Places scale * (I_left (x) H (x) I_right) at (offset, offset).
    int coord = h.first_coord;
    auto emit_all = [&](int hr, int hc, Complex v) {
        for (int l = 0; l < left_dim; ++l)
            for (int q = 0; q < right_dim; ++q) {
                const int r = offset + (l * h.dim + hr) * right_dim + q;
                const int c = offset + (l * h.dim + hc) * right_dim + q;
                if (r <= c)
                    emit_complex_entry(var_entries_[coord], blk, r, c, v);
                else
                    emit_complex_entry(var_entries_[coord], blk, c, r, std::conj(v));
            }
    };
    for (int i = 0; i < h.dim; ++i) {
        emit_all(i, i, Complex(scale, 0));
        ++coord;
    }
    for (int r = 0; r < h.dim; ++r)
        for (int c = r + 1; c < h.dim; ++c) {
            emit_all(r, c, Complex(scale, 0));  // real part coordinate
            ++coord;
            emit_all(r, c, Complex(0, scale));  // imaginary part coordinate
            ++coord;
        }
}

void HermitianProgram::add_complex_coeff(int blk, const CplxVar& x, Complex scale, int roff,
                                         int coff) {
    int coord = x.first_coord;
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            const int r = roff + i, c = coff + j;
            if (r >= c) throw std::invalid_argument("complex block must sit strictly above the diagonal");
            emit_complex_entry(var_entries_[coord], blk, r, c, scale);
            ++coord;
            emit_complex_entry(var_entries_[coord], blk, r, c, scale * Complex(0, 1));
            ++coord;
        }
}

void HermitianProgram::objective(int var, double w) { objective_.push_back({var, w}); }

void HermitianProgram::objective_trace(const HermVar& h, double w) {
    for (int i = 0; i < h.dim; ++i) objective_.push_back({h.first_coord + i, w});
}

namespace {

sdp::SymMat merged(const sdp::SymMat& in) {
    std::map<std::tuple<int, int, int>, double> acc;
    for (const auto& e : in) acc[{e.block, e.row, e.col}] += e.value;
    sdp::SymMat out;
    for (const auto& [key, v] : acc)
        if (v != 0.0) out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
    return out;
}

}  // namespace

HermitianProgram::Result HermitianProgram::solve(const sdp::Options& options) const {
    // Lower "E(y) = C + sum y_i F_i >= 0, max g'y" into the solver's dual
    // form  max b'y s.t. C - sum y_i A_i >= 0  with A_i = -F_i.
    sdp::Problem prob;
    for (int d : block_dims_) prob.blocks.push_back({sdp::BlockSpec::Type::Dense, 2 * d});
    prob.objective = merged(const_entries_);
    prob.b = Eigen::VectorXd::Zero(nvars_);
    for (const auto& [var, w] : objective_) prob.b(var) += w;
    prob.constraints.resize(nvars_);
    for (int i = 0; i < nvars_; ++i) {
        sdp::SymMat flipped = merged(var_entries_[i]);
        for (auto& e : flipped) e.value = -e.value;
        prob.constraints[i] = std::move(flipped);
        if (prob.constraints[i].empty() && prob.b(i) != 0.0)
            throw std::logic_error("objective variable has no matrix coefficient (unbounded)");
    }

    sdp::Solution s = sdp::solve(prob, options);
    Result r;
    r.status = s.status;
    r.y = s.y.size() ? s.y : Eigen::VectorXd::Zero(nvars_);
    r.value = s.dual_objective;
    r.gap = s.gap;
    r.rel_gap = s.rel_gap;
    r.iterations = s.iterations;
    return r;
}

MatrixXcd HermitianProgram::extract_hermitian(const Result& r, const HermVar& h) const {
    MatrixXcd m = MatrixXcd::Zero(h.dim, h.dim);
    int coord = h.first_coord;
    for (int i = 0; i < h.dim; ++i) m(i, i) = r.y(coord++);
    for (int a = 0; a < h.dim; ++a)
        for (int c = a + 1; c < h.dim; ++c) {
            const double re = r.y(coord++);
            const double im = r.y(coord++);
            m(a, c) = Complex(re, im);
            m(c, a) = Complex(re, -im);
        }
    return m;
}

MatrixXcd HermitianProgram::extract_complex(const Result& r, const CplxVar& x) const {
    MatrixXcd m = MatrixXcd::Zero(x.rows, x.cols);
    int coord = x.first_coord;
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            const double re = r.y(coord++);
            const double im = r.y(coord++);
            m(i, j) = Complex(re, im);
        }
    return m;
}

}  // namespace qcap
