#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "htensor/errors.hpp"
#include "htensor/tensor.hpp"

namespace htensor {

/// Dense row-major matrix. Plumbing type behind NS matrices, Gram matrices,
/// rank computations, and the ALS solves.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {
        if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double operator()(int i, int j) const { return a_[idx(i, j)]; }
    double& operator()(int i, int j) { return a_[idx(i, j)]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }
    int rows_, cols_;
    std::vector<double> a_;
};

inline Matrix identity_matrix(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

/// Order-2 tensor view of a matrix and back.
inline DenseTensor matrix_to_tensor(const Matrix& m) {
    return DenseTensor(Shape{m.rows(), m.cols()}, m.data());
}

inline Matrix tensor_to_matrix(const DenseTensor& a) {
    if (a.order() != 2) throw ShapeError("expected an order-2 tensor");
    Matrix m(a.extent(1), a.extent(2));
    m.data() = a.data();
    return m;
}

/// LU factorization with partial (row) pivoting, kept with enough context to
/// decide singularity against a relative threshold afterwards.
struct LuDecomposition {
    Matrix lu;               ///< packed L (unit diagonal implied) and U
    std::vector<int> perm;   ///< row permutation: factored row i is input row perm[i]
    double swap_sign = 1.0;  ///< (-1)^(number of row swaps)
    double max_abs = 0.0;    ///< largest |entry| of the input matrix
    double min_pivot = 0.0;  ///< smallest |pivot| encountered

    bool singular(double pivot_tol) const {
        return max_abs == 0.0 || min_pivot < pivot_tol * max_abs;
    }
};

inline LuDecomposition lu_decompose(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("lu_decompose: matrix must be square");
    const int n = a.rows();
    LuDecomposition d;
    d.lu = a;
    d.perm.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d.perm[static_cast<std::size_t>(i)] = i;
    d.max_abs = a.max_abs();
    d.min_pivot = n > 0 ? std::numeric_limits<double>::infinity() : 0.0;

    Matrix& m = d.lu;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
            std::swap(d.perm[static_cast<std::size_t>(col)], d.perm[static_cast<std::size_t>(piv)]);
            d.swap_sign = -d.swap_sign;
        }
        double p = m(col, col);
        d.min_pivot = std::min(d.min_pivot, std::abs(p));
        if (p == 0.0) continue;  // leave the zero column; callers decide via singular()
        for (int r = col + 1; r < n; ++r) {
            double f = m(r, col) / p;
            m(r, col) = f;
            for (int j = col + 1; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    if (n == 0) d.min_pivot = 0.0;
    return d;
}

inline double lu_det(const LuDecomposition& d) {
    double det = d.swap_sign;
    for (int i = 0; i < d.lu.rows(); ++i) det *= d.lu(i, i);
    return det;
}

inline double det(const Matrix& a) { return lu_det(lu_decompose(a)); }

/// Solve A x = b from a factorization. Throws SingularError below pivot_tol.
inline std::vector<double> lu_solve(const LuDecomposition& d, const std::vector<double>& b,
                                    double pivot_tol) {
    const int n = d.lu.rows();
    if (static_cast<int>(b.size()) != n) throw ShapeError("lu_solve: right-hand side length mismatch");
    if (d.singular(pivot_tol))
        throw SingularError("Singular: pivot " + std::to_string(d.min_pivot) + " below threshold " +
                            std::to_string(pivot_tol) + " x " + std::to_string(d.max_abs));
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {  // forward, applying the permutation
        double s = b[static_cast<std::size_t>(d.perm[static_cast<std::size_t>(i)])];
        for (int j = 0; j < i; ++j) s -= d.lu(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s;
    }
    for (int i = n - 1; i >= 0; --i) {  // back substitution
        double s = x[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= d.lu(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / d.lu(i, i);
    }
    return x;
}

inline Matrix lu_inverse(const LuDecomposition& d, double pivot_tol) {
    const int n = d.lu.rows();
    Matrix inv(n, n);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        e[static_cast<std::size_t>(j)] = 1.0;
        std::vector<double> col = lu_solve(d, e, pivot_tol);
        e[static_cast<std::size_t>(j)] = 0.0;
        for (int i = 0; i < n; ++i) inv(i, j) = col[static_cast<std::size_t>(i)];
    }
    return inv;
}

inline Matrix inverse(const Matrix& a, double pivot_tol = 1e-12) {
    return lu_inverse(lu_decompose(a), pivot_tol);
}

/// Numeric rank by Gaussian elimination with complete pivoting; a step counts
/// while its pivot stays above tol x (largest pivot, i.e. the first one).
inline int numeric_rank(Matrix a, double tol) {
    const int rows = a.rows(), cols = a.cols();
    int rank = 0;
    double first_pivot = 0.0;
    for (int step = 0; step < std::min(rows, cols); ++step) {
        int pi = step, pj = step;
        double best = 0.0;
        for (int i = step; i < rows; ++i)
            for (int j = step; j < cols; ++j)
                if (std::abs(a(i, j)) > best) {
                    best = std::abs(a(i, j));
                    pi = i;
                    pj = j;
                }
        if (step == 0) first_pivot = best;
        if (best == 0.0 || best < tol * first_pivot) break;
        if (pi != step)
            for (int j = 0; j < cols; ++j) std::swap(a(step, j), a(pi, j));
        if (pj != step)
            for (int i = 0; i < rows; ++i) std::swap(a(i, step), a(i, pj));
        ++rank;
        for (int i = step + 1; i < rows; ++i) {
            double f = a(i, step) / a(step, step);
            for (int j = step; j < cols; ++j) a(i, j) -= f * a(step, j);
        }
    }
    return rank;
}

}  // namespace htensor
