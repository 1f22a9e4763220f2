#pragma once

#include <cmath>
#include <string>

#include "htensor/errors.hpp"
#include "htensor/matrix.hpp"
#include "htensor/tensor.hpp"

namespace htensor {

/// Normal-square matrix of an even-order hypercubic tensor: side n^k with the
/// first k modes mapped to rows and the last k to columns.
struct NSMatrix {
    int n = 0;
    int k = 0;
    Matrix data;
};

inline std::size_t pow_int(int base, int exp) {
    std::size_t v = 1;
    for (int i = 0; i < exp; ++i) v *= static_cast<std::size_t>(base);
    return v;
}

namespace detail {

inline void require_even_hypercubic(const DenseTensor& a, const char* op) {
    if (!a.hypercubic()) throw ShapeError(std::string(op) + ": tensor must be hypercubic");
    if (a.order() % 2 != 0) throw ShapeError(std::string(op) + ": tensor order must be even");
}

}  // namespace detail

/// Row index (1-based) of the index block (i_1..i_k): 1 + sum (i_r - 1) n^(k-r).
inline int ns_axis_index(const MultiIndex& idx, std::size_t first, int k, int n) {
    int v = 0;
    for (int r = 0; r < k; ++r) v = v * n + (idx[first + static_cast<std::size_t>(r)] - 1);
    return v + 1;
}

inline NSMatrix normal_unfold(const DenseTensor& a) {
    detail::require_even_hypercubic(a, "normal_unfold");
    const int k = a.order() / 2;
    const int n = a.dim();
    const int side = static_cast<int>(pow_int(n, k));
    NSMatrix ns{n, k, Matrix(side, side)};
    MultiIndex idx(static_cast<std::size_t>(a.order()), 1);
    do {
        int i = ns_axis_index(idx, 0, k, n);
        int j = ns_axis_index(idx, static_cast<std::size_t>(k), k, n);
        ns.data(i - 1, j - 1) = a.at(idx);
    } while (next_index(idx, a.shape()));
    return ns;
}

/// Exact inverse of normal_unfold. The side must equal n^k.
inline DenseTensor normal_fold(const Matrix& m, int k, int n) {
    if (k < 1 || n < 1) throw ShapeError("normal_fold: bad half-order or dimension");
    const std::size_t side = pow_int(n, k);
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != side)
        throw ShapeError("normal_fold: matrix side " + std::to_string(m.rows()) +
                         " is not " + std::to_string(n) + "^" + std::to_string(k));
    DenseTensor out(Shape(static_cast<std::size_t>(2 * k), n));
    MultiIndex idx(static_cast<std::size_t>(2 * k), 1);
    do {
        int i = ns_axis_index(idx, 0, k, n);
        int j = ns_axis_index(idx, static_cast<std::size_t>(k), k, n);
        out.at(idx) = m(i - 1, j - 1);
    } while (next_index(idx, out.shape()));
    return out;
}

inline DenseTensor normal_fold(const NSMatrix& ns) { return normal_fold(ns.data, ns.k, ns.n); }

/// Determinant of the NS matrix, via LU with partial pivoting.
inline double ns_det(const DenseTensor& a) {
    detail::require_even_hypercubic(a, "ns_det");
    return lu_det(lu_decompose(normal_unfold(a).data));
}

/// Tensor inverse through the normal unfolding: B with A.B = B.A = identity
/// under the k-fold contractive product. Throws SingularError when the
/// smallest LU pivot falls below pivot_tol x the largest |entry| of the NS
/// matrix.
inline DenseTensor invert(const DenseTensor& a, double pivot_tol = 1e-12) {
    detail::require_even_hypercubic(a, "invert");
    NSMatrix ns = normal_unfold(a);
    LuDecomposition lu = lu_decompose(ns.data);
    Matrix inv = lu_inverse(lu, pivot_tol);
    return normal_fold(inv, ns.k, ns.n);
}

}  // namespace htensor
