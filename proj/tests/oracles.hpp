#pragma once

// Independent reference implementations used as test oracles. These recompute
// expected values with their own index bookkeeping and must stay decoupled
// from the library's implementation paths.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "htensor/matrix.hpp"
#include "htensor/tensor.hpp"

namespace ht_oracle {

using htensor::DenseTensor;
using htensor::Matrix;
using htensor::Shape;

/// 0-based row-major strides computed locally.
inline std::vector<std::size_t> strides_of(const Shape& shape) {
    std::vector<std::size_t> s(shape.size(), 1);
    for (std::size_t k = shape.size() - 1; k-- > 0;)
        s[k] = s[k + 1] * static_cast<std::size_t>(shape[k + 1]);
    return s;
}

/// Odometer over 0-based tuples.
inline bool bump(std::vector<int>& idx, const Shape& shape) {
    for (std::size_t k = shape.size(); k-- > 0;) {
        if (idx[k] + 1 < shape[k]) {
            ++idx[k];
            return true;
        }
        idx[k] = 0;
    }
    return false;
}

inline double entry(const DenseTensor& t, const std::vector<int>& idx0,
                    const std::vector<std::size_t>& strides) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < idx0.size(); ++k) off += static_cast<std::size_t>(idx0[k]) * strides[k];
    return t[off];
}

/// General pairwise contraction with naive full loops; survivors keep natural
/// order (A's remaining modes then B's).
inline DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                            const std::vector<std::pair<int, int>>& pairs1based) {
    const int p = a.order(), q = b.order();
    std::vector<int> a_paired(static_cast<std::size_t>(p), -1), b_paired(static_cast<std::size_t>(q), -1);
    for (std::size_t t = 0; t < pairs1based.size(); ++t) {
        a_paired[static_cast<std::size_t>(pairs1based[t].first - 1)] = static_cast<int>(t);
        b_paired[static_cast<std::size_t>(pairs1based[t].second - 1)] = static_cast<int>(t);
    }
    Shape out_shape;
    for (int k = 0; k < p; ++k)
        if (a_paired[static_cast<std::size_t>(k)] < 0) out_shape.push_back(a.shape()[static_cast<std::size_t>(k)]);
    for (int k = 0; k < q; ++k)
        if (b_paired[static_cast<std::size_t>(k)] < 0) out_shape.push_back(b.shape()[static_cast<std::size_t>(k)]);
    const bool scalar = out_shape.empty();
    if (scalar) out_shape.push_back(1);

    Shape sum_shape;
    for (const auto& pr : pairs1based) sum_shape.push_back(a.shape()[static_cast<std::size_t>(pr.first - 1)]);

    auto sa = strides_of(a.shape()), sb = strides_of(b.shape());
    DenseTensor out{Shape(out_shape)};
    std::vector<int> oi(out_shape.size(), 0);
    std::size_t flat = 0;
    do {
        double sum = 0.0;
        std::vector<int> ka(sum_shape.size(), 0);
        std::vector<int> ia(static_cast<std::size_t>(p)), ib(static_cast<std::size_t>(q));
        do {
            int t = 0;
            for (int k = 0; k < p; ++k)
                ia[static_cast<std::size_t>(k)] = a_paired[static_cast<std::size_t>(k)] >= 0
                                                      ? ka[static_cast<std::size_t>(a_paired[static_cast<std::size_t>(k)])]
                                                      : oi[static_cast<std::size_t>(t++)];
            for (int k = 0; k < q; ++k)
                ib[static_cast<std::size_t>(k)] = b_paired[static_cast<std::size_t>(k)] >= 0
                                                      ? ka[static_cast<std::size_t>(b_paired[static_cast<std::size_t>(k)])]
                                                      : oi[static_cast<std::size_t>(t++)];
            sum += entry(a, ia, sa) * entry(b, ib, sb);
        } while (!sum_shape.empty() && bump(ka, sum_shape));
        out[flat++] = sum;
    } while (!scalar && bump(oi, out_shape));
    return out;
}

/// Trailing-k contraction via the general oracle.
inline DenseTensor contract_last_first(const DenseTensor& a, const DenseTensor& b, int k) {
    std::vector<std::pair<int, int>> pairs;
    for (int t = 1; t <= k; ++t) pairs.emplace_back(a.order() - k + t, t);
    return contract(a, b, pairs);
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

/// t-product by the block-circulant route: bcirc(A) times the stacked frontal
/// slices of B, refolded.
inline DenseTensor tproduct_block_circulant(const DenseTensor& a, const DenseTensor& b) {
    const int n1 = a.shape()[0], n2 = a.shape()[1], n3 = a.shape()[2], n = b.shape()[1];
    Matrix bc(n1 * n3, n2 * n3);
    for (int bi = 0; bi < n3; ++bi)
        for (int bj = 0; bj < n3; ++bj) {
            int slice = ((bi - bj) % n3 + n3) % n3;  // A^{(slice+1)}
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j)
                    bc(bi * n1 + i, bj * n2 + j) =
                        a.at({i + 1, j + 1, slice + 1});
        }
    Matrix stacked(n2 * n3, n);
    for (int s = 0; s < n3; ++s)
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n; ++j) stacked(s * n2 + i, j) = b.at({i + 1, j + 1, s + 1});
    Matrix prod = ht_oracle::matmul(bc, stacked);
    DenseTensor out{Shape{n1, n, n3}};
    for (int s = 0; s < n3; ++s)
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n; ++j) out.at({i + 1, j + 1, s + 1}) = prod(s * n1 + i, j);
    return out;
}

inline double cofactor_det(const Matrix& m) {
    const int n = m.rows();
    if (n == 1) return m(0, 0);
    double sum = 0.0;
    for (int c = 0; c < n; ++c) {
        Matrix minor(n - 1, n - 1);
        for (int i = 1; i < n; ++i)
            for (int j = 0, t = 0; j < n; ++j) {
                if (j == c) continue;
                minor(i - 1, t++) = m(i, j);
            }
        sum += (c % 2 == 0 ? 1.0 : -1.0) * m(0, c) * cofactor_det(minor);
    }
    return sum;
}

inline int parity_of(const std::vector<int>& perm) {  // 0-based images
    int inv = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

inline double naive_permanent(const Matrix& m) {
    const int n = m.rows();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    do {
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= m(i, perm[static_cast<std::size_t>(i)]);
        sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

/// Full m!-term expansion of the (anti)symmetrized outer product, normalized
/// by `factor`, with local index chasing.
inline DenseTensor expand_separable(const std::vector<std::vector<double>>& vs, double factor,
                                    bool signed_terms) {
    const int m = static_cast<int>(vs.size());
    const int n = static_cast<int>(vs[0].size());
    DenseTensor out{Shape(static_cast<std::size_t>(m), n)};
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        double sign = signed_terms ? parity_of(perm) : 1.0;
        std::vector<int> idx(static_cast<std::size_t>(m), 0);
        std::size_t flat = 0;
        do {
            double prod = 1.0;
            for (int k = 0; k < m; ++k)
                prod *= vs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]
                          [static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
            out[flat++] += sign * prod;
        } while (bump(idx, out.shape()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor;
    return out;
}

/// <L(U), L(V)> and <S(U), S(V)> by the m!^2 double sum over permutation
/// pairs of products of vector inner products (sqrt-factorial scaling).
inline double gram_double_sum(const std::vector<std::vector<double>>& u,
                              const std::vector<std::vector<double>>& v, bool signed_terms) {
    const int m = static_cast<int>(u.size());
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    std::vector<int> theta(static_cast<std::size_t>(m));
    std::iota(theta.begin(), theta.end(), 0);
    double total = 0.0;
    do {
        std::vector<int> kappa(static_cast<std::size_t>(m));
        std::iota(kappa.begin(), kappa.end(), 0);
        do {
            double prod = 1.0;
            for (int k = 0; k < m; ++k)
                prod *= dot(u[static_cast<std::size_t>(theta[static_cast<std::size_t>(k)])],
                            v[static_cast<std::size_t>(kappa[static_cast<std::size_t>(k)])]);
            double sign = signed_terms ? parity_of(theta) * parity_of(kappa) : 1.0;
            total += sign * prod;
        } while (std::next_permutation(kappa.begin(), kappa.end()));
    } while (std::next_permutation(theta.begin(), theta.end()));
    double mf = 1.0;
    for (int i = 2; i <= m; ++i) mf *= i;
    return total / mf;
}

/// Dominant eigenpair of a symmetric matrix by plain power iteration.
inline std::pair<double, std::vector<double>> power_iteration(const Matrix& m, int iters,
                                                              std::vector<double> x0) {
    std::vector<double> x = std::move(x0);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> y(x.size(), 0.0);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) y[static_cast<std::size_t>(i)] += m(i, j) * x[static_cast<std::size_t>(j)];
        double nrm = 0.0;
        for (double v : y) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : y) v /= nrm;
        x = y;
        lambda = 0.0;
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) lambda += x[static_cast<std::size_t>(i)] * m(i, j) * x[static_cast<std::size_t>(j)];
    }
    return {lambda, x};
}

}  // namespace ht_oracle
