#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "htensor/errors.hpp"
#include "htensor/matrix.hpp"
#include "htensor/permutation.hpp"
#include "htensor/products.hpp"
#include "htensor/tensor.hpp"

namespace htensor {

/// Mode-permuted tensor: out[i1..im] = A[i_sigma(1) .. i_sigma(m)].
inline DenseTensor permute_modes(const DenseTensor& a, const Permutation& sigma) {
    if (!a.hypercubic()) throw ShapeError("permute_modes: tensor must be hypercubic");
    if (sigma.size() != a.order()) throw ShapeError("permute_modes: permutation order mismatch");
    DenseTensor out(a.shape());
    const int m = a.order();
    MultiIndex idx(static_cast<std::size_t>(m), 1);
    MultiIndex src(static_cast<std::size_t>(m));
    do {
        for (int k = 1; k <= m; ++k)
            src[static_cast<std::size_t>(k - 1)] = idx[static_cast<std::size_t>(sigma(k) - 1)];
        out.at(idx) = a.at(src);
    } while (next_index(idx, a.shape()));
    return out;
}

/// factor(m) * sum over all permutations of (sign^signed) permuted copies.
/// Unsigned is the symmetrizer S, signed the antisymmetrizer L.
inline DenseTensor symmetrize(const DenseTensor& a, NormalizationMode norm, bool signed_terms) {
    if (!a.hypercubic()) throw ShapeError("symmetrize: tensor must be hypercubic");
    const int m = a.order();
    DenseTensor acc(a.shape());
    for (const Permutation& sigma : all_permutations(m)) {
        DenseTensor term = permute_modes(a, sigma);
        double w = signed_terms ? sigma.parity() : 1.0;
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * term[i];
    }
    return scale(acc, normalization_factor(norm, m));
}

namespace detail {

inline void check_vector_family(const std::vector<std::vector<double>>& vectors, const char* op) {
    if (vectors.empty()) throw ShapeError(std::string(op) + ": need at least one vector");
    for (const auto& v : vectors)
        if (v.size() != vectors[0].size() || v.empty())
            throw ShapeError(std::string(op) + ": vectors must share one nonzero length");
}

}  // namespace detail

/// Separable symmetric tensor v1 v v2 v ... v vm.
inline DenseTensor vee(const std::vector<std::vector<double>>& vectors, NormalizationMode norm) {
    detail::check_vector_family(vectors, "vee");
    return symmetrize(outer_chain(vectors), norm, false);
}

/// Separable anti-symmetric tensor v1 ^ v2 ^ ... ^ vm.
inline DenseTensor wedge(const std::vector<std::vector<double>>& vectors, NormalizationMode norm) {
    detail::check_vector_family(vectors, "wedge");
    return symmetrize(outer_chain(vectors), norm, true);
}

/// Decision plus the largest deviation found.
struct SymmetryCheck {
    bool ok = false;
    double violation = 0.0;
};

/// Deviation of A from sigma(A) = sign * A.
inline double sigma_violation(const DenseTensor& a, const Permutation& sigma, double sign) {
    DenseTensor p = permute_modes(a, sigma);
    double v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) v = std::max(v, std::abs(p[i] - sign * a[i]));
    return v;
}

/// Invariance under a single permutation.
inline SymmetryCheck is_sigma_symmetric(const DenseTensor& a, const Permutation& sigma, double tol) {
    double v = sigma_violation(a, sigma, 1.0);
    return {v <= tol, v};
}

/// Invariance up to the parity sign under a single permutation.
inline SymmetryCheck is_sign_symmetric(const DenseTensor& a, const Permutation& sigma, double tol) {
    double v = sigma_violation(a, sigma, sigma.parity());
    return {v <= tol, v};
}

/// Full symmetry, checked on adjacent transpositions (they generate P_m).
inline SymmetryCheck is_symmetric(const DenseTensor& a, double tol) {
    if (!a.hypercubic()) throw ShapeError("is_symmetric: tensor must be hypercubic");
    double v = 0.0;
    for (int i = 1; i < a.order(); ++i)
        v = std::max(v, sigma_violation(a, Permutation::transposition(a.order(), i, i + 1), 1.0));
    return {v <= tol, v};
}

/// Anti-symmetry, checked on adjacent transpositions.
inline SymmetryCheck is_antisymmetric(const DenseTensor& a, double tol) {
    if (!a.hypercubic()) throw ShapeError("is_antisymmetric: tensor must be hypercubic");
    if (a.order() == 1) return {true, 0.0};
    double v = 0.0;
    for (int i = 1; i < a.order(); ++i)
        v = std::max(v, sigma_violation(a, Permutation::transposition(a.order(), i, i + 1), -1.0));
    return {v <= tol, v};
}

/// Permanent by Ryser's inclusion-exclusion. Side capped at 14.
inline double permanent(const Matrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("permanent: matrix must be square");
    const int side = m.rows();
    if (side > 14) throw DomainError("permanent: side capped at 14");
    if (side == 0) return 1.0;
    double total = 0.0;
    const std::uint32_t full = (1u << side) - 1u;
    for (std::uint32_t s = 1; s <= full; ++s) {
        double prod = 1.0;
        for (int i = 0; i < side; ++i) {
            double rowsum = 0.0;
            for (int j = 0; j < side; ++j)
                if (s & (1u << j)) rowsum += m(i, j);
            prod *= rowsum;
        }
        int bits = 0;
        for (std::uint32_t t = s; t; t >>= 1) bits += static_cast<int>(t & 1u);
        total += (bits % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return (side % 2 == 0 ? 1.0 : -1.0) * total;
}

/// Both sides of the wedge/vee Gram identities (sqrt-factorial scaling):
/// <L(U),L(V)> vs det(Gram) and <S(U),S(V)> vs perm(Gram), Gram_ij = <u_i,v_j>.
struct GramIdentities {
    double lhs_det = 0.0;
    double rhs_det = 0.0;
    double lhs_perm = 0.0;
    double rhs_perm = 0.0;
};

inline GramIdentities gram_inner_identities(const std::vector<std::vector<double>>& u,
                                            const std::vector<std::vector<double>>& v) {
    detail::check_vector_family(u, "gram_inner_identities");
    detail::check_vector_family(v, "gram_inner_identities");
    if (u.size() != v.size() || u[0].size() != v[0].size())
        throw ShapeError("gram_inner_identities: families must match in count and length");
    const int m = static_cast<int>(u.size());
    Matrix gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < u[0].size(); ++t)
                s += u[static_cast<std::size_t>(i)][t] * v[static_cast<std::size_t>(j)][t];
            gram(i, j) = s;
        }
    GramIdentities out;
    out.lhs_det = inner_product(wedge(u, NormalizationMode::SqrtFactorial),
                                wedge(v, NormalizationMode::SqrtFactorial));
    out.lhs_perm = inner_product(vee(u, NormalizationMode::SqrtFactorial),
                                 vee(v, NormalizationMode::SqrtFactorial));
    out.rhs_det = det(gram);
    out.rhs_perm = permanent(gram);
    return out;
}

/// Frobenius norm of the sqrt-factorial wedge, as sqrt(det(U^T U)); equals the
/// product of the singular values of U.
inline double wedge_norm(const std::vector<std::vector<double>>& u) {
    detail::check_vector_family(u, "wedge_norm");
    const int m = static_cast<int>(u.size());
    Matrix gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < u[0].size(); ++t)
                s += u[static_cast<std::size_t>(i)][t] * u[static_cast<std::size_t>(j)][t];
            gram(i, j) = s;
        }
    return std::sqrt(std::max(det(gram), 0.0));
}

/// Q_n: the order-n, dimension-n tensor with entry = parity on permutation
/// index tuples, 0 elsewhere. n! nonzero entries of value +-1.
inline DenseTensor standard_sas(int n) {
    if (n < 2) throw DomainError("standard_sas: dimension must be at least 2");
    if (n > 6) throw DomainError("standard_sas: dimension capped at 6");
    DenseTensor q(Shape(static_cast<std::size_t>(n), n));
    for (const Permutation& sigma : all_permutations(n))
        q.at(sigma.image()) = sigma.parity();
    return q;
}

/// Claimed separable form: scale x (wedge|vee)(vectors, normalization).
struct SeparableWitness {
    std::vector<std::vector<double>> vectors;
    double scale = 1.0;
    bool antisymmetric = true;
    NormalizationMode normalization = NormalizationMode::Unit;
};

inline DenseTensor reconstruct(const SeparableWitness& w) {
    DenseTensor t = w.antisymmetric ? wedge(w.vectors, w.normalization) : vee(w.vectors, w.normalization);
    return scale(t, w.scale);
}

struct SasDecomposition {
    bool separable = false;
    SeparableWitness witness;
    double residual = 0.0;  ///< max |A - reconstruction|
};

/// Constructive separability test for an antisymmetric tensor: contract out
/// candidate vectors at the largest-magnitude entry, rescale to match it, and
/// accept when the wedge reconstruction agrees within tol x max|A|.
inline SasDecomposition sas_decompose(const DenseTensor& a, double tol) {
    if (!a.hypercubic()) throw ShapeError("sas_decompose: tensor must be hypercubic");
    const int m = a.order();
    const int n = a.dim();
    if (m > n) throw DomainError("sas_decompose: order must not exceed dimension");
    SymmetryCheck anti = is_antisymmetric(a, tol);
    if (!anti.ok)
        throw DomainError("InputNotAntisymmetric: violation " + std::to_string(anti.violation) +
                          " exceeds tolerance " + std::to_string(tol));

    SasDecomposition out;
    out.witness.antisymmetric = true;
    out.witness.normalization = NormalizationMode::Unit;

    const double peak = max_abs(a);
    if (peak == 0.0) {
        out.witness.vectors.assign(static_cast<std::size_t>(m),
                                   std::vector<double>(static_cast<std::size_t>(n), 0.0));
        out.witness.scale = 1.0;
        out.separable = true;
        out.residual = 0.0;
        return out;
    }

    // Pivot: first multi-index of maximal magnitude (row-major order is
    // lexicographic, so ties break lexicographically).
    MultiIndex pivot(static_cast<std::size_t>(m), 1);
    {
        MultiIndex idx(static_cast<std::size_t>(m), 1);
        double best = -1.0;
        do {
            double v = std::abs(a.at(idx));
            if (v > best) {
                best = v;
                pivot = idx;
            }
        } while (next_index(idx, a.shape()));
    }

    std::vector<std::vector<double>> vectors(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) {
        MultiIndex idx = pivot;
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int j = 1; j <= n; ++j) {
            idx[static_cast<std::size_t>(k - 1)] = j;
            v[static_cast<std::size_t>(j - 1)] = a.at(idx);
        }
        vectors[static_cast<std::size_t>(k - 1)] = std::move(v);
    }
    out.witness.vectors = std::move(vectors);

    DenseTensor w = wedge(out.witness.vectors, NormalizationMode::Unit);
    double w_pivot = w.at(pivot);
    if (w_pivot != 0.0) {
        out.witness.scale = a.at(pivot) / w_pivot;
    } else {
        // Cannot match the pivot entry; fall back to the least-squares scale.
        double ww = inner_product(w, w);
        out.witness.scale = ww > 0.0 ? inner_product(w, a) / ww : 0.0;
    }
    out.residual = max_abs_diff(a, scale(w, out.witness.scale));
    out.separable = out.residual <= tol * peak;
    return out;
}

/// Separability of an antisymmetric matrix: true exactly when the numeric
/// rank is 0 or 2.
struct MatrixSeparability {
    bool separable = false;
    int rank = 0;
};

inline MatrixSeparability antisym_matrix_separability(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw ShapeError("antisym_matrix_separability: matrix must be square");
    double violation = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) violation = std::max(violation, std::abs(m(i, j) + m(j, i)));
    if (violation > tol)
        throw DomainError("InputNotAntisymmetric: violation " + std::to_string(violation) +
                          " exceeds tolerance " + std::to_string(tol));
    int rank = numeric_rank(m, tol);
    return {rank == 0 || rank == 2, rank};
}

/// Dimension of the sigma-(sign-)symmetric subspace of order-m dimension-n
/// tensors: orbits of the cyclic group generated by sigma acting on index
/// tuples; in the signed case an orbit counts only when parity(sigma)^length
/// is +1.
inline long long fixed_subspace_dim(int m, int n, const Permutation& sigma, bool signed_action) {
    if (sigma.size() != m) throw ShapeError("fixed_subspace_dim: permutation order mismatch");
    if (m < 1 || n < 1) throw ShapeError("fixed_subspace_dim: bad order or dimension");
    double cells = std::pow(static_cast<double>(n), m);
    if (cells > 1e6) throw DomainError("fixed_subspace_dim: n^m exceeds the 10^6 guard");
    const std::size_t total = detail::shape_size(Shape(static_cast<std::size_t>(m), n));

    Shape shape(static_cast<std::size_t>(m), n);
    std::vector<bool> visited(total, false);
    long long dim = 0;
    for (std::size_t start = 0; start < total; ++start) {
        if (visited[start]) continue;
        std::size_t cur = start;
        int length = 0;
        MultiIndex idx = delinearize(start, shape), nxt(static_cast<std::size_t>(m));
        do {
            visited[cur] = true;
            ++length;
            for (int k = 1; k <= m; ++k)
                nxt[static_cast<std::size_t>(k - 1)] = idx[static_cast<std::size_t>(sigma(k) - 1)];
            idx = nxt;
            cur = linearize(idx, shape);
        } while (cur != start);
        if (!signed_action || sigma.parity() == 1 || length % 2 == 0) ++dim;
    }
    return dim;
}

}  // namespace htensor
