#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "htensor/errors.hpp"
#include "htensor/tensor.hpp"

namespace htensor {

/// Explicit reading of the set-based S-product bookkeeping: which mode of A
/// meets which mode of B, and where each surviving mode lands in the output.
struct ContractionSpec {
    /// (mode of A, mode of B) pairs to sum over, 1-based.
    std::vector<std::pair<int, int>> pairs;
    /// placement[i] = 1-based output slot of the i-th surviving mode, where
    /// survivors are listed as A's remaining modes in order, then B's.
    /// Empty means natural order.
    std::vector<int> placement;
};

inline DenseTensor outer_product(const DenseTensor& a, const DenseTensor& b) {
    Shape shape = a.shape();
    shape.insert(shape.end(), b.shape().begin(), b.shape().end());
    DenseTensor out(std::move(shape));
    std::size_t nb = b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        double av = a[i];
        for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = av * b[j];
    }
    return out;
}

/// General S-product: sum over the paired modes, survivors placed per spec.
/// No pairs = outer product; a full pairing collapses to a 1-entry scalar.
inline DenseTensor s_product(const DenseTensor& a, const DenseTensor& b, const ContractionSpec& spec) {
    const int p = a.order(), q = b.order();
    const int r = static_cast<int>(spec.pairs.size());
    if (r > std::min(p, q)) throw ShapeError("s_product: more pairs than modes");

    std::vector<bool> used_a(static_cast<std::size_t>(p), false), used_b(static_cast<std::size_t>(q), false);
    for (auto [ma, mb] : spec.pairs) {
        if (ma < 1 || ma > p || mb < 1 || mb > q)
            throw ShapeError("s_product: paired mode out of range");
        if (used_a[static_cast<std::size_t>(ma - 1)] || used_b[static_cast<std::size_t>(mb - 1)])
            throw ShapeError("s_product: mode paired twice");
        used_a[static_cast<std::size_t>(ma - 1)] = used_b[static_cast<std::size_t>(mb - 1)] = true;
        if (a.extent(ma) != b.extent(mb))
            throw ShapeError("s_product: paired extents differ (A mode " + std::to_string(ma) +
                             " vs B mode " + std::to_string(mb) + ")");
    }

    // Survivors in natural order: A's remaining modes, then B's.
    struct Survivor {
        bool from_a;
        int mode;  // 1-based in its tensor
    };
    std::vector<Survivor> survivors;
    for (int m = 1; m <= p; ++m)
        if (!used_a[static_cast<std::size_t>(m - 1)]) survivors.push_back({true, m});
    for (int m = 1; m <= q; ++m)
        if (!used_b[static_cast<std::size_t>(m - 1)]) survivors.push_back({false, m});
    const int out_order = static_cast<int>(survivors.size());

    std::vector<int> placement = spec.placement;
    if (placement.empty()) {
        placement.resize(static_cast<std::size_t>(out_order));
        for (int i = 0; i < out_order; ++i) placement[static_cast<std::size_t>(i)] = i + 1;
    }
    if (static_cast<int>(placement.size()) != out_order)
        throw ShapeError("s_product: placement size does not match surviving mode count");
    std::vector<bool> slot_taken(static_cast<std::size_t>(out_order), false);
    for (int s : placement) {
        if (s < 1 || s > out_order || slot_taken[static_cast<std::size_t>(s - 1)])
            throw ShapeError("s_product: placement is not a bijection onto output slots");
        slot_taken[static_cast<std::size_t>(s - 1)] = true;
    }

    // Scalar result of a full pairing is returned as a 1-extent order-1 tensor.
    if (out_order == 0) {
        Shape pair_shape(static_cast<std::size_t>(r));
        for (int t = 0; t < r; ++t) pair_shape[static_cast<std::size_t>(t)] = a.extent(spec.pairs[static_cast<std::size_t>(t)].first);
        double sum = 0.0;
        MultiIndex ia(static_cast<std::size_t>(p)), ib(static_cast<std::size_t>(q));
        MultiIndex kk(static_cast<std::size_t>(r), 1);
        do {
            for (int t = 0; t < r; ++t) {
                ia[static_cast<std::size_t>(spec.pairs[static_cast<std::size_t>(t)].first - 1)] = kk[static_cast<std::size_t>(t)];
                ib[static_cast<std::size_t>(spec.pairs[static_cast<std::size_t>(t)].second - 1)] = kk[static_cast<std::size_t>(t)];
            }
            sum += a.at(ia) * b.at(ib);
        } while (next_index(kk, pair_shape));
        return DenseTensor(Shape{1}, {sum});
    }

    Shape out_shape(static_cast<std::size_t>(out_order));
    for (int i = 0; i < out_order; ++i) {
        const Survivor& s = survivors[static_cast<std::size_t>(i)];
        out_shape[static_cast<std::size_t>(placement[static_cast<std::size_t>(i)] - 1)] =
            s.from_a ? a.extent(s.mode) : b.extent(s.mode);
    }

    Shape pair_shape(static_cast<std::size_t>(r));
    for (int t = 0; t < r; ++t)
        pair_shape[static_cast<std::size_t>(t)] = a.extent(spec.pairs[static_cast<std::size_t>(t)].first);

    DenseTensor out(out_shape);
    MultiIndex oi(static_cast<std::size_t>(out_order), 1);
    MultiIndex ia(static_cast<std::size_t>(p)), ib(static_cast<std::size_t>(q));
    do {
        for (int i = 0; i < out_order; ++i) {
            const Survivor& s = survivors[static_cast<std::size_t>(i)];
            int v = oi[static_cast<std::size_t>(placement[static_cast<std::size_t>(i)] - 1)];
            if (s.from_a)
                ia[static_cast<std::size_t>(s.mode - 1)] = v;
            else
                ib[static_cast<std::size_t>(s.mode - 1)] = v;
        }
        double sum = 0.0;
        if (r == 0) {
            sum = a.at(ia) * b.at(ib);
        } else {
            MultiIndex kk(static_cast<std::size_t>(r), 1);
            do {
                for (int t = 0; t < r; ++t) {
                    ia[static_cast<std::size_t>(spec.pairs[static_cast<std::size_t>(t)].first - 1)] = kk[static_cast<std::size_t>(t)];
                    ib[static_cast<std::size_t>(spec.pairs[static_cast<std::size_t>(t)].second - 1)] = kk[static_cast<std::size_t>(t)];
                }
                sum += a.at(ia) * b.at(ib);
            } while (next_index(kk, pair_shape));
        }
        out.at(oi) = sum;
    } while (next_index(oi, out_shape));
    return out;
}

/// Contractive product pairing the last k modes of A with the first k modes
/// of B, in order. The multiplication under which the identity tensor is the
/// unit and inversion is defined.
inline DenseTensor contract_k(const DenseTensor& a, const DenseTensor& b, int k) {
    if (k < 0 || k > std::min(a.order(), b.order()))
        throw ShapeError("contract_k: invalid contraction count");
    ContractionSpec spec;
    for (int t = 1; t <= k; ++t) spec.pairs.emplace_back(a.order() - k + t, t);
    return s_product(a, b, spec);
}

/// k-mode product with a matrix (shape preserved at mode k up to the matrix's
/// column count) or with a vector (mode k dropped). The matrix is summed over
/// its row index: (A x_k M)[.. i_k ..] = sum_j A[.. j ..] M(j, i_k).
inline DenseTensor mode_product(const DenseTensor& a, const DenseTensor& m, int k) {
    if (k < 1 || k > a.order()) throw ShapeError("mode_product: mode out of range");
    if (m.order() == 1) {
        if (m.extent(1) != a.extent(k))
            throw ShapeError("mode_product: vector length does not match mode extent");
        if (a.order() == 1) {  // full contraction of a vector: 1-entry scalar
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * m[i];
            return DenseTensor(Shape{1}, {s});
        }
        Shape out_shape;
        for (int mode = 1; mode <= a.order(); ++mode)
            if (mode != k) out_shape.push_back(a.extent(mode));
        DenseTensor out(out_shape);
        MultiIndex oi(out_shape.size(), 1);
        MultiIndex ai(static_cast<std::size_t>(a.order()));
        do {
            for (int mode = 1, t = 0; mode <= a.order(); ++mode)
                if (mode != k) ai[static_cast<std::size_t>(mode - 1)] = oi[static_cast<std::size_t>(t++)];
            double s = 0.0;
            for (int j = 1; j <= a.extent(k); ++j) {
                ai[static_cast<std::size_t>(k - 1)] = j;
                s += a.at(ai) * m[static_cast<std::size_t>(j - 1)];
            }
            out.at(oi) = s;
        } while (next_index(oi, out_shape));
        return out;
    }
    if (m.order() != 2) throw ShapeError("mode_product: operand must be a matrix or vector");
    if (m.extent(1) != a.extent(k))
        throw ShapeError("mode_product: matrix row count does not match mode extent");
    Shape out_shape = a.shape();
    out_shape[static_cast<std::size_t>(k - 1)] = m.extent(2);
    DenseTensor out(out_shape);
    MultiIndex oi(out_shape.size(), 1);
    do {
        MultiIndex ai = oi;
        double s = 0.0;
        for (int j = 1; j <= a.extent(k); ++j) {
            ai[static_cast<std::size_t>(k - 1)] = j;
            s += a.at(ai) * m.at({j, oi[static_cast<std::size_t>(k - 1)]});
        }
        out.at(oi) = s;
    } while (next_index(oi, out_shape));
    return out;
}

/// Rank-1 tensor v1 x v2 x ... x vm; extents may differ per mode.
inline DenseTensor outer_chain(const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty()) throw ShapeError("outer_chain: need at least one vector");
    for (const auto& v : vectors)
        if (v.empty()) throw ShapeError("outer_chain: vectors must be nonempty");
    DenseTensor out = from_vector(vectors[0]);
    for (std::size_t k = 1; k < vectors.size(); ++k)
        out = outer_product(out, from_vector(vectors[k]));
    return out;
}

/// Facewise t-product of third-order tensors:
/// C[i1,i2,i3] = sum_{j1,j2} A[i1,j1,j2] B[j1,i2,i3+1-j2].
/// circular=true wraps the third index mod n3 (the standard circulant
/// convolution); circular=false reads the index arithmetic literally and
/// drops out-of-range terms.
inline DenseTensor t_product(const DenseTensor& a, const DenseTensor& b, bool circular = true) {
    if (a.order() != 3 || b.order() != 3) throw ShapeError("t_product: operands must be third-order");
    if (a.extent(2) != b.extent(1)) throw ShapeError("t_product: A mode 2 must match B mode 1");
    if (a.extent(3) != b.extent(3)) throw ShapeError("t_product: A mode 3 must match B mode 3");
    const int n1 = a.extent(1), n2 = a.extent(2), n3 = a.extent(3), n = b.extent(2);
    DenseTensor out(Shape{n1, n, n3});
    for (int i1 = 1; i1 <= n1; ++i1)
        for (int i2 = 1; i2 <= n; ++i2)
            for (int i3 = 1; i3 <= n3; ++i3) {
                double s = 0.0;
                for (int j1 = 1; j1 <= n2; ++j1)
                    for (int j2 = 1; j2 <= n3; ++j2) {
                        int third = i3 + 1 - j2;
                        if (circular) {
                            third = ((third - 1) % n3 + n3) % n3 + 1;
                        } else if (third < 1 || third > n3) {
                            continue;
                        }
                        s += a.at({i1, j1, j2}) * b.at({j1, i2, third});
                    }
                out.at({i1, i2, i3}) = s;
            }
    return out;
}

/// Bowtie product: lifts an order-(p-1) tensor to order p by averaging the p
/// insertions of u. Literal form carries the 1/p prefactor; the normalization
/// mode's factor(p) is applied on top (Unit leaves the literal form).
/// signed_insertions weights insertion at slot j by (-1)^(p-j), which makes
/// the iterated product build alternating tensors.
inline DenseTensor bowtie(const DenseTensor& a, const std::vector<double>& u, bool signed_insertions,
                          NormalizationMode norm = NormalizationMode::Unit) {
    if (!a.hypercubic()) throw ShapeError("bowtie: tensor must be hypercubic");
    const int n = a.dim();
    if (static_cast<int>(u.size()) != n) throw ShapeError("bowtie: vector length must match dimension");
    const int p = a.order() + 1;
    const double prefactor = normalization_factor(norm, p) / static_cast<double>(p);

    Shape out_shape(static_cast<std::size_t>(p), n);
    DenseTensor out(out_shape);
    MultiIndex oi(static_cast<std::size_t>(p), 1);
    MultiIndex ai(static_cast<std::size_t>(p - 1));
    do {
        double s = 0.0;
        for (int j = 1; j <= p; ++j) {
            for (int mode = 1, t = 0; mode <= p; ++mode)
                if (mode != j) ai[static_cast<std::size_t>(t++)] = oi[static_cast<std::size_t>(mode - 1)];
            double term = u[static_cast<std::size_t>(oi[static_cast<std::size_t>(j - 1)] - 1)] * a.at(ai);
            if (signed_insertions && (p - j) % 2 != 0) term = -term;
            s += term;
        }
        out.at(oi) = prefactor * s;
    } while (next_index(oi, out_shape));
    return out;
}

}  // namespace htensor
