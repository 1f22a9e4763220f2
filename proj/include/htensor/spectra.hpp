#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "htensor/errors.hpp"
#include "htensor/inversion.hpp"
#include "htensor/matrix.hpp"
#include "htensor/parallel.hpp"
#include "htensor/permutation.hpp"
#include "htensor/products.hpp"
#include "htensor/random.hpp"
#include "htensor/symmetry.hpp"
#include "htensor/tensor.hpp"

namespace htensor {

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

/// Componentwise power u^[k].
inline std::vector<double> componentwise_power(const std::vector<double>& u, int k) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::pow(u[i], k);
    return out;
}

/// Tensor-vector product A x^(m-1): modes 2..m contracted with copies of x.
inline std::vector<double> tvp(const DenseTensor& a, const std::vector<double>& x) {
    if (!a.hypercubic()) throw ShapeError("tvp: tensor must be hypercubic");
    if (a.order() < 2) throw ShapeError("tvp: tensor order must be at least 2");
    const int n = a.dim();
    if (static_cast<int>(x.size()) != n) throw ShapeError("tvp: vector length mismatch");
    // Contract the last (fastest) mode repeatedly; each pass shrinks by n.
    std::vector<double> buf = a.data();
    std::size_t len = buf.size();
    for (int step = 0; step < a.order() - 1; ++step) {
        std::size_t outer = len / static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < outer; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += buf[i * n + static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            buf[i] = s;
        }
        len = outer;
    }
    buf.resize(len);
    return buf;
}

/// Associated homogeneous polynomial f_A(x) = sum A[i1..im] x_{i1}..x_{im}.
inline double poly_eval(const DenseTensor& a, const std::vector<double>& x) {
    if (!a.hypercubic()) throw ShapeError("poly_eval: tensor must be hypercubic");
    if (static_cast<int>(x.size()) != a.dim()) throw ShapeError("poly_eval: vector length mismatch");
    if (a.order() == 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
        return s;
    }
    return detail::dot(x, tvp(a, x));
}

/// ||A u^(m-1) - lambda u^[m-1]||, the H-eigenpair defect.
inline double eigen_residual(const DenseTensor& a, double lambda, const std::vector<double>& u) {
    std::vector<double> au = tvp(a, u);
    std::vector<double> up = componentwise_power(u, a.order() - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < au.size(); ++i) {
        double d = au[i] - lambda * up[i];
        s += d * d;
    }
    return std::sqrt(s);
}

struct EigenPair {
    double lambda = 0.0;
    std::vector<double> u;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
};

/// Shifted symmetric higher-order power iteration for H-eigenpairs.
/// Deterministic for a given seed; symmetrizes non-symmetric input first.
/// lambda is the least-squares value for the current iterate, so the reported
/// residual is the best available for that vector.
inline EigenPair sshopm(const DenseTensor& a, double shift, std::uint64_t seed, int max_iter = 500,
                        double tol = 1e-10) {
    if (!a.hypercubic()) throw ShapeError("sshopm: tensor must be hypercubic");
    if (a.order() < 2) throw ShapeError("sshopm: tensor order must be at least 2");
    const DenseTensor& s =
        is_symmetric(a, 1e-12).ok ? a : symmetrize(a, NormalizationMode::Projector, false);
    const int m = s.order();
    const int n = s.dim();

    Rng rng(seed);
    std::vector<double> x = rng.unit_vector(n);

    EigenPair best;
    int restarts = 0;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> ax = tvp(s, x);
        std::vector<double> xp = componentwise_power(x, m - 1);
        double den = detail::dot(xp, xp);
        double lambda = den > 0.0 ? detail::dot(ax, xp) / den : 0.0;
        double resid = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) {
            double d = ax[i] - lambda * xp[i];
            resid += d * d;
        }
        resid = std::sqrt(resid);
        if (resid < best.residual) best = {lambda, x, resid, resid <= tol, it + 1};
        if (resid <= tol) break;

        std::vector<double> z(static_cast<std::size_t>(n));
        double zn = 0.0;
        for (int i = 0; i < n; ++i) {
            double y = ax[static_cast<std::size_t>(i)] + shift * xp[static_cast<std::size_t>(i)];
            double r = std::pow(std::abs(y), 1.0 / (m - 1));
            z[static_cast<std::size_t>(i)] = y < 0.0 ? -r : r;
            zn += z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
        }
        zn = std::sqrt(zn);
        if (zn < 1e-150) {
            if (++restarts > 8) break;  // bounded internal restarts on collapse
            x = rng.unit_vector(n);
            continue;
        }
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] / zn;
    }
    return best;
}

enum class ProbeVerdict {
    PositiveDefiniteEvidence,
    NegativeDefiniteEvidence,
    Indefinite,
    Inconclusive,
};

inline const char* probe_verdict_name(ProbeVerdict v) {
    switch (v) {
        case ProbeVerdict::PositiveDefiniteEvidence: return "positive-definite-evidence";
        case ProbeVerdict::NegativeDefiniteEvidence: return "negative-definite-evidence";
        case ProbeVerdict::Indefinite: return "indefinite";
        case ProbeVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct ProbeWitness {
    std::vector<double> x;
    double value = 0.0;
};

/// Sampling evidence only: a definite verdict is never claimed, merely
/// supported; indefiniteness comes with a concrete sign-opposite witness pair.
struct ProbeReport {
    ProbeVerdict verdict = ProbeVerdict::Inconclusive;
    ProbeWitness min_witness;
    ProbeWitness max_witness;
    int samples = 0;
};

inline ProbeReport definiteness_probe(const DenseTensor& a, int samples, std::uint64_t seed) {
    if (!a.hypercubic()) throw ShapeError("definiteness_probe: tensor must be hypercubic");
    if (a.order() % 2 != 0) throw ShapeError("definiteness_probe: tensor order must be even");
    if (samples < 1) throw DomainError("definiteness_probe: need at least one sample");
    const int n = a.dim();

    ProbeReport report;
    report.samples = samples;
    report.min_witness.value = std::numeric_limits<double>::infinity();
    report.max_witness.value = -std::numeric_limits<double>::infinity();

    auto consider = [&](const std::vector<double>& x) {
        double f = poly_eval(a, x);
        if (f < report.min_witness.value) report.min_witness = {x, f};
        if (f > report.max_witness.value) report.max_witness = {x, f};
    };

    Rng rng(mix_seed(seed, 0));
    for (int i = 0; i < samples; ++i) consider(rng.unit_vector(n));

    // Extreme-eigenvalue probes sharpen the sampled extremes.
    double sigma = 1.0 + frobenius_norm(a);
    for (int k = 0; k < 2; ++k) {
        EigenPair p = sshopm(a, k == 0 ? sigma : -sigma, mix_seed(seed, 1 + static_cast<std::uint64_t>(k)),
                             300, 1e-12);
        double un = detail::norm2(p.u);
        if (un > 0.0) {
            std::vector<double> u = p.u;
            for (double& v : u) v /= un;
            consider(u);
        }
    }

    if (report.max_witness.value > 0.0 && report.min_witness.value < 0.0)
        report.verdict = ProbeVerdict::Indefinite;
    else if (report.min_witness.value > 0.0)
        report.verdict = ProbeVerdict::PositiveDefiniteEvidence;
    else if (report.max_witness.value < 0.0)
        report.verdict = ProbeVerdict::NegativeDefiniteEvidence;
    else
        report.verdict = ProbeVerdict::Inconclusive;
    return report;
}

/// Commutation tensor of size p x q x q x p: 1 exactly when i1=i4 and i2=i3.
inline DenseTensor commutation_tensor(int p, int q) {
    if (p < 1 || q < 1) throw ShapeError("commutation_tensor: dimensions must be positive");
    DenseTensor out(Shape{p, q, q, p});
    for (int i1 = 1; i1 <= p; ++i1)
        for (int i2 = 1; i2 <= q; ++i2) out.at({i1, i2, i2, i1}) = 1.0;
    return out;
}

/// Permutation tensor of order 2m: K[i1..im, j1..jm] = 1 iff i_k = j_sigma(k).
/// The last m modes contract against an outer product to reorder its factors.
inline DenseTensor permutation_tensor(const Permutation& sigma, int n) {
    const int m = sigma.size();
    if (n < 1) throw ShapeError("permutation_tensor: dimension must be positive");
    if (std::pow(static_cast<double>(n), 2 * m) > 1e6)
        throw DomainError("permutation_tensor: n^(2m) exceeds the 10^6 guard");
    DenseTensor out(Shape(static_cast<std::size_t>(2 * m), n));
    // Walk the i-block; the matching j-block is determined: j_sigma(k) = i_k.
    Shape iblock(static_cast<std::size_t>(m), n);
    MultiIndex idx(static_cast<std::size_t>(m), 1);
    MultiIndex full(static_cast<std::size_t>(2 * m));
    do {
        for (int k = 1; k <= m; ++k) {
            full[static_cast<std::size_t>(k - 1)] = idx[static_cast<std::size_t>(k - 1)];
            full[static_cast<std::size_t>(m + sigma(k) - 1)] = idx[static_cast<std::size_t>(k - 1)];
        }
        out.at(full) = 1.0;
    } while (next_index(idx, iblock));
    return out;
}

/// Factor reordering by direct rearrangement: u_sigma(1) x ... x u_sigma(m).
/// Computed as a mode permutation of the materialized outer product, so the
/// entry products associate exactly as in the contraction path.
inline DenseTensor reorder_outer_product(const Permutation& sigma,
                                         const std::vector<std::vector<double>>& vectors) {
    if (static_cast<int>(vectors.size()) != sigma.size())
        throw ShapeError("reorder_outer_product: vector count mismatch");
    detail::check_vector_family(vectors, "reorder_outer_product");
    return permute_modes(outer_chain(vectors), sigma.inverse());
}

/// Factor reordering through the materialized permutation tensor (contractive
/// product over its last m modes). Agrees with reorder_outer_product.
inline DenseTensor apply_permutation_tensor(const Permutation& sigma,
                                            const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty() || static_cast<int>(vectors.size()) != sigma.size())
        throw ShapeError("apply_permutation_tensor: vector count mismatch");
    const int n = static_cast<int>(vectors[0].size());
    DenseTensor k = permutation_tensor(sigma, n);
    return contract_k(k, outer_chain(vectors), sigma.size());
}

/// Rank of the m! reordered outer products, as rows of an m! x n^m matrix.
inline int permuted_family_rank(const std::vector<std::vector<double>>& vectors, double tol) {
    detail::check_vector_family(vectors, "permuted_family_rank");
    const int m = static_cast<int>(vectors.size());
    if (m > 5) throw DomainError("permuted_family_rank: vector count capped at 5 (m! rows)");
    std::vector<Permutation> perms = all_permutations(m);
    DenseTensor first = reorder_outer_product(perms[0], vectors);
    Matrix rows(static_cast<int>(perms.size()), static_cast<int>(first.size()));
    for (std::size_t p = 0; p < perms.size(); ++p) {
        DenseTensor t = p == 0 ? first : reorder_outer_product(perms[p], vectors);
        for (std::size_t c = 0; c < t.size(); ++c) rows(static_cast<int>(p), static_cast<int>(c)) = t[c];
    }
    return numeric_rank(rows, tol);
}

// ---------------------------------------------------------------------------
// CP decomposition by alternating least squares.

struct CpTerm {
    double weight = 0.0;
    std::vector<std::vector<double>> factors;  ///< one unit vector per mode
};

struct CPModel {
    std::vector<CpTerm> terms;
    Shape target_shape;
};

inline DenseTensor reconstruct(const CPModel& model) {
    DenseTensor out{Shape(model.target_shape)};
    for (const CpTerm& term : model.terms) {
        DenseTensor t = from_vector(term.factors.at(0));
        for (std::size_t k = 1; k < term.factors.size(); ++k)
            t = outer_product(t, from_vector(term.factors[k]));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += term.weight * t[i];
    }
    return out;
}

/// Mode-k matricization: rows indexed by mode k, columns row-major over the
/// remaining modes in mode order.
inline Matrix unfold_mode(const DenseTensor& a, int k) {
    if (k < 1 || k > a.order()) throw ShapeError("unfold_mode: mode out of range");
    Shape rest;
    for (int mode = 1; mode <= a.order(); ++mode)
        if (mode != k) rest.push_back(a.extent(mode));
    std::size_t cols = rest.empty() ? 1 : detail::shape_size(rest);
    Matrix out(a.extent(k), static_cast<int>(cols));
    MultiIndex idx(static_cast<std::size_t>(a.order()), 1);
    do {
        std::size_t col = 0;
        for (int mode = 1; mode <= a.order(); ++mode)
            if (mode != k)
                col = col * static_cast<std::size_t>(a.extent(mode)) +
                      static_cast<std::size_t>(idx[static_cast<std::size_t>(mode - 1)] - 1);
        out(idx[static_cast<std::size_t>(k - 1)] - 1, static_cast<int>(col)) = a.at(idx);
    } while (next_index(idx, a.shape()));
    return out;
}

/// Largest mode-matricization rank: a certified lower bound on the CP rank.
inline int matricization_rank_bound(const DenseTensor& a, double tol = 1e-10) {
    int bound = 0;
    for (int k = 1; k <= a.order(); ++k) bound = std::max(bound, numeric_rank(unfold_mode(a, k), tol));
    return bound;
}

struct CpResult {
    CPModel model;
    double fit = std::numeric_limits<double>::infinity();  ///< ||A - rec|| / ||A||
    std::vector<double> fit_history;                       ///< per completed sweep, best restart
    int best_restart = 0;
    bool reached_tol = false;
};

namespace detail {

struct AlsRun {
    std::vector<Matrix> factors;  ///< per mode: extent x R, unit columns
    std::vector<double> weights;
    double fit = std::numeric_limits<double>::infinity();
    std::vector<double> history;
};

inline CPModel run_to_model(const DenseTensor& a, const AlsRun& run) {
    CPModel model;
    model.target_shape = a.shape();
    const int rank = static_cast<int>(run.weights.size());
    for (int r = 0; r < rank; ++r) {
        CpTerm term;
        term.weight = run.weights[static_cast<std::size_t>(r)];
        for (const Matrix& f : run.factors) {
            std::vector<double> col(static_cast<std::size_t>(f.rows()));
            for (int row = 0; row < f.rows(); ++row) col[static_cast<std::size_t>(row)] = f(row, r);
            term.factors.push_back(std::move(col));
        }
        model.terms.push_back(std::move(term));
    }
    return model;
}

inline AlsRun als_single_run(const DenseTensor& a, const std::vector<Matrix>& unfoldings, int rank,
                             std::uint64_t run_seed, int iters, double stop_fit) {
    const int m = a.order();
    const double norm_a = frobenius_norm(a);
    Rng rng(run_seed);

    AlsRun run;
    run.factors.reserve(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) {
        Matrix f(a.extent(k), rank);
        for (int i = 0; i < f.rows(); ++i)
            for (int r = 0; r < rank; ++r) f(i, r) = rng.uniform_pm1();
        for (int r = 0; r < rank; ++r) {  // unit columns
            double s = 0.0;
            for (int i = 0; i < f.rows(); ++i) s += f(i, r) * f(i, r);
            s = std::sqrt(s);
            if (s > 0.0)
                for (int i = 0; i < f.rows(); ++i) f(i, r) /= s;
        }
        run.factors.push_back(std::move(f));
    }
    run.weights.assign(static_cast<std::size_t>(rank), 1.0);

    int stagnant = 0;
    for (int sweep = 0; sweep < iters; ++sweep) {
        for (int k = 0; k < m; ++k) {
            const Matrix& x = unfoldings[static_cast<std::size_t>(k)];
            const std::size_t cols = static_cast<std::size_t>(x.cols());

            // Z: row-major over the other modes; Z(c, r) = prod F_l(i_l, r).
            Matrix z(static_cast<int>(cols), rank);
            Shape rest;
            for (int mode = 0; mode < m; ++mode)
                if (mode != k) rest.push_back(a.extent(mode + 1));
            MultiIndex ri(rest.size(), 1);
            std::size_t c = 0;
            do {
                for (int r = 0; r < rank; ++r) {
                    double prod = 1.0;
                    int t = 0;
                    for (int mode = 0; mode < m; ++mode) {
                        if (mode == k) continue;
                        prod *= run.factors[static_cast<std::size_t>(mode)](ri[static_cast<std::size_t>(t)] - 1, r);
                        ++t;
                    }
                    z(static_cast<int>(c), r) = prod;
                }
                ++c;
            } while (next_index(ri, rest));

            // Normal equations: G H = X Z with H the Hadamard of Grams.
            Matrix h(rank, rank);
            for (int i = 0; i < rank; ++i)
                for (int j = 0; j < rank; ++j) h(i, j) = 1.0;
            for (int mode = 0; mode < m; ++mode) {
                if (mode == k) continue;
                const Matrix& f = run.factors[static_cast<std::size_t>(mode)];
                for (int i = 0; i < rank; ++i)
                    for (int j = 0; j < rank; ++j) {
                        double s = 0.0;
                        for (int row = 0; row < f.rows(); ++row) s += f(row, i) * f(row, j);
                        h(i, j) *= s;
                    }
            }
            Matrix mtt = matmul(x, z);  // extent_k x R

            LuDecomposition lu = lu_decompose(h);
            if (lu.singular(1e-14)) {  // ridge fallback for dead or duplicate columns
                double ridge = 1e-12 * std::max(1.0, h.max_abs());
                for (int i = 0; i < rank; ++i) h(i, i) += ridge;
                lu = lu_decompose(h);
            }
            Matrix g(mtt.rows(), rank);
            std::vector<double> rhs(static_cast<std::size_t>(rank));
            for (int row = 0; row < mtt.rows(); ++row) {  // solve H g_row = mtt_row (H symmetric)
                for (int r = 0; r < rank; ++r) rhs[static_cast<std::size_t>(r)] = mtt(row, r);
                std::vector<double> sol = lu_solve(lu, rhs, 0.0);
                for (int r = 0; r < rank; ++r) g(row, r) = sol[static_cast<std::size_t>(r)];
            }

            for (int r = 0; r < rank; ++r) {
                double s = 0.0;
                for (int row = 0; row < g.rows(); ++row) s += g(row, r) * g(row, r);
                s = std::sqrt(s);
                run.weights[static_cast<std::size_t>(r)] = s;
                if (s > 0.0)
                    for (int row = 0; row < g.rows(); ++row) g(row, r) /= s;
            }
            run.factors[static_cast<std::size_t>(k)] = std::move(g);
        }

        // Fit after the full sweep.
        double err = frobenius_norm(add(a, scale(reconstruct(run_to_model(a, run)), -1.0)));
        double fit = norm_a > 0.0 ? err / norm_a : err;
        run.history.push_back(fit);
        double prev = run.fit;
        run.fit = fit;
        if (fit <= stop_fit) break;
        if (sweep > 0 && std::abs(prev - fit) < 1e-15) {
            if (++stagnant >= 20) break;
        } else {
            stagnant = 0;
        }
    }
    return run;
}

}  // namespace detail

/// CP approximation with `rank` terms: best of `restarts` seeded ALS runs.
/// Restart r uses the stream mix_seed(seed, r); runs may execute in parallel
/// (HTENSOR_THREADS) and the aggregation is deterministic (best fit, ties to
/// the lowest restart index).
inline CpResult cp_als(const DenseTensor& a, int rank, int restarts, int iters, std::uint64_t seed,
                       double fit_tol = 1e-8) {
    if (rank < 1) throw DomainError("cp_als: rank must be positive");
    if (restarts < 1) throw DomainError("cp_als: need at least one restart");
    if (iters < 1) throw DomainError("cp_als: need at least one sweep");

    std::vector<Matrix> unfoldings;
    unfoldings.reserve(static_cast<std::size_t>(a.order()));
    for (int k = 1; k <= a.order(); ++k) unfoldings.push_back(unfold_mode(a, k));

    std::vector<detail::AlsRun> runs(static_cast<std::size_t>(restarts));
    parallel_for_index(restarts, [&](int r) {
        runs[static_cast<std::size_t>(r)] = detail::als_single_run(
            a, unfoldings, rank, mix_seed(seed, static_cast<std::uint64_t>(r)), iters, fit_tol * 1e-2);
    });

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (runs[static_cast<std::size_t>(r)].fit < runs[static_cast<std::size_t>(best)].fit) best = r;

    CpResult result;
    result.model = detail::run_to_model(a, runs[static_cast<std::size_t>(best)]);
    result.fit = runs[static_cast<std::size_t>(best)].fit;
    result.fit_history = runs[static_cast<std::size_t>(best)].history;
    result.best_restart = best;
    result.reached_tol = result.fit <= fit_tol;
    return result;
}

struct RankEvidenceRow {
    int rank = 0;
    double best_fit = 0.0;
    int best_restart = 0;
    bool reached_tol = false;
};

struct RankEstimate {
    int lower_bound = 0;       ///< max matricization rank, certified
    int best_rank = 0;         ///< smallest R with fit <= fit_tol; 0 when none
    std::vector<RankEvidenceRow> rows;
    std::uint64_t seed = 0;
    int restarts = 0;
    int iters = 0;
    double fit_tol = 0.0;
};

/// ALS evidence table for R = 1..max_rank plus the matricization lower bound.
/// Heuristic: the fits witness achievable rank, they do not certify it.
inline RankEstimate rank_estimate(const DenseTensor& a, int max_rank, int restarts, int iters,
                                  std::uint64_t seed, double fit_tol = 1e-8) {
    if (max_rank < 1) throw DomainError("rank_estimate: max rank must be positive");
    RankEstimate est;
    est.lower_bound = matricization_rank_bound(a);
    est.seed = seed;
    est.restarts = restarts;
    est.iters = iters;
    est.fit_tol = fit_tol;
    for (int r = 1; r <= max_rank; ++r) {
        CpResult res = cp_als(a, r, restarts, iters, mix_seed(seed, 1000003ull * static_cast<std::uint64_t>(r)),
                              fit_tol);
        est.rows.push_back({r, res.fit, res.best_restart, res.reached_tol});
        if (est.best_rank == 0 && res.reached_tol) est.best_rank = r;
    }
    return est;
}

}  // namespace htensor
