#pragma once

#include <cstdint>
#include <vector>

#include "htensor/htensor.hpp"

namespace ht_test {

using namespace htensor;

inline DenseTensor random_tensor(const Shape& shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    DenseTensor t{Shape(shape)};
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = lo + (hi - lo) * rng.uniform01();
    return t;
}

inline std::vector<double> random_vector(int n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = lo + (hi - lo) * rng.uniform01();
    return v;
}

inline std::vector<std::vector<double>> random_vectors(int count, int n, Rng& rng) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(random_vector(n, rng));
    return out;
}

inline std::vector<double> unit_basis(int n, int k) {  // e_k, 1-based
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    v[static_cast<std::size_t>(k - 1)] = 1.0;
    return v;
}

/// Random even-order hypercubic tensor whose NS matrix is diagonally
/// dominated, i.e. comfortably invertible.
inline DenseTensor random_well_conditioned(int k, int n, Rng& rng, double diag = 10.0) {
    const int side = static_cast<int>(pow_int(n, k));
    Matrix m(side, side);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) m(i, j) = rng.uniform_pm1() + (i == j ? diag : 0.0);
    return normal_fold(m, k, n);
}

}  // namespace ht_test
