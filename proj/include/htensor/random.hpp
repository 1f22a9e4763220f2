#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace htensor {

/// Derive an independent stream seed from a base seed and a stream index
/// (splitmix64 finalizer), so parallel work items are reproducible
/// regardless of scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic double streams on top of mt19937_64. The mappings avoid
/// std::*_distribution, whose sequences are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Uniform point on the unit sphere in R^n.
    std::vector<double> unit_vector(int n) {
        std::vector<double> v(static_cast<std::size_t>(n));
        double norm = 0.0;
        do {
            norm = 0.0;
            for (double& x : v) {
                x = gaussian();
                norm += x * x;
            }
            norm = std::sqrt(norm);
        } while (norm < 1e-12);
        for (double& x : v) x /= norm;
        return v;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace htensor
