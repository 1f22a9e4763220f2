#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "htensor/errors.hpp"

namespace htensor {

/// Parity (+1 even, -1 odd) of a 1-based permutation image by inversion count.
inline int permutation_parity(const std::vector<int>& image) {
    int inversions = 0;
    for (std::size_t i = 0; i < image.size(); ++i)
        for (std::size_t j = i + 1; j < image.size(); ++j)
            if (image[i] > image[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

/// Bijection on [m], 1-based, with cached parity.
class Permutation {
public:
    static Permutation identity(int m) {
        std::vector<int> img(static_cast<std::size_t>(m));
        std::iota(img.begin(), img.end(), 1);
        return Permutation(std::move(img), 1);
    }

    static Permutation from_image(std::vector<int> image) {
        const int m = static_cast<int>(image.size());
        if (m < 1) throw DomainError("permutation must act on at least one element");
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        for (int v : image) {
            if (v < 1 || v > m || seen[static_cast<std::size_t>(v - 1)])
                throw DomainError("permutation image is not a bijection on [m]");
            seen[static_cast<std::size_t>(v - 1)] = true;
        }
        int parity = permutation_parity(image);
        return Permutation(std::move(image), parity);
    }

    /// The transposition (a b) inside [m].
    static Permutation transposition(int m, int a, int b) {
        auto p = identity(m);
        if (a < 1 || a > m || b < 1 || b > m || a == b)
            throw DomainError("invalid transposition");
        std::swap(p.image_[static_cast<std::size_t>(a - 1)], p.image_[static_cast<std::size_t>(b - 1)]);
        p.parity_ = -1;
        return p;
    }

    int size() const { return static_cast<int>(image_.size()); }
    int operator()(int k) const { return image_[static_cast<std::size_t>(k - 1)]; }
    int parity() const { return parity_; }
    const std::vector<int>& image() const { return image_; }

    bool is_identity() const {
        for (int k = 1; k <= size(); ++k)
            if ((*this)(k) != k) return false;
        return true;
    }

    Permutation inverse() const {
        std::vector<int> inv(image_.size());
        for (int k = 1; k <= size(); ++k) inv[static_cast<std::size_t>((*this)(k)-1)] = k;
        return Permutation(std::move(inv), parity_);
    }

private:
    Permutation(std::vector<int> image, int parity) : image_(std::move(image)), parity_(parity) {}
    std::vector<int> image_;
    int parity_;
};

/// sigma after phi: (compose(sigma, phi))(k) = sigma(phi(k)).
inline Permutation compose(const Permutation& sigma, const Permutation& phi) {
    if (sigma.size() != phi.size()) throw DomainError("compose: permutation sizes differ");
    std::vector<int> img(static_cast<std::size_t>(sigma.size()));
    for (int k = 1; k <= sigma.size(); ++k) img[static_cast<std::size_t>(k - 1)] = sigma(phi(k));
    return Permutation::from_image(std::move(img));
}

/// All m! permutations of [m] in lexicographic order of their images.
inline std::vector<Permutation> all_permutations(int m) {
    std::vector<int> img(static_cast<std::size_t>(m));
    std::iota(img.begin(), img.end(), 1);
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation::from_image(img));
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

}  // namespace htensor
