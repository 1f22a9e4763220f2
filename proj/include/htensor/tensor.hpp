#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "htensor/errors.hpp"

namespace htensor {

/// Extents per mode. Order = shape.size(), every extent >= 1.
using Shape = std::vector<int>;

/// 1-based index tuple, one entry per mode.
using MultiIndex = std::vector<int>;

namespace detail {

inline void check_shape(const Shape& shape) {
    if (shape.empty()) throw ShapeError("tensor order must be at least 1");
    for (int e : shape)
        if (e < 1) throw ShapeError("tensor extents must be at least 1");
}

inline std::size_t shape_size(const Shape& shape) {
    std::size_t n = 1;
    for (int e : shape) n *= static_cast<std::size_t>(e);
    return n;
}

}  // namespace detail

/// Row-major flat offset (0-based) of a 1-based multi-index. Last index fastest.
inline std::size_t linearize(const MultiIndex& idx, const Shape& shape) {
    if (idx.size() != shape.size())
        throw ShapeError("multi-index order does not match tensor order");
    std::size_t off = 0;
    for (std::size_t k = 0; k < shape.size(); ++k) {
        if (idx[k] < 1 || idx[k] > shape[k])
            throw ShapeError("index " + std::to_string(idx[k]) + " out of range for mode " +
                             std::to_string(k + 1) + " (extent " + std::to_string(shape[k]) + ")");
        off = off * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(idx[k] - 1);
    }
    return off;
}

/// Inverse of linearize.
inline MultiIndex delinearize(std::size_t offset, const Shape& shape) {
    if (offset >= detail::shape_size(shape))
        throw ShapeError("flat offset out of range");
    MultiIndex idx(shape.size());
    for (std::size_t k = shape.size(); k-- > 0;) {
        idx[k] = static_cast<int>(offset % static_cast<std::size_t>(shape[k])) + 1;
        offset /= static_cast<std::size_t>(shape[k]);
    }
    return idx;
}

/// Advance a 1-based index tuple in row-major order (last index fastest).
/// Returns false once the tuple wraps past the end.
inline bool next_index(MultiIndex& idx, const Shape& shape) {
    for (std::size_t k = shape.size(); k-- > 0;) {
        if (idx[k] < shape[k]) {
            ++idx[k];
            return true;
        }
        idx[k] = 1;
    }
    return false;
}

/// Dense rectangular multi-array of doubles, row-major. The universal value
/// type of the library; treated as immutable once filled.
class DenseTensor {
public:
    DenseTensor() : shape_{1}, data_(1, 0.0) {}

    explicit DenseTensor(Shape shape) : shape_(std::move(shape)) {
        detail::check_shape(shape_);
        data_.assign(detail::shape_size(shape_), 0.0);
    }

    DenseTensor(Shape shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        detail::check_shape(shape_);
        if (data_.size() != detail::shape_size(shape_))
            throw ShapeError("data length does not match the product of extents");
    }

    int order() const { return static_cast<int>(shape_.size()); }
    const Shape& shape() const { return shape_; }

    /// Extent of a 1-based mode.
    int extent(int mode) const {
        if (mode < 1 || mode > order()) throw ShapeError("mode out of range");
        return shape_[static_cast<std::size_t>(mode - 1)];
    }

    std::size_t size() const { return data_.size(); }

    bool hypercubic() const {
        for (int e : shape_)
            if (e != shape_[0]) return false;
        return true;
    }

    /// Common extent of a hypercubic tensor.
    int dim() const {
        if (!hypercubic()) throw ShapeError("tensor is not hypercubic");
        return shape_[0];
    }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }

    double at(const MultiIndex& idx) const { return data_[linearize(idx, shape_)]; }
    double& at(const MultiIndex& idx) { return data_[linearize(idx, shape_)]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    Shape shape_;
    std::vector<double> data_;
};

inline double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

/// Scaling applied by the (anti)symmetrizers and the separable constructions.
enum class NormalizationMode {
    Unit,           ///< factor 1
    SqrtFactorial,  ///< factor 1/sqrt(m!)
    Projector,      ///< factor 1/m!
};

inline double normalization_factor(NormalizationMode mode, int m) {
    switch (mode) {
        case NormalizationMode::Unit: return 1.0;
        case NormalizationMode::SqrtFactorial: return 1.0 / std::sqrt(factorial(m));
        case NormalizationMode::Projector: return 1.0 / factorial(m);
    }
    throw DomainError("unknown normalization mode");
}

inline const char* normalization_name(NormalizationMode mode) {
    switch (mode) {
        case NormalizationMode::Unit: return "unit";
        case NormalizationMode::SqrtFactorial: return "sqrt-factorial";
        case NormalizationMode::Projector: return "projector";
    }
    return "?";
}

/// Order-2k identity tensor I with I[i1..ik j1..jk] = prod_r delta(i_r, j_r).
inline DenseTensor identity_tensor(int k, int n) {
    if (k < 1) throw ShapeError("half-order must be at least 1");
    if (n < 1) throw ShapeError("dimension must be at least 1");
    DenseTensor out(Shape(static_cast<std::size_t>(2 * k), n));
    MultiIndex idx(static_cast<std::size_t>(2 * k), 1);
    do {
        bool diag = true;
        for (int r = 0; r < k; ++r)
            if (idx[static_cast<std::size_t>(r)] != idx[static_cast<std::size_t>(k + r)]) {
                diag = false;
                break;
            }
        if (diag) out.at(idx) = 1.0;
    } while (next_index(idx, out.shape()));
    return out;
}

inline void require_same_shape(const DenseTensor& a, const DenseTensor& b, const char* op) {
    if (a.shape() != b.shape())
        throw ShapeError(std::string(op) + ": operand shapes differ");
}

inline DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "add");
    DenseTensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline DenseTensor scale(const DenseTensor& a, double c) {
    DenseTensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const DenseTensor& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

inline double frobenius_norm(const DenseTensor& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i];
    return std::sqrt(s);
}

/// Sum of entrywise products; the full inner product <A, B>.
inline double inner_product(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "inner_product");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Order-1 tensor wrapping a plain vector.
inline DenseTensor from_vector(const std::vector<double>& v) {
    if (v.empty()) throw ShapeError("vector must have at least one entry");
    return DenseTensor(Shape{static_cast<int>(v.size())}, v);
}

/// The data of an order-1 tensor as a plain vector.
inline std::vector<double> to_vector(const DenseTensor& a) {
    if (a.order() != 1) throw ShapeError("expected an order-1 tensor");
    return a.data();
}

}  // namespace htensor
