#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "hsk/error.hpp"

namespace hsk::diff {

enum class Precision { Single, Double };

inline const char* to_string(Precision p) { return p == Precision::Single ? "single" : "double"; }

Precision parse_precision(const std::string& s);

/// Dense row-major real tensor of rank 2. Vectors are stored as 1 x n rows,
/// scalars as 1 x 1.
template <typename T>
class Tensor {
public:
    using value_type = T;

    Tensor() : shape_{0, 0} {}

    Tensor(std::size_t rows, std::size_t cols, T fill = T(0))
        : shape_{rows, cols}, values_(rows * cols, fill) {}

    Tensor(std::vector<std::size_t> shape, std::vector<T> values) : values_(std::move(values)) {
        if (shape.empty() || shape.size() > 2) {
            throw ShapeError("tensor rank must be 1 or 2, got " + std::to_string(shape.size()));
        }
        if (shape.size() == 1) shape.insert(shape.begin(), 1);
        shape_ = std::move(shape);
        if (shape_[0] * shape_[1] != values_.size()) {
            throw ShapeError("tensor shape " + std::to_string(shape_[0]) + "x" + std::to_string(shape_[1]) +
                             " does not match " + std::to_string(values_.size()) + " values");
        }
    }

    static Tensor scalar(T v) { return Tensor(1, 1, v); }

    static Tensor row(std::vector<T> v) {
        const std::size_t n = v.size();
        return Tensor({1, n}, std::move(v));
    }

    static Tensor column(std::vector<T> v) {
        const std::size_t n = v.size();
        return Tensor({n, 1}, std::move(v));
    }

    static Tensor identity(std::size_t n) {
        Tensor t(n, n);
        for (std::size_t i = 0; i < n; ++i) t(i, i) = T(1);
        return t;
    }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rows() const { return shape_[0]; }
    std::size_t cols() const { return shape_[1]; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return values_[r * shape_[1] + c]; }
    T operator()(std::size_t r, std::size_t c) const { return values_[r * shape_[1] + c]; }
    T& operator[](std::size_t i) { return values_[i]; }
    T operator[](std::size_t i) const { return values_[i]; }

    /// Value of a 1 x 1 tensor.
    T item() const {
        if (values_.size() != 1) throw ShapeError("item() requires a single-element tensor");
        return values_[0];
    }

    std::span<T> values() { return values_; }
    std::span<const T> values() const { return values_; }
    T* data() { return values_.data(); }
    const T* data() const { return values_.data(); }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    bool all_finite() const {
        return std::all_of(values_.begin(), values_.end(), [](T v) { return std::isfinite(v); });
    }

    void fill(T v) { std::fill(values_.begin(), values_.end(), v); }

    template <typename U>
    Tensor<U> cast() const {
        std::vector<U> out(values_.begin(), values_.end());
        return Tensor<U>(shape_, std::move(out));
    }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.shape_ == b.shape_ && a.values_ == b.values_;
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<T> values_;
};

inline std::string shape_string(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

template <typename T>
std::string shape_string(const Tensor<T>& t) {
    return shape_string(t.rows(), t.cols());
}

}  // namespace hsk::diff
