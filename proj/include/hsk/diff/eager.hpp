#pragma once

// Eager tensor math with the same names as the recording operators in
// graph.hpp, so model code templated on the value type runs unchanged on
// plain tensors (no tape) or on graph variables.

#include <initializer_list>
#include <span>
#include <vector>

#include "hsk/diff/kernels.hpp"
#include "hsk/diff/tensor.hpp"

namespace hsk::diff {

namespace detail {
template <typename T>
Tensor<T> finite_or_throw(Tensor<T> t, const char* op) {
    if (!t.all_finite()) throw NonFiniteError(std::string("non-finite result in eager ") + op);
    return t;
}
}  // namespace detail

#define HSK_EAGER_BINARY(fn, kern)                                                              \
    template <typename T>                                                                       \
    Tensor<T> fn(const Tensor<T>& a, const Tensor<T>& b) {                                      \
        return detail::finite_or_throw(kernels::binary(a, b, kernels::kern<T>, #fn), #fn);      \
    }                                                                                           \
    template <typename T>                                                                       \
    Tensor<T> fn(const Tensor<T>& a, T b) {                                                     \
        return fn(a, Tensor<T>::scalar(b));                                                     \
    }                                                                                           \
    template <typename T>                                                                       \
    Tensor<T> fn(T a, const Tensor<T>& b) {                                                     \
        return fn(Tensor<T>::scalar(a), b);                                                     \
    }

HSK_EAGER_BINARY(add, f_add)
HSK_EAGER_BINARY(sub, f_sub)
HSK_EAGER_BINARY(mul, f_mul)
HSK_EAGER_BINARY(div, f_div)
HSK_EAGER_BINARY(minimum, f_min)
HSK_EAGER_BINARY(maximum, f_max)
HSK_EAGER_BINARY(greater, f_gt)

#undef HSK_EAGER_BINARY

template <typename T> Tensor<T> operator+(const Tensor<T>& a, const Tensor<T>& b) { return add(a, b); }
template <typename T> Tensor<T> operator-(const Tensor<T>& a, const Tensor<T>& b) { return sub(a, b); }
template <typename T> Tensor<T> operator*(const Tensor<T>& a, const Tensor<T>& b) { return mul(a, b); }
template <typename T> Tensor<T> operator/(const Tensor<T>& a, const Tensor<T>& b) { return div(a, b); }
template <typename T> Tensor<T> operator+(const Tensor<T>& a, T b) { return add(a, b); }
template <typename T> Tensor<T> operator-(const Tensor<T>& a, T b) { return sub(a, b); }
template <typename T> Tensor<T> operator*(const Tensor<T>& a, T b) { return mul(a, b); }
template <typename T> Tensor<T> operator/(const Tensor<T>& a, T b) { return div(a, b); }
template <typename T> Tensor<T> operator+(T a, const Tensor<T>& b) { return add(a, b); }
template <typename T> Tensor<T> operator-(T a, const Tensor<T>& b) { return sub(a, b); }
template <typename T> Tensor<T> operator*(T a, const Tensor<T>& b) { return mul(a, b); }
template <typename T> Tensor<T> operator/(T a, const Tensor<T>& b) { return div(a, b); }

#define HSK_EAGER_UNARY(fn, kern)                                                     \
    template <typename T>                                                             \
    Tensor<T> fn(const Tensor<T>& a) {                                                \
        return detail::finite_or_throw(kernels::unary(a, kernels::kern<T>), #fn);     \
    }

HSK_EAGER_UNARY(neg, f_neg)
HSK_EAGER_UNARY(tanh, f_tanh)
HSK_EAGER_UNARY(sigmoid, f_sigmoid)
HSK_EAGER_UNARY(exp, f_exp)
HSK_EAGER_UNARY(log, f_log)
HSK_EAGER_UNARY(sqrt, f_sqrt)
HSK_EAGER_UNARY(abs, f_abs)
HSK_EAGER_UNARY(square, f_square)

#undef HSK_EAGER_UNARY

template <typename T> Tensor<T> operator-(const Tensor<T>& a) { return neg(a); }

template <typename T>
Tensor<T> langevin(const Tensor<T>& a) {
    return detail::finite_or_throw(kernels::unary(a, special::langevin<T>), "langevin");
}

template <typename T>
Tensor<T> langevin_deriv(const Tensor<T>& a) {
    return detail::finite_or_throw(kernels::unary(a, special::langevin_deriv<T>), "langevin_deriv");
}

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
    return detail::finite_or_throw(kernels::matmul(a, b), "matmul");
}

template <typename T>
Tensor<T> matmul_nt(const Tensor<T>& a, const Tensor<T>& w) {
    return detail::finite_or_throw(kernels::matmul_nt(a, w), "matmul_nt");
}

template <typename T>
Tensor<T> sum(const Tensor<T>& a) {
    return kernels::sum_all(a);
}

template <typename T>
Tensor<T> sum_cols(const Tensor<T>& a) {
    return kernels::sum_cols(a);
}

template <typename T>
Tensor<T> select(const Tensor<T>& mask, const Tensor<T>& a, const Tensor<T>& b) {
    return kernels::select(mask, a, b);
}

template <typename T>
Tensor<T> select(const Tensor<T>& mask, const Tensor<T>& a, T b) {
    return kernels::select(mask, a, Tensor<T>::scalar(b));
}

template <typename T>
Tensor<T> select(const Tensor<T>& mask, T a, const Tensor<T>& b) {
    return kernels::select(mask, Tensor<T>::scalar(a), b);
}

template <typename T>
Tensor<T> slice_cols(const Tensor<T>& a, std::size_t start, std::size_t len) {
    return kernels::slice_cols(a, start, len);
}

template <typename T>
Tensor<T> concat_cols(std::span<const Tensor<T>> parts) {
    std::vector<const Tensor<T>*> ptrs;
    ptrs.reserve(parts.size());
    for (const auto& p : parts) ptrs.push_back(&p);
    return kernels::concat_cols<T>(ptrs);
}

template <typename T>
Tensor<T> concat_cols(std::initializer_list<Tensor<T>> parts) {
    std::vector<const Tensor<T>*> ptrs;
    for (const auto& p : parts) ptrs.push_back(&p);
    return kernels::concat_cols<T>(ptrs);
}

}  // namespace hsk::diff
