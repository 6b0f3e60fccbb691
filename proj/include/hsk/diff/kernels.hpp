#pragma once

// Primitive dense kernels shared by eager tensor math and the recording graph.
// Both paths call exactly these routines so that a replayed graph and an eager
// evaluation of the same expression agree bit for bit.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hsk/diff/special.hpp"
#include "hsk/diff/tensor.hpp"

namespace hsk::diff::kernels {

// Resolve the result shape of a broadcasting binary op. Each dimension must
// either agree or be 1 on one side.
inline void broadcast_shape(std::size_t ar, std::size_t ac, std::size_t br, std::size_t bc, std::size_t& r,
                            std::size_t& c, const char* op) {
    auto dim = [&](std::size_t a, std::size_t b) {
        if (a == b) return a;
        if (a == 1) return b;
        if (b == 1) return a;
        throw ShapeError(std::string(op) + ": cannot broadcast " + shape_string(ar, ac) + " with " +
                         shape_string(br, bc));
    };
    r = dim(ar, br);
    c = dim(ac, bc);
}

template <typename T, typename F>
Tensor<T> binary(const Tensor<T>& a, const Tensor<T>& b, F f, const char* op) {
    std::size_t r, c;
    broadcast_shape(a.rows(), a.cols(), b.rows(), b.cols(), r, c, op);
    Tensor<T> out(r, c);
    if (a.rows() == r && a.cols() == c && b.rows() == r && b.cols() == c) {
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) out[i] = f(a[i], b[i]);
        return out;
    }
    const bool ar1 = a.rows() == 1, ac1 = a.cols() == 1, br1 = b.rows() == 1, bc1 = b.cols() == 1;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            out(i, j) = f(a(ar1 ? 0 : i, ac1 ? 0 : j), b(br1 ? 0 : i, bc1 ? 0 : j));
        }
    }
    return out;
}

template <typename T, typename F>
Tensor<T> unary(const Tensor<T>& a, F f) {
    Tensor<T> out(a.rows(), a.cols());
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = f(a[i]);
    return out;
}

// Sum a gradient of the broadcast result shape back down to (rows x cols).
template <typename T>
void accumulate_reduced(Tensor<T>& dst, const Tensor<T>& g) {
    if (dst.rows() == g.rows() && dst.cols() == g.cols()) {
        const std::size_t n = g.size();
        for (std::size_t i = 0; i < n; ++i) dst[i] += g[i];
        return;
    }
    const bool r1 = dst.rows() == 1, c1 = dst.cols() == 1;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            dst(r1 ? 0 : i, c1 ? 0 : j) += g(i, j);
        }
    }
}

// Read a (possibly broadcast) operand at output position (i, j).
template <typename T>
inline T at(const Tensor<T>& t, std::size_t i, std::size_t j) {
    return t(t.rows() == 1 ? 0 : i, t.cols() == 1 ? 0 : j);
}

/// C = A * B with A (m x k), B (k x n).
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions differ (" + shape_string(a) + " * " + shape_string(b) + ")");
    }
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Tensor<T> out(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const T av = a(i, p);
            for (std::size_t j = 0; j < n; ++j) out(i, j) += av * b(p, j);
        }
    }
    return out;
}

/// C = A * W^T with A (m x k), W (n x k). This is the layout of x W^T with
/// weight matrices stored (out x in).
template <typename T>
Tensor<T> matmul_nt(const Tensor<T>& a, const Tensor<T>& w) {
    if (a.cols() != w.cols()) {
        throw ShapeError("matmul_nt: inner dimensions differ (" + shape_string(a) + " * " + shape_string(w) +
                         "^T)");
    }
    const std::size_t m = a.rows(), k = a.cols(), n = w.rows();
    Tensor<T> out(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            T acc = T(0);
            for (std::size_t p = 0; p < k; ++p) acc += a(i, p) * w(j, p);
            out(i, j) = acc;
        }
    }
    return out;
}

/// A^T * G, (k x m)^T... returns (a.cols x g.cols).
template <typename T>
void accumulate_at_g(Tensor<T>& dst, const Tensor<T>& a, const Tensor<T>& g) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const T av = a(i, p);
            for (std::size_t j = 0; j < g.cols(); ++j) dst(p, j) += av * g(i, j);
        }
    }
}

/// dst += G * B^T
template <typename T>
void accumulate_g_bt(Tensor<T>& dst, const Tensor<T>& g, const Tensor<T>& b) {
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t p = 0; p < b.rows(); ++p) {
            T acc = T(0);
            for (std::size_t j = 0; j < g.cols(); ++j) acc += g(i, j) * b(p, j);
            dst(i, p) += acc;
        }
    }
}

/// dst += G * W
template <typename T>
void accumulate_g_w(Tensor<T>& dst, const Tensor<T>& g, const Tensor<T>& w) {
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const T gv = g(i, j);
            for (std::size_t p = 0; p < w.cols(); ++p) dst(i, p) += gv * w(j, p);
        }
    }
}

/// dst += G^T * A
template <typename T>
void accumulate_gt_a(Tensor<T>& dst, const Tensor<T>& g, const Tensor<T>& a) {
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const T gv = g(i, j);
            for (std::size_t p = 0; p < a.cols(); ++p) dst(j, p) += gv * a(i, p);
        }
    }
}

template <typename T>
Tensor<T> slice_cols(const Tensor<T>& a, std::size_t start, std::size_t len) {
    if (start + len > a.cols()) {
        throw ShapeError("slice_cols: columns [" + std::to_string(start) + ", " + std::to_string(start + len) +
                         ") out of range for " + shape_string(a));
    }
    Tensor<T> out(a.rows(), len);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < len; ++j) out(i, j) = a(i, start + j);
    }
    return out;
}

template <typename T>
Tensor<T> concat_cols(std::span<const Tensor<T>* const> parts) {
    if (parts.empty()) throw ShapeError("concat_cols: no inputs");
    const std::size_t rows = parts[0]->rows();
    std::size_t cols = 0;
    for (const auto* p : parts) {
        if (p->rows() != rows) {
            throw ShapeError("concat_cols: row count mismatch (" + shape_string(*parts[0]) + " vs " +
                             shape_string(*p) + ")");
        }
        cols += p->cols();
    }
    Tensor<T> out(rows, cols);
    std::size_t off = 0;
    for (const auto* p : parts) {
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < p->cols(); ++j) out(i, off + j) = (*p)(i, j);
        }
        off += p->cols();
    }
    return out;
}

template <typename T>
Tensor<T> sum_all(const Tensor<T>& a) {
    T acc = T(0);
    for (T v : a.values()) acc += v;
    return Tensor<T>::scalar(acc);
}

template <typename T>
Tensor<T> sum_cols(const Tensor<T>& a) {
    Tensor<T> out(a.rows(), 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T acc = T(0);
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j);
        out(i, 0) = acc;
    }
    return out;
}

// Elementwise scalar functions, named so that both paths share them.
template <typename T> inline T f_add(T a, T b) { return a + b; }
template <typename T> inline T f_sub(T a, T b) { return a - b; }
template <typename T> inline T f_mul(T a, T b) { return a * b; }
template <typename T> inline T f_div(T a, T b) { return a / b; }
template <typename T> inline T f_min(T a, T b) { return b < a ? b : a; }
template <typename T> inline T f_max(T a, T b) { return b > a ? b : a; }
template <typename T> inline T f_gt(T a, T b) { return a > b ? T(1) : T(0); }
template <typename T> inline T f_neg(T a) { return -a; }
template <typename T> inline T f_tanh(T a) { return std::tanh(a); }
template <typename T> inline T f_sigmoid(T a) { return special::sigmoid(a); }
template <typename T> inline T f_exp(T a) { return std::exp(a); }
template <typename T> inline T f_log(T a) { return std::log(a); }
template <typename T> inline T f_sqrt(T a) { return std::sqrt(a); }
template <typename T> inline T f_abs(T a) { return std::abs(a); }
template <typename T> inline T f_square(T a) { return a * a; }

template <typename T>
Tensor<T> select(const Tensor<T>& mask, const Tensor<T>& a, const Tensor<T>& b) {
    std::size_t r, c, r2, c2;
    broadcast_shape(a.rows(), a.cols(), b.rows(), b.cols(), r, c, "select");
    broadcast_shape(mask.rows(), mask.cols(), r, c, r2, c2, "select");
    Tensor<T> out(r2, c2);
    for (std::size_t i = 0; i < r2; ++i) {
        for (std::size_t j = 0; j < c2; ++j) {
            out(i, j) = at(mask, i, j) != T(0) ? at(a, i, j) : at(b, i, j);
        }
    }
    return out;
}

}  // namespace hsk::diff::kernels
