#pragma once

#include <algorithm>
#include <exception>
#include <cstddef>
#include <span>
#include <vector>

#include "hsk/data/window.hpp"
#include "hsk/diff/graph.hpp"
#include "hsk/heads/model.hpp"
#include "hsk/heads/rollout.hpp"
#include "hsk/objectives/metrics.hpp"
#include "hsk/physics/ja.hpp"

namespace hsk::training {

using diff::Tensor;

template <typename T>
struct LossGrad {
    T loss = T(0);
    std::vector<Tensor<T>> grads;  // one per model parameter, in layout order
};

inline constexpr std::size_t kDefaultChunk = 4;

/// Per-row training loss: L' plus lambda_w * L_JA for PINN-JA.
template <typename T, typename V>
V row_losses(const heads::ModelConfig& cfg, std::span<const V> p, const data::Window<T>& w, double lambda_w) {
    const auto r = heads::rollout<V, T>(cfg, p, w);
    V rows = objectives::loss_rows<T>(r.pred, w);
    if (cfg.archetype == Archetype::PinnJa && lambda_w > 0) {
        const std::size_t k1 = w.warmup;
        std::vector<V> traj{heads::constant(r.pred, w.col(w.y_raw, k1 - 1)), r.pred * w.y_max};
        Tensor<T> B(w.rows, w.len - k1 + 1);
        for (std::size_t i = 0; i < w.rows; ++i) {
            for (std::size_t j = 0; j < B.cols(); ++j) B(i, j) = w.u_raw(i, k1 - 1 + j);
        }
        const auto coeffs = physics::ja_coeffs<T>(p.back(), cfg.eta);
        const V l_ja = physics::pinn_ja_loss<T>(diff::concat_cols(std::span<const V>(traj)), B, coeffs, w.y_max);
        rows = rows + l_ja * static_cast<T>(lambda_w);
    }
    return rows;
}

/// Loss and gradient of rows [r0, r1) contributing sum(row loss) / total.
template <typename T>
LossGrad<T> chunk_gradient(const heads::Model<T>& m, const data::Window<T>& w, std::size_t r0, std::size_t r1,
                           std::size_t total, double lambda_w) {
    const auto part = w.slice_rows(r0, r1);
    diff::Graph<T> g;
    std::vector<diff::Var<T>> p;
    p.reserve(m.params.size());
    for (const auto& q : m.params) p.push_back(g.parameter(q.value, q.name));
    const auto rows = row_losses<T>(m.cfg, std::span<const diff::Var<T>>(p), part, lambda_w);
    const auto loss = diff::sum(rows) / static_cast<T>(total);
    g.backward(loss);
    LossGrad<T> out;
    out.loss = loss.value()[0];
    out.grads.reserve(p.size());
    for (const auto& v : p) out.grads.push_back(g.grad(v));
    return out;
}

namespace detail {

template <typename T>
LossGrad<T> reduce(std::vector<LossGrad<T>>& parts) {
    LossGrad<T> out = std::move(parts.front());
    for (std::size_t c = 1; c < parts.size(); ++c) {
        out.loss += parts[c].loss;
        for (std::size_t i = 0; i < out.grads.size(); ++i) {
            auto dst = out.grads[i].values();
            const auto& src = parts[c].grads[i].values();
            for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
        }
    }
    return out;
}

inline std::size_t chunk_count(std::size_t rows, std::size_t chunk) { return (rows + chunk - 1) / chunk; }

}  // namespace detail

/// Mean batch loss and its gradient, one chunk of rows after another.
template <typename T>
LossGrad<T> batch_gradient_serial(const heads::Model<T>& m, const data::Window<T>& w, double lambda_w,
                                  std::size_t chunk = kDefaultChunk) {
    if (w.rows == 0) throw DataError("batch has no rows");
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t n = detail::chunk_count(w.rows, chunk);
    std::vector<LossGrad<T>> parts(n);
    for (std::size_t c = 0; c < n; ++c) {
        parts[c] = chunk_gradient(m, w, c * chunk, std::min(w.rows, (c + 1) * chunk), w.rows, lambda_w);
    }
    return detail::reduce(parts);
}

/// Same decomposition as the serial version with chunks spread over threads.
/// The reduction runs in chunk order, so both give identical bits.
template <typename T>
LossGrad<T> batch_gradient(const heads::Model<T>& m, const data::Window<T>& w, double lambda_w,
                           std::size_t chunk = kDefaultChunk) {
    if (w.rows == 0) throw DataError("batch has no rows");
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t n = detail::chunk_count(w.rows, chunk);
    std::vector<LossGrad<T>> parts(n);
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < n; ++c) {
        try {
            parts[c] = chunk_gradient(m, w, c * chunk, std::min(w.rows, (c + 1) * chunk), w.rows, lambda_w);
        } catch (...) {
            errors[c] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return detail::reduce(parts);
}

}  // namespace hsk::training
