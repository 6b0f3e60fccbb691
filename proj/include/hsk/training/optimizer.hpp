#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hsk/cells/cells.hpp"

namespace hsk::training {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double clip = 1.0;  // global gradient norm; <= 0 disables clipping
};

template <typename T>
struct AdamState {
    std::vector<diff::Tensor<T>> m, v;
    std::size_t t = 0;
};

/// Global L2 norm over all gradient tensors.
template <typename T>
double global_norm(std::span<const diff::Tensor<T>> grads) {
    double acc = 0;
    for (const auto& g : grads) {
        for (T x : g.values()) acc += static_cast<double>(x) * static_cast<double>(x);
    }
    return std::sqrt(acc);
}

/// Clip, then one bias-corrected Adam update in place. Returns the gradient
/// norm before clipping.
template <typename T>
double optimizer_step(cells::ParamList<T>& params, std::span<const diff::Tensor<T>> grads, AdamState<T>& state,
                      const AdamConfig& cfg) {
    if (grads.size() != params.size()) throw ShapeError("optimizer_step: gradient count differs from parameters");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (grads[i].rows() != params[i].value.rows() || grads[i].cols() != params[i].value.cols()) {
            throw ShapeError("optimizer_step: gradient shape differs for " + params[i].name);
        }
        if (!grads[i].all_finite()) throw NonFiniteError("optimizer_step: non-finite gradient for " + params[i].name);
    }
    if (state.m.empty()) {
        for (const auto& p : params) {
            state.m.emplace_back(p.value.rows(), p.value.cols());
            state.v.emplace_back(p.value.rows(), p.value.cols());
        }
    }
    const double norm = global_norm(grads);
    const double scale = cfg.clip > 0 && norm > cfg.clip ? cfg.clip / norm : 1.0;
    ++state.t;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto p = params[i].value.values();
        auto m = state.m[i].values();
        auto v = state.v[i].values();
        const auto& g = grads[i].values();
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double gk = static_cast<double>(g[k]) * scale;
            const double mk = cfg.beta1 * static_cast<double>(m[k]) + (1.0 - cfg.beta1) * gk;
            const double vk = cfg.beta2 * static_cast<double>(v[k]) + (1.0 - cfg.beta2) * gk * gk;
            m[k] = static_cast<T>(mk);
            v[k] = static_cast<T>(vk);
            const double step = cfg.lr * (mk / bc1) / (std::sqrt(vk / bc2) + cfg.eps);
            p[k] = static_cast<T>(static_cast<double>(p[k]) - step);
        }
    }
    return norm;
}

}  // namespace hsk::training
