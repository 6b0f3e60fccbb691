#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hsk/cells/cells.hpp"
#include "hsk/data/window.hpp"
#include "hsk/heads/model.hpp"
#include "hsk/physics/ja.hpp"
#include "hsk/physics/preisach.hpp"

namespace hsk::heads {

using diff::Tensor;

/// Constant `t` in the same evaluation context as `like`.
template <typename V, typename T>
V constant(const V& like, const Tensor<T>& t) {
    return V(diff::lift(like, t));
}

/// Overwrite element 0 of each row of g with `value` (r x 1).
template <typename V, typename T>
V inject(const V& g, const Tensor<T>& value) {
    if (g.cols() == 1) return constant(g, value);
    return diff::concat_cols({constant(g, value), diff::slice_cols(g, 1, g.cols() - 1)});
}

/// Column of element 0.
template <typename V>
V head0(const V& g) {
    return diff::slice_cols(g, 0, 1);
}

// ---------------------------------------------------------------------------
// Warmup injections. Each returns one (r x 1) column per warmup sample.

template <typename T>
std::vector<Tensor<T>> inject_direct(const data::Window<T>& w) {
    std::vector<Tensor<T>> out;
    for (std::size_t j = 0; j < w.warmup; ++j) out.push_back(w.col(w.y, j));
    return out;
}

/// B~ - atanh(H~); |H~| >= 1 is outside the atanh domain.
template <typename T>
std::vector<Tensor<T>> inject_gru_m(const data::Window<T>& w) {
    std::vector<Tensor<T>> out;
    for (std::size_t j = 0; j < w.warmup; ++j) {
        Tensor<T> c(w.rows, 1);
        for (std::size_t r = 0; r < w.rows; ++r) {
            const T h = w.y(r, j);
            if (!(std::abs(h) < T(1))) {
                throw DomainError("GRU-M warmup: |H~| >= 1 at row " + std::to_string(r) + ", warmup sample " +
                                  std::to_string(j));
            }
            c(r, 0) = w.u(r, j) - std::atanh(h);
        }
        out.push_back(std::move(c));
    }
    return out;
}

/// B/(mu0 H_max) - H~, the inverse of the physically scaled readout.
template <typename T>
std::vector<Tensor<T>> inject_gru_m_phys(const data::Window<T>& w) {
    const T s = static_cast<T>(1.0 / (physics::kMu0 * static_cast<double>(w.y_max)));
    std::vector<Tensor<T>> out;
    for (std::size_t j = 0; j < w.warmup; ++j) {
        Tensor<T> c(w.rows, 1);
        for (std::size_t r = 0; r < w.rows; ++r) c(r, 0) = w.u_raw(r, j) * s - w.y(r, j);
        out.push_back(std::move(c));
    }
    return out;
}

/// H~ / B~ with the |B~| > eps_B guard.
template <typename T>
std::vector<Tensor<T>> inject_gru_l(const data::Window<T>& w) {
    std::vector<Tensor<T>> out;
    for (std::size_t j = 0; j < w.warmup; ++j) {
        Tensor<T> c(w.rows, 1);
        for (std::size_t r = 0; r < w.rows; ++r) {
            const T b = w.u(r, j);
            if (!(std::abs(b) > static_cast<T>(kEpsB))) {
                throw DomainError("GRU-L warmup: |B~| <= eps_B at row " + std::to_string(r) + ", warmup sample " +
                                  std::to_string(j));
            }
            c(r, 0) = w.y(r, j) / b;
        }
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Warmup by state injection.

/// g_{k0} = [inj_0, 0, ...]; then for each later warmup sample one GRU step
/// followed by injection. `x` holds x_{k0+1} .. x_{k1-1}.
template <typename V, typename T>
V warmup_direct(std::span<const Tensor<T>> x, std::span<const Tensor<T>> inj, const cells::GruWeights<V>& p) {
    if (inj.empty()) throw DataError("warmup window is empty");
    if (x.size() + 1 != inj.size()) throw ShapeError("warmup_direct: need one input per injected sample after k0");
    const std::size_t d_g = p.U.rows();
    V g = inject(constant(p.U, Tensor<T>(inj[0].rows(), d_g)), inj[0]);
    for (std::size_t i = 0; i < x.size(); ++i) {
        g = cells::gru_step(constant(p.U, x[i]), g, p);
        g = inject(g, inj[i + 1]);
    }
    return g;
}

/// LSTM variant: only g is injected; the cell state starts at zero and
/// evolves freely.
template <typename V, typename T>
cells::HiddenState<V> warmup_direct_lstm(std::span<const Tensor<T>> x, std::span<const Tensor<T>> inj,
                                         const cells::LstmWeights<V>& p) {
    if (inj.empty()) throw DataError("warmup window is empty");
    if (x.size() + 1 != inj.size()) throw ShapeError("warmup_direct: need one input per injected sample after k0");
    const std::size_t d_g = p.U_i.rows();
    const V zero = constant(p.U_i, Tensor<T>(inj[0].rows(), d_g));
    cells::HiddenState<V> s{inject(zero, inj[0]), zero, true};
    for (std::size_t i = 0; i < x.size(); ++i) {
        s = cells::lstm_step(constant(p.U_i, x[i]), s, p);
        s.g = inject(s.g, inj[i + 1]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Prediction. Each returns the (r x n) normalized predictions and the last
// state; `x` holds x_{k1} .. x_{k2}.

template <typename V>
struct Prediction {
    V pred;
    V g;
    V c;
    bool has_c = false;
};

enum class Readout { Direct, Magnetization, MagnetizationPhys, Linear };

template <typename V, typename T>
Prediction<V> predict_gru(std::span<const Tensor<T>> x, std::span<const Tensor<T>> u, V g,
                          const cells::GruWeights<V>& p, Readout mode, std::span<const Tensor<T>> b_phys = {}) {
    std::vector<V> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        g = cells::gru_step(constant(g, x[i]), g, p);
        const V h0 = head0(g);
        switch (mode) {
            case Readout::Direct: out.push_back(h0); break;
            case Readout::Magnetization: out.push_back(tanh(u[i] - h0)); break;
            case Readout::MagnetizationPhys: out.push_back(b_phys[i] - h0); break;
            case Readout::Linear: out.push_back(h0 * u[i]); break;
        }
    }
    return {diff::concat_cols(std::span<const V>(out)), g, g, false};
}

template <typename V, typename T>
Prediction<V> predict_gru_p(std::span<const Tensor<T>> x, const V& g, const cells::GruWeights<V>& p) {
    return predict_gru<V, T>(x, {}, g, p, Readout::Direct);
}

template <typename V, typename T>
Prediction<V> predict_gru_m(std::span<const Tensor<T>> x, std::span<const Tensor<T>> u, const V& g,
                            const cells::GruWeights<V>& p) {
    return predict_gru<V, T>(x, u, g, p, Readout::Magnetization);
}

template <typename V, typename T>
Prediction<V> predict_gru_l(std::span<const Tensor<T>> x, std::span<const Tensor<T>> u, const V& g,
                            const cells::GruWeights<V>& p) {
    return predict_gru<V, T>(x, u, g, p, Readout::Linear);
}

template <typename V, typename T>
Prediction<V> predict_lstm_p(std::span<const Tensor<T>> x, cells::HiddenState<V> s, const cells::LstmWeights<V>& p) {
    std::vector<V> out;
    out.reserve(x.size());
    for (const auto& xi : x) {
        s = cells::lstm_step(constant(s.g, xi), s, p);
        out.push_back(head0(s.g));
    }
    return {diff::concat_cols(std::span<const V>(out)), s.g, s.c, true};
}

/// Row selector of the first component of every 2D grid vector.
template <typename T>
Tensor<T> gru_v_selector(std::size_t d_g) {
    gru_v_grid(d_g);
    Tensor<T> s(1, d_g);
    for (std::size_t i = 0; i < d_g; i += 2) s[i] = T(1);
    return s;
}

/// H~_k = B~_k - sum of the first component over the grid. The state is
/// advanced over `x` in full; predictions are emitted for the last
/// `u.size()` inputs.
template <typename V, typename T>
Prediction<V> predict_gru_v(std::span<const Tensor<T>> x, std::span<const Tensor<T>> u, V g,
                            const cells::GruWeights<V>& p) {
    if (u.size() > x.size()) throw ShapeError("predict_gru_v: more outputs than inputs");
    const Tensor<T> sel = gru_v_selector<T>(g.cols());
    const std::size_t first = x.size() - u.size();
    std::vector<V> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        g = cells::gru_step(constant(g, x[i]), g, p);
        if (i >= first) out.push_back(u[i - first] - diff::matmul_nt(g, constant(g, sel)));
    }
    return {diff::concat_cols(std::span<const V>(out)), g, g, false};
}

// ---------------------------------------------------------------------------
// Full rollout over a window batch, dispatched on the archetype.

namespace detail {

template <typename T>
std::vector<Tensor<T>> cols(const data::Window<T>& w, const Tensor<T>& m, std::size_t from, std::size_t to,
                            T scale = T(1)) {
    std::vector<Tensor<T>> out;
    for (std::size_t j = from; j < to; ++j) {
        Tensor<T> c = w.col(m, j);
        if (scale != T(1)) {
            for (auto& v : c.values()) v *= scale;
        }
        out.push_back(std::move(c));
    }
    return out;
}

template <typename T>
std::span<const Tensor<T>> range(const std::vector<Tensor<T>>& v, std::size_t from, std::size_t to) {
    return std::span<const Tensor<T>>(v).subspan(from, to - from);
}

/// JA-family rollout anchored at the true field of the last warmup sample.
/// Emits H_hat / H_max for every prediction column.
template <typename V, typename T>
Prediction<V> rollout_ja(const ModelConfig& cfg, std::span<const V> p, const data::Window<T>& w) {
    const std::size_t L = w.len, k1 = w.warmup;
    const auto B = cols(w, w.u_raw, 0, L);
    const T inv_hmax = T(1) / w.y_max;
    const bool has_gru = cfg.archetype != Archetype::Ja;
    const V& like = p[0];
    cells::GruWeights<V> gw;
    V g;
    if (has_gru) {
        gw = cells::gru_view(p);
        g = constant(like, Tensor<T>(w.rows, cfg.d_g));
        for (std::size_t j = 0; j + 1 < k1; ++j) g = cells::gru_step(constant(like, w.x[j]), g, gw);
    }
    physics::JaCoeffs<V> coeffs;
    if (cfg.archetype != Archetype::GruJadp) coeffs = physics::ja_coeffs<T>(p.back(), cfg.eta);

    V H = constant(like, w.col(w.y_raw, k1 - 1));
    std::vector<V> out;
    for (std::size_t j = k1 - 1; j + 1 < L; ++j) {
        if (cfg.archetype == Archetype::GruJadp) {
            auto [Hn, gn] = physics::gru_jadp_step<T>(constant(like, w.x[j]), g, gw, cfg.eta, H, B[j], B[j + 1]);
            H = Hn;
            g = gn;
        } else if (cfg.archetype == Archetype::JaResidual) {
            g = cells::gru_step(constant(like, w.x[j]), g, gw);
            const V ja = H + physics::ja_delta_h<T>(H, B[j], B[j + 1], coeffs);
            H = physics::ja_residual_step<T>(ja, head0(g) * w.y_max);
        } else {
            H = H + physics::ja_delta_h<T>(H, B[j], B[j + 1], coeffs);
        }
        out.push_back(H * inv_hmax);
    }
    return {diff::concat_cols(std::span<const V>(out)), has_gru ? g : H, H, false};
}

template <typename V, typename T>
Prediction<V> rollout_preisach(const ModelConfig& cfg, std::span<const V> p, const data::Window<T>& w) {
    const auto grid = physics::PreisachGrid::make(cfg.d_g);
    const auto gamma = physics::preisach_states(w.u, grid, cfg.preisach_T);
    std::vector<V> out;
    for (std::size_t j = w.warmup; j < w.len; ++j) {
        out.push_back(physics::preisach_output<T>(gamma[j], w.col(w.u, j), p[0], p[1], p[2], p[3]));
    }
    const V state = constant(p[0], gamma.back());
    return {diff::concat_cols(std::span<const V>(out)), state, state, false};
}

}  // namespace detail

/// Roll a model out over a window batch. `p` holds the model parameters in
/// layout order, as eager tensors or as graph variables. Returns (r x
/// horizon) normalized predictions of the target signal.
template <typename V, typename T>
Prediction<V> rollout(const ModelConfig& cfg, std::span<const V> p, const data::Window<T>& w) {
    if (w.warmup == 0 || w.warmup >= w.len) throw DataError("window needs warmup in [1, len)");
    if (w.d_x != cfg.d_x) throw ShapeError("window feature count does not match the model");
    using detail::range;
    const std::size_t L = w.len, k1 = w.warmup;
    switch (cfg.archetype) {
        case Archetype::GruP:
        case Archetype::PinnJa:
        case Archetype::GruM:
        case Archetype::GruMPhys:
        case Archetype::GruL: {
            const auto gw = cells::gru_view(p);
            std::vector<Tensor<T>> inj;
            Readout mode = Readout::Direct;
            if (cfg.archetype == Archetype::GruM) {
                inj = inject_gru_m(w);
                mode = Readout::Magnetization;
            } else if (cfg.archetype == Archetype::GruMPhys) {
                inj = inject_gru_m_phys(w);
                mode = Readout::MagnetizationPhys;
            } else if (cfg.archetype == Archetype::GruL) {
                inj = inject_gru_l(w);
                mode = Readout::Linear;
            } else {
                inj = inject_direct(w);
            }
            const V g = warmup_direct<V, T>(range(w.x, 1, k1), inj, gw);
            const auto u = detail::cols(w, w.u, k1, L);
            const auto bp = mode == Readout::MagnetizationPhys
                                ? detail::cols(w, w.u_raw, k1, L,
                                               static_cast<T>(1.0 / (physics::kMu0 * static_cast<double>(w.y_max))))
                                : std::vector<Tensor<T>>{};
            return predict_gru<V, T>(range(w.x, k1, L), u, g, gw, mode, bp);
        }
        case Archetype::LstmP: {
            const auto lw = cells::lstm_view(p);
            const auto s = warmup_direct_lstm<V, T>(range(w.x, 1, k1), inject_direct(w), lw);
            return predict_lstm_p<V, T>(range(w.x, k1, L), s, lw);
        }
        case Archetype::GruV: {
            const auto gw = cells::gru_view(p);
            const V g0 = constant(p[0], Tensor<T>(w.rows, cfg.d_g));
            const auto u = detail::cols(w, w.u, k1, L);
            return predict_gru_v<V, T>(range(w.x, 0, L), u, g0, gw);
        }
        case Archetype::GruJadp:
        case Archetype::Ja:
        case Archetype::JaResidual: return detail::rollout_ja<V, T>(cfg, p, w);
        case Archetype::Preisach: return detail::rollout_preisach<V, T>(cfg, p, w);
    }
    throw ConfigError("unsupported archetype");
}

template <typename T>
struct RolloutResult {
    Tensor<T> pred_norm;  // r x horizon, normalized
    Tensor<T> pred;       // r x horizon, physical units (pred_norm * H_max)
    Tensor<T> state;      // final hidden state
};

template <typename T>
RolloutResult<T> predict(const Model<T>& m, const data::Window<T>& w) {
    std::vector<Tensor<T>> p;
    p.reserve(m.params.size());
    for (const auto& q : m.params) p.push_back(q.value);
    auto r = rollout<Tensor<T>, T>(m.cfg, std::span<const Tensor<T>>(p), w);
    Tensor<T> phys = r.pred;
    for (auto& v : phys.values()) v *= w.y_max;
    return {std::move(r.pred), std::move(phys), std::move(r.g)};
}

}  // namespace hsk::heads
