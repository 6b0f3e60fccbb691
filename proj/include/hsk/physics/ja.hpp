#pragma once

#include <array>
#include <numbers>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "hsk/cells/cells.hpp"
#include "hsk/diff/eager.hpp"
#include "hsk/diff/graph.hpp"

namespace hsk::physics {

using diff::Tensor;

inline constexpr double kMu0 = 4e-7 * std::numbers::pi;

/// Upper bounds eta of the five physical JA parameters.
struct JaScales {
    double Ms = 5e5;
    double a = 1e3;
    double alpha_w = 1e-2;
    double k = 1e3;
    double c = 1.0;

    std::array<double, 5> array() const { return {Ms, a, alpha_w, k, c}; }
};

struct JaPhysical {
    double Ms = 0, a = 0, alpha_w = 0, k = 0, c = 0;
};

struct JaState {
    double H = 0;
    double M = 0;
};

/// Anhysteretic magnetization Ms * L(He / a).
double ja_m_an(double He, double Ms, double a);

JaPhysical ja_params_from_theta(const std::array<double, 5>& theta, const JaScales& eta);

/// Inverse of the sigmoid mapping. Each parameter must lie in (0, eta).
std::array<double, 5> ja_theta_from_params(const JaPhysical& p, const JaScales& eta);

/// dM/dH for a flux step of sign(dB). Returns 0 when dB == 0.
double ja_dmdh(const JaState& s, double dB, const JaPhysical& p);

/// Explicit Euler step of the inverse model. tau only sets dB/dt, which
/// multiplies back to the flux increment, so the update uses dB directly.
JaState ja_step_euler(const JaState& s, double B_k, double B_next, double tau, const JaPhysical& p);

/// Field increment for one step on state (H, B_k/mu0 - H).
double ja_delta_h(double H, double B_k, double B_next, const JaPhysical& p);

struct PinnResidual {
    std::vector<double> e;
    double loss = 0;
};

/// e_k = dH_JA(H_{k-1}, B_{k-1}, B_k) - (H_k - H_{k-1}), loss = RMS of e.
PinnResidual pinn_ja_residual(std::span<const double> H, std::span<const double> B, const JaPhysical& p);

// ---------------------------------------------------------------------------
// Batched versions usable on eager tensors and on graph variables.

template <typename V>
struct JaCoeffs {
    V Ms, a, alpha_w, k, c;
};

/// theta is (r x 5); each coefficient comes back as (r x 1).
template <typename T, typename V>
JaCoeffs<V> ja_coeffs(const V& theta, const JaScales& eta) {
    const auto e = eta.array();
    Tensor<T> scale(1, 5);
    for (std::size_t i = 0; i < 5; ++i) scale[i] = static_cast<T>(e[i]);
    const V z = sigmoid(theta) * scale;
    using diff::slice_cols;
    return {slice_cols(z, 0, 1), slice_cols(z, 1, 1), slice_cols(z, 2, 1), slice_cols(z, 3, 1), slice_cols(z, 4, 1)};
}

/// Field increment for a batch. H is (r x 1) in A/m, B_k and B_next are
/// (r x 1) in tesla. The direction masks come from the data; the
/// magnetization mask is recorded so replays re-evaluate it.
template <typename T, typename V>
V ja_delta_h(const V& H, const Tensor<T>& B_k, const Tensor<T>& B_next, const JaCoeffs<V>& p) {
    const T inv_mu0 = static_cast<T>(1.0 / kMu0);
    const std::size_t r = B_k.rows();
    Tensor<T> b_mu0(r, 1), dB(r, 1), delta(r, 1), still(r, 1);
    for (std::size_t i = 0; i < r; ++i) {
        b_mu0[i] = B_k[i] * inv_mu0;
        dB[i] = B_next[i] - B_k[i];
        // A zero step keeps delta = 1 so the unused branch stays finite.
        delta[i] = dB[i] < T(0) ? T(-1) : T(1);
        still[i] = dB[i] == T(0) ? T(1) : T(0);
    }
    const V M = b_mu0 - H;
    const V He = H + p.alpha_w * M;
    const V x = He / p.a;
    const V M_an = p.Ms * langevin(x);
    const V dM_an = p.Ms / p.a * langevin_deriv(x);
    const V gap = M_an - M;
    const V irr = select(greater(T(0), gap * delta), T(0), gap);
    const V N = irr + p.c * p.k * delta * dM_an;
    const V D = select(still, T(0), N / (p.k * delta - p.alpha_w * N));
    return dB * inv_mu0 * (T(1) - D / (T(1) + D));
}

/// One coupled step: the GRU emits g_k, its first five elements become JA
/// parameters, and the JA step advances H.
template <typename T, typename V>
std::pair<V, V> gru_jadp_step(const V& x, const V& g_prev, const cells::GruWeights<V>& w, const JaScales& eta,
                              const V& H, const Tensor<T>& B_k, const Tensor<T>& B_next) {
    const V g = cells::gru_step(x, g_prev, w);
    const auto coeffs = ja_coeffs<T>(diff::slice_cols(g, 0, 5), eta);
    return {H + ja_delta_h<T>(H, B_k, B_next, coeffs), g};
}

/// JA step plus a GRU-provided increment. Only meaningful in double
/// precision: the increments are tiny against B/mu0.
template <typename T, typename V>
V ja_residual_step(const V& ja_next, const V& gru_increment) {
    if constexpr (std::is_same_v<T, float>) {
        throw ConfigError("JA with residual GRU requires double precision");
    } else {
        return ja_next + gru_increment;
    }
}

/// Per-row RMS of the JA mismatch along a trajectory. H is (r x (n+1)) in
/// A/m with column 0 the anchor; B matches it in tesla. Residuals are divided
/// by `scale` before squaring.
template <typename T, typename V>
V pinn_ja_loss(const V& H, const Tensor<T>& B, const JaCoeffs<V>& p, T scale) {
    using diff::slice_cols;
    const std::size_t n = B.cols() - 1;
    std::vector<V> e;
    e.reserve(n);
    auto bcol = [&](std::size_t j) {
        Tensor<T> c(B.rows(), 1);
        for (std::size_t i = 0; i < B.rows(); ++i) c(i, 0) = B(i, j);
        return c;
    };
    for (std::size_t k = 1; k <= n; ++k) {
        const V prev = slice_cols(H, k - 1, 1);
        const V cur = slice_cols(H, k, 1);
        e.push_back((ja_delta_h<T>(prev, bcol(k - 1), bcol(k), p) - (cur - prev)) / scale);
    }
    const V all = diff::concat_cols(std::span<const V>(e));
    return sqrt(sum_cols(square(all)) / static_cast<T>(n));
}

}  // namespace hsk::physics
