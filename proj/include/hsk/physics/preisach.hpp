#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hsk/diff/eager.hpp"
#include "hsk/diff/graph.hpp"

namespace hsk::physics {

using diff::Tensor;

inline constexpr double kPreisachSharpness = 1e-3;

/// Static grid of hysteron thresholds on [lo, hi]^2. Each hysteron switches
/// up when the input rises past alpha and down when it falls past beta, with
/// alpha >= beta.
struct PreisachGrid {
    std::vector<double> alpha;
    std::vector<double> beta;

    std::size_t size() const { return alpha.size(); }

    /// `levels` equally spaced thresholds per axis, levels * (levels + 1) / 2
    /// hysterons including the diagonal.
    static PreisachGrid make(std::size_t levels, double lo = -1.0, double hi = 1.0);
};

/// Smoothed relay:
///   rising  (h > h_prev):  min(g + 1 + tanh((h - alpha) / T),  1)
///   falling (h <= h_prev): max(g - 1 - tanh((beta - h) / T),  -1)
double preisach_hysteron(double h, double h_prev, double g_prev, double alpha, double beta, double T);

struct PreisachParams {
    PreisachGrid grid;
    std::vector<double> mu;
    double w0 = 0, w1 = 0, w2 = 0;
    double T = kPreisachSharpness;
};

/// Output for every sample of `u`, hysterons starting at -1 before sample 0.
std::vector<double> preisach_predict(std::span<const double> u, const PreisachParams& p);

/// Hysteron states for each column of u (r x L); entry j is (r x N). Column 0
/// is the initial state -1.
template <typename T>
std::vector<Tensor<T>> preisach_states(const Tensor<T>& u, const PreisachGrid& grid, double sharpness) {
    const std::size_t r = u.rows(), L = u.cols(), N = grid.size();
    std::vector<Tensor<T>> out;
    out.reserve(L);
    out.emplace_back(r, N, T(-1));
    for (std::size_t j = 1; j < L; ++j) {
        Tensor<T> g(r, N);
        const Tensor<T>& prev = out.back();
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t n = 0; n < N; ++n) {
                g(i, n) = static_cast<T>(preisach_hysteron(u(i, j), u(i, j - 1), prev(i, n), grid.alpha[n],
                                                           grid.beta[n], sharpness));
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

/// w2 * (gamma mu^T) + w1 u + w0 for one column; gamma (r x N), u (r x 1).
template <typename T, typename V>
V preisach_output(const Tensor<T>& gamma, const Tensor<T>& u, const V& w0, const V& w1, const V& w2, const V& mu) {
    return w2 * diff::matmul_nt(diff::lift(mu, gamma), mu) + w1 * u + w0;
}

}  // namespace hsk::physics
