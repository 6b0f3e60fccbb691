#pragma once

// Small synthetic datasets and window batches shared by the test binaries.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hsk/data/batching.hpp"
#include "hsk/data/window.hpp"
#include "hsk/diff/gradcheck.hpp"
#include "hsk/heads/model.hpp"
#include "hsk/physics/synth.hpp"
#include "hsk/training/gradient.hpp"

namespace fixture {

inline std::vector<hsk::data::MeasuredSequence> synth(std::size_t count, std::size_t length, std::uint64_t seed = 1) {
    hsk::physics::SynthConfig c;
    c.count = count;
    c.length = length;
    c.seed = seed;
    return hsk::physics::synth_ja_dataset(c);
}

/// `rows` windows of `len` samples with `warmup` warmup samples, cut from
/// consecutive synthetic sequences at staggered offsets.
template <typename T>
hsk::data::Window<T> window(std::size_t rows, std::size_t len, std::size_t warmup, std::size_t d_x = 4,
                            std::uint64_t seed = 1) {
    static thread_local std::vector<hsk::data::MeasuredSequence> seqs;
    seqs = synth(rows, 4 * len + 16, seed);
    const auto norm = hsk::data::compute_norm_constants(seqs);
    std::vector<hsk::data::WindowRow> rs;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t k0 = 7 + 5 * r;
        rs.push_back({r, {k0, k0 + warmup, k0 + len - 1, seqs[r].size() - 1}});
    }
    return hsk::data::make_window<T>(seqs, rs, norm, d_x);
}

/// Worst relative mismatch between the tape gradient of the summed row
/// losses and five-point central differences, over all parameters of `m`.
/// Entries more than six decades below the largest one are measured
/// against 1e-6 of that largest entry.
inline double rollout_grad_error(const hsk::heads::Model<double>& m, const hsk::data::Window<double>& w,
                                 double lambda_w = 0.0, double eps = 1e-3) {
    hsk::diff::Graph<double> g;
    std::vector<hsk::diff::Var<double>> p;
    for (const auto& q : m.params) p.push_back(g.parameter(q.value, q.name));
    const auto rows = hsk::training::row_losses<double>(m.cfg, std::span<const hsk::diff::Var<double>>(p), w, lambda_w);
    const auto loss = hsk::diff::sum(rows);
    return hsk::diff::finite_diff_check(g, loss, eps, hsk::diff::Stencil::FivePoint, 1e-6);
}

/// Perturb every parameter by N(0, scale^2).
template <typename T>
void jitter(hsk::heads::Model<T>& m, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, scale);
    for (auto& q : m.params) {
        for (auto& v : q.value.values()) v += static_cast<T>(n(rng));
    }
}

}  // namespace fixture
