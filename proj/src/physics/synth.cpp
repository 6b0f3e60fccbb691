#include "hsk/physics/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace hsk::physics {

std::vector<data::MeasuredSequence> synth_ja_dataset(const SynthConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<data::MeasuredSequence> out;
    out.reserve(cfg.count);
    for (std::size_t i = 0; i < cfg.count; ++i) {
        const double amp = cfg.amplitude_min + (cfg.amplitude_max - cfg.amplitude_min) * unit(rng);
        const std::size_t levels = std::max<std::size_t>(cfg.frequency_levels, 1);
        const auto level = std::min(static_cast<std::size_t>(unit(rng) * static_cast<double>(levels)), levels - 1);
        const double frac = levels == 1 ? 0.0 : static_cast<double>(level) / static_cast<double>(levels - 1);
        const double spp = static_cast<double>(cfg.samples_per_period_min) +
                           static_cast<double>(cfg.samples_per_period_max - cfg.samples_per_period_min) * frac;
        const double h3 = cfg.third_harmonic_max * unit(rng);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        const double w = 2.0 * std::numbers::pi / spp;
        const auto settle = static_cast<std::size_t>(std::ceil(spp * static_cast<double>(cfg.settle_periods)));
        auto flux = [&](double k) {
            const double t = w * k + phase;
            return amp * (std::sin(t) + h3 * std::sin(3.0 * t)) / (1.0 + h3);
        };

        JaState s{0.0, flux(0.0) / kMu0};
        data::MeasuredSequence seq;
        char id[32];
        std::snprintf(id, sizeof id, "synth_%04zu", i);
        seq.id = id;
        seq.material = cfg.material;
        seq.tau_s = cfg.tau;
        seq.temperature_C = cfg.temperature_C;
        seq.f_sw_Hz = 1.0 / (spp * cfg.tau);
        const std::size_t total = settle + cfg.length;
        double B_prev = flux(0.0);
        for (std::size_t k = 1; k < total; ++k) {
            const double B = flux(static_cast<double>(k));
            s = ja_step_euler(s, B_prev, B, cfg.tau, cfg.ja);
            if (k >= settle) {
                seq.B.push_back(B);
                seq.H.push_back(s.H + cfg.eddy_kappa * (B - B_prev) / cfg.tau);
            }
            B_prev = B;
        }
        out.push_back(std::move(seq));
    }
    return out;
}

}  // namespace hsk::physics
