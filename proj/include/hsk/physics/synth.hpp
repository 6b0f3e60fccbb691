#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hsk/data/sequence.hpp"
#include "hsk/physics/ja.hpp"

namespace hsk::physics {

/// Synthetic measurement generator: a flux waveform drives the inverse JA
/// model at fixed parameters. An optional rate term kappa * dB/dt adds an
/// eddy-current-like component the static models cannot represent.
struct SynthConfig {
    std::size_t count = 20;
    std::size_t length = 512;
    std::size_t samples_per_period_min = 128;
    std::size_t samples_per_period_max = 256;
    std::size_t frequency_levels = 4;  // distinct switching frequencies between the two bounds
    double amplitude_min = 0.05;  // tesla
    double amplitude_max = 0.20;
    double third_harmonic_max = 0.2;  // relative amplitude
    std::size_t settle_periods = 3;
    double tau = 62.5e-9;
    double eddy_kappa = 0.0;  // A/m per T/s
    double temperature_C = 25.0;
    std::string material = "SYNTH";
    JaPhysical ja{3.5e5, 25.0, 5e-5, 30.0, 0.3};
    std::uint64_t seed = 1;
};

std::vector<data::MeasuredSequence> synth_ja_dataset(const SynthConfig& cfg);

}  // namespace hsk::physics
