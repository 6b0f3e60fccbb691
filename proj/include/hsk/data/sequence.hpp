#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsk/diff/tensor.hpp"

namespace hsk::data {

inline constexpr double kDefaultTau = 62.5e-9;  // 16 MHz sampling

/// One raw measurement. B in tesla, H in A/m, temperature in degrees C.
struct MeasuredSequence {
    std::string id;
    std::string material;
    std::vector<double> B;
    std::vector<double> H;
    double temperature_C = 25.0;
    double tau_s = kDefaultTau;
    std::optional<double> f_sw_Hz;  // metadata only, never a model input

    std::size_t size() const { return B.size(); }
    void validate() const;
};

struct NormConstants {
    double H_max = 1.0;
    double B_max = 1.0;
    double theta_max = 1.0;

    void validate() const;
};

/// Sample indices: warmup is [k0, k1), prediction is [k1, k2], and k3 is the
/// last sample of the full sequence.
struct PredictionTask {
    std::size_t k0 = 0, k1 = 1, k2 = 2, k3 = 2;

    void validate(std::size_t length) const;
    std::size_t window() const { return k2 - k0 + 1; }
    std::size_t warmup() const { return k1 - k0; }
    std::size_t horizon() const { return k2 - k1 + 1; }
};

/// Whole sequence: warmup over the first `warmup` samples, predict the rest.
PredictionTask full_task(std::size_t length, std::size_t warmup);

/// Max-abs per signal over the training sequences.
NormConstants compute_norm_constants(std::span<const MeasuredSequence> train);

double rms(std::span<const double> v);

/// Role swap used for the flux-from-field direction: B and H trade places.
MeasuredSequence swap_roles(const MeasuredSequence& s);

/// Rows (B~, dB~, d2B~, theta~) over [k0, k2] with tau' = 1: plain backward
/// differences of the normalized flux. The first column of dB~ and the first
/// two of d2B~ copy the first interior value.
diff::Tensor<double> featurize(const MeasuredSequence& s, const PredictionTask& task, const NormConstants& norm);

}  // namespace hsk::data
