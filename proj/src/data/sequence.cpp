#include "hsk/data/sequence.hpp"

#include <cmath>
#include <string>

#include "hsk/error.hpp"

namespace hsk::data {

void MeasuredSequence::validate() const {
    if (B.size() != H.size()) {
        throw DataError("sequence '" + id + "': B has " + std::to_string(B.size()) + " samples, H has " +
                        std::to_string(H.size()));
    }
    if (B.size() < 2) throw DataError("sequence '" + id + "': needs at least 2 samples");
    if (!(tau_s > 0.0)) throw DataError("sequence '" + id + "': sampling period must be positive");
    for (std::size_t k = 0; k < B.size(); ++k) {
        if (!std::isfinite(B[k]) || !std::isfinite(H[k])) {
            throw DataError("sequence '" + id + "': non-finite sample at k=" + std::to_string(k));
        }
    }
}

void NormConstants::validate() const {
    if (!(H_max > 0.0) || !(B_max > 0.0) || !(theta_max > 0.0)) {
        throw DataError("normalization constants must be positive");
    }
}

void PredictionTask::validate(std::size_t length) const {
    if (!(k0 < k1 && k1 <= k2 && k2 <= k3 && k3 < length)) {
        throw DataError("invalid task (" + std::to_string(k0) + ", " + std::to_string(k1) + ", " +
                        std::to_string(k2) + ", " + std::to_string(k3) + ") for length " + std::to_string(length));
    }
}

PredictionTask full_task(std::size_t length, std::size_t warmup) {
    PredictionTask t{0, warmup, length - 1, length - 1};
    t.validate(length);
    return t;
}

NormConstants compute_norm_constants(std::span<const MeasuredSequence> train) {
    if (train.empty()) throw DataError("cannot normalize an empty training set");
    NormConstants n{0.0, 0.0, 0.0};
    for (const auto& s : train) {
        for (double v : s.H) n.H_max = std::max(n.H_max, std::abs(v));
        for (double v : s.B) n.B_max = std::max(n.B_max, std::abs(v));
        n.theta_max = std::max(n.theta_max, std::abs(s.temperature_C));
    }
    if (n.H_max == 0.0) throw DataError("H is identically zero over the training set");
    if (n.B_max == 0.0) throw DataError("B is identically zero over the training set");
    if (n.theta_max == 0.0) throw DataError("temperature is identically zero over the training set");
    return n;
}

double rms(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc / static_cast<double>(v.size()));
}

MeasuredSequence swap_roles(const MeasuredSequence& s) {
    MeasuredSequence out = s;
    std::swap(out.B, out.H);
    return out;
}

diff::Tensor<double> featurize(const MeasuredSequence& s, const PredictionTask& task, const NormConstants& norm) {
    task.validate(s.size());
    const std::size_t L = task.window();
    if (L < 3) throw DataError("featurize: window of " + std::to_string(L) + " samples, need at least 3");
    diff::Tensor<double> X(4, L);
    for (std::size_t j = 0; j < L; ++j) X(0, j) = s.B[task.k0 + j] / norm.B_max;
    for (std::size_t j = 1; j < L; ++j) X(1, j) = X(0, j) - X(0, j - 1);
    X(1, 0) = X(1, 1);
    for (std::size_t j = 2; j < L; ++j) X(2, j) = X(1, j) - X(1, j - 1);
    X(2, 0) = X(2, 1) = X(2, 2);
    const double theta = s.temperature_C / norm.theta_max;
    for (std::size_t j = 0; j < L; ++j) X(3, j) = theta;
    return X;
}

}  // namespace hsk::data
