#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsk/data/window.hpp"
#include "hsk/diff/eager.hpp"
#include "hsk/diff/graph.hpp"

namespace hsk::objectives {

using diff::Tensor;

/// Weighted RMSE over a prediction window. `b_prev` is the last warmup
/// sample of B~; without it the first weight is zero.
double loss_rmse(std::span<const double> h, std::span<const double> h_hat, std::span<const double> b,
                 std::optional<double> b_prev = std::nullopt);

/// Scale by H_max over the RMS of the full target sequence.
double loss_weighted(double l_rmse, double h_max, std::span<const double> h_full);

double sre(std::span<const double> h_hat, std::span<const double> h);

/// Energy error of the predicted window [k1, k1 + h_hat.size()) relative to
/// the full-sequence loop energy. ΔB_k = B_k - B_{k-1}, ΔB_0 = 0.
double nere(std::span<const double> h_hat, std::span<const double> h_full, std::span<const double> b_full,
            std::size_t k1);

double mse(std::span<const double> h_hat, std::span<const double> h);
double mae(std::span<const double> h_hat, std::span<const double> h);
double wce(std::span<const double> h_hat, std::span<const double> h);

/// Nearest-rank percentile, p in (0, 100].
double percentile(std::vector<double> v, double p);
double mean(std::span<const double> v);
double median(std::vector<double> v);

struct SequenceMetrics {
    std::string id;
    double sre = 0, nere = 0, mse = 0, mae = 0, wce = 0;
};

struct Aggregate {
    double mean = 0;
    double p95 = 0;
};

struct MetricReport {
    std::vector<SequenceMetrics> sequences;

    Aggregate sre() const;
    Aggregate nere() const;
    Aggregate mse() const;
    Aggregate mae() const;
    Aggregate wce() const;

    nlohmann::json to_json() const;
    /// One row per sequence followed by `mean` and `p95` rows.
    std::string to_csv() const;
};

/// Per-row loss L' for a batch of rollouts: (r x 1), given normalized
/// predictions (r x horizon).
template <typename T, typename V>
V loss_rows(const V& pred, const data::Window<T>& w) {
    const auto target = w.target();
    const auto weights = w.loss_weights();
    Tensor<T> scale(w.rows, 1);
    for (std::size_t r = 0; r < w.rows; ++r) {
        if (!(w.rms(r, 0) > T(0))) throw DataError("target RMS is zero for batch row " + std::to_string(r));
        scale(r, 0) = w.y_max / w.rms(r, 0);
    }
    const T inv_n = T(1) / static_cast<T>(w.horizon());
    const V e = pred - target;
    return sqrt(sum_cols(square(e) * weights) * inv_n) * scale;
}

}  // namespace hsk::objectives
