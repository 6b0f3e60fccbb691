#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsk/data/sequence.hpp"
#include "hsk/diff/graph.hpp"
#include "hsk/heads/model.hpp"
#include "hsk/objectives/metrics.hpp"
#include "hsk/training/optimizer.hpp"

namespace hsk::training {

using diff::Precision;

struct TrainConfig {
    Archetype archetype = Archetype::GruP;
    std::size_t d_g = 8;
    std::size_t d_x = 4;
    std::size_t subseq_len = 256;
    std::size_t batch_size = 32;
    std::size_t epochs = 100;
    double lr = 1e-3;
    double clip = 1.0;
    std::uint64_t seed = 0;
    Precision precision = Precision::Double;
    double lambda_w = 0.0;
    std::size_t warmup_length = 16;
    std::size_t patience = 20;  // epochs without eval improvement; 0 disables early stopping
    std::size_t chunk = 4;      // batch rows per gradient task
    physics::JaScales eta;

    void validate() const;
    heads::ModelConfig model_config() const;
    AdamConfig adam() const;

    nlohmann::json to_json() const;
    /// Keys missing from `j` keep the values already in `base`.
    static TrainConfig from_json(const nlohmann::json& j, TrainConfig base);
    static TrainConfig from_json(const nlohmann::json& j) { return from_json(j, TrainConfig{}); }
};

struct EpochLog {
    std::size_t epoch = 0;
    double train_loss = 0;
    double eval_sre = -1;  // -1 without an eval set
};

template <typename T>
struct TrainResult {
    heads::Model<T> model;  // best-eval model, or the last one without an eval set
    std::vector<EpochLog> curve;
    std::size_t best_epoch = 0;
    double best_eval_sre = -1;
};

/// Seed for the mini-batch shuffle of one epoch.
std::uint64_t epoch_seed(std::uint64_t seed, std::size_t epoch);

template <typename T>
TrainResult<T> train(const TrainConfig& cfg, std::span<const data::MeasuredSequence> train_set,
                     std::span<const data::MeasuredSequence> eval_set, const data::NormConstants& norm,
                     const std::function<void(const EpochLog&, const heads::Model<T>&)>& on_epoch = {});

/// Whole-sequence rollouts after `warmup` samples. H-domain metrics SRE and
/// NERE are physical; MSE, MAE and WCE use normalized H. Sequences are
/// processed in parallel; the report keeps input order.
template <typename T>
objectives::MetricReport evaluate(const heads::Model<T>& m, std::span<const data::MeasuredSequence> seqs,
                                  const data::NormConstants& norm, std::size_t warmup);

/// Physical-unit predictions for one sequence, one per sample in [warmup, n).
template <typename T>
std::vector<double> predict_sequence(const heads::Model<T>& m, const data::MeasuredSequence& s,
                                     const data::NormConstants& norm, std::size_t warmup);

template <typename T>
objectives::SequenceMetrics sequence_metrics(const data::MeasuredSequence& s, std::span<const double> pred,
                                             const data::NormConstants& norm, std::size_t warmup);

}  // namespace hsk::training
