#include "hsk/training/train.hpp"

#include <algorithm>
#include <exception>
#include <random>

#include "hsk/data/batching.hpp"
#include "hsk/data/window.hpp"
#include "hsk/heads/rollout.hpp"
#include "hsk/training/gradient.hpp"

namespace hsk::training {

void TrainConfig::validate() const {
    model_config().validate();
    if (subseq_len < warmup_length + 2) throw ConfigError("subsequence length must exceed warmup length + 1");
    if (batch_size == 0) throw ConfigError("batch size must be >= 1");
    if (epochs == 0) throw ConfigError("epochs must be >= 1");
    if (!(lr >= 0)) throw ConfigError("learning rate must be >= 0");
    if (!(clip >= 0)) throw ConfigError("clip norm must be >= 0");
    if (!(lambda_w >= 0)) throw ConfigError("lambda_w must be >= 0");
    if (chunk == 0) throw ConfigError("chunk must be >= 1");
    if (precision == Precision::Single && uses_ja(archetype)) {
        throw ConfigError(hsk::to_string(archetype) + " integrates the JA model and requires double precision");
    }
}

heads::ModelConfig TrainConfig::model_config() const {
    heads::ModelConfig m;
    m.archetype = archetype;
    m.d_g = d_g;
    m.d_x = d_x;
    m.warmup_length = warmup_length;
    m.eta = eta;
    return m;
}

AdamConfig TrainConfig::adam() const {
    AdamConfig a;
    a.lr = lr;
    a.clip = clip;
    return a;
}

nlohmann::json TrainConfig::to_json() const {
    return {{"archetype", hsk::to_string(archetype)},
            {"hidden_size", d_g},
            {"d_x", d_x},
            {"subseq_len", subseq_len},
            {"batch_size", batch_size},
            {"epochs", epochs},
            {"lr", lr},
            {"clip", clip},
            {"seed", seed},
            {"precision", diff::to_string(precision)},
            {"lambda_w", lambda_w},
            {"warmup_len", warmup_length},
            {"patience", patience},
            {"chunk", chunk},
            {"eta", eta.array()}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j, TrainConfig c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "archetype") c.archetype = parse_archetype(v.get<std::string>());
            else if (key == "hidden_size") c.d_g = v.get<std::size_t>();
            else if (key == "d_x") c.d_x = v.get<std::size_t>();
            else if (key == "subseq_len") c.subseq_len = v.get<std::size_t>();
            else if (key == "batch_size") c.batch_size = v.get<std::size_t>();
            else if (key == "epochs") c.epochs = v.get<std::size_t>();
            else if (key == "lr") c.lr = v.get<double>();
            else if (key == "clip") c.clip = v.get<double>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "precision") c.precision = diff::parse_precision(v.get<std::string>());
            else if (key == "lambda_w") c.lambda_w = v.get<double>();
            else if (key == "warmup_len") c.warmup_length = v.get<std::size_t>();
            else if (key == "patience") c.patience = v.get<std::size_t>();
            else if (key == "chunk") c.chunk = v.get<std::size_t>();
            else if (key == "eta") {
                const auto e = v.get<std::array<double, 5>>();
                c.eta = {e[0], e[1], e[2], e[3], e[4]};
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

std::uint64_t epoch_seed(std::uint64_t seed, std::size_t epoch) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(epoch), 0x68736bu};
    std::mt19937_64 rng(seq);
    return rng();
}

template <typename T>
std::vector<double> predict_sequence(const heads::Model<T>& m, const data::MeasuredSequence& s,
                                     const data::NormConstants& norm, std::size_t warmup) {
    const auto w = data::full_window<T>(s, warmup, norm, m.cfg.d_x);
    const auto r = heads::predict(m, w);
    std::vector<double> out(r.pred.cols());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = static_cast<double>(r.pred(0, j));
    return out;
}

template <typename T>
objectives::SequenceMetrics sequence_metrics(const data::MeasuredSequence& s, std::span<const double> pred,
                                             const data::NormConstants& norm, std::size_t warmup) {
    const std::span<const double> H(s.H);
    const auto truth = H.subspan(warmup);
    std::vector<double> pn(pred.size()), tn(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        pn[i] = pred[i] / norm.H_max;
        tn[i] = truth[i] / norm.H_max;
    }
    objectives::SequenceMetrics m;
    m.id = s.id;
    m.sre = objectives::sre(pred, truth);
    m.nere = objectives::nere(pred, H, s.B, warmup);
    m.mse = objectives::mse(pn, tn);
    m.mae = objectives::mae(pn, tn);
    m.wce = objectives::wce(pn, tn);
    return m;
}

template <typename T>
objectives::MetricReport evaluate(const heads::Model<T>& m, std::span<const data::MeasuredSequence> seqs,
                                  const data::NormConstants& norm, std::size_t warmup) {
    if (seqs.empty()) throw DataError("evaluate: no sequences");
    objectives::MetricReport rep;
    rep.sequences.resize(seqs.size());
    std::vector<std::exception_ptr> errors(seqs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        try {
            const auto pred = predict_sequence(m, seqs[i], norm, warmup);
            rep.sequences[i] = sequence_metrics<T>(seqs[i], pred, norm, warmup);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rep;
}

template <typename T>
TrainResult<T> train(const TrainConfig& cfg, std::span<const data::MeasuredSequence> train_set,
                     std::span<const data::MeasuredSequence> eval_set, const data::NormConstants& norm,
                     const std::function<void(const EpochLog&, const heads::Model<T>&)>& on_epoch) {
    cfg.validate();
    if (train_set.empty()) throw DataError("training set is empty");
    TrainResult<T> res;
    heads::Model<T> model = heads::make_model<T>(cfg.model_config(), cfg.seed);
    AdamState<T> state;
    const AdamConfig adam = cfg.adam();
    std::size_t since_best = 0;
    res.model = model;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto batches = data::make_minibatches(train_set, cfg.subseq_len, cfg.batch_size, cfg.warmup_length,
                                                    epoch_seed(cfg.seed, epoch));
        if (batches.empty()) {
            throw DataError("no full mini-batch of " + std::to_string(cfg.batch_size) + " subsequences of length " +
                            std::to_string(cfg.subseq_len));
        }
        double total = 0;
        for (std::size_t bi = 0; bi < batches.size(); ++bi) {
            LossGrad<T> lg;
            try {
                const auto w = data::make_window<T>(train_set, batches[bi], norm, cfg.d_x);
                lg = batch_gradient(model, w, cfg.lambda_w, cfg.chunk);
                if (!std::isfinite(static_cast<double>(lg.loss))) throw NonFiniteError("loss is not finite");
                optimizer_step(model.params, std::span<const Tensor<T>>(lg.grads), state, adam);
            } catch (const NonFiniteError& e) {
                throw NonFiniteError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                                     std::to_string(bi) + ": " + e.what());
            }
            total += static_cast<double>(lg.loss);
        }
        EpochLog log{epoch, total / static_cast<double>(batches.size()), -1};
        if (!eval_set.empty()) {
            log.eval_sre = evaluate(model, eval_set, norm, cfg.warmup_length).sre().mean;
            if (res.best_epoch == 0 || log.eval_sre < res.best_eval_sre) {
                res.best_eval_sre = log.eval_sre;
                res.best_epoch = epoch;
                res.model = model;
                since_best = 0;
            } else {
                ++since_best;
            }
        } else {
            res.best_epoch = epoch;
            res.model = model;
        }
        res.curve.push_back(log);
        if (on_epoch) on_epoch(log, model);
        if (cfg.patience > 0 && since_best >= cfg.patience) break;
    }
    return res;
}

#define HSK_INSTANTIATE(T)                                                                                         \
    template TrainResult<T> train<T>(const TrainConfig&, std::span<const data::MeasuredSequence>,                 \
                                     std::span<const data::MeasuredSequence>, const data::NormConstants&,         \
                                     const std::function<void(const EpochLog&, const heads::Model<T>&)>&);                                \
    template objectives::MetricReport evaluate<T>(const heads::Model<T>&, std::span<const data::MeasuredSequence>, \
                                                  const data::NormConstants&, std::size_t);                        \
    template std::vector<double> predict_sequence<T>(const heads::Model<T>&, const data::MeasuredSequence&,        \
                                                     const data::NormConstants&, std::size_t);                     \
    template objectives::SequenceMetrics sequence_metrics<T>(const data::MeasuredSequence&, std::span<const double>, \
                                                             const data::NormConstants&, std::size_t);

HSK_INSTANTIATE(float)
HSK_INSTANTIATE(double)

#undef HSK_INSTANTIATE

}  // namespace hsk::training
