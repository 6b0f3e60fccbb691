#include "hsk/cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsk/cells/cells.hpp"
#include "hsk/data/batching.hpp"
#include "hsk/data/io.hpp"
#include "hsk/physics/synth.hpp"
#include "hsk/training/checkpoint.hpp"
#include "hsk/training/sweep.hpp"
#include "hsk/training/train.hpp"
#include "hsk/util/io.hpp"

namespace hsk::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using training::Checkpoint;
using training::TrainConfig;

namespace {

constexpr std::array<double, 3> kSplit{0.8, 0.1, 0.1};

struct Flags {
    std::optional<std::string> material, archetype, precision, config, data;
    std::optional<std::size_t> hidden, epochs, batch, subseq, warmup, patience;
    std::optional<std::uint64_t> seed;
    std::optional<double> lr, lambda_w, clip;
    std::string out;
};

void add_data_flags(CLI::App* c, Flags& f) {
    c->add_option("--material", f.material, "Material label in the dataset manifest");
    c->add_option("--data", f.data, "Dataset root (default: $HSK_DATA_DIR)");
}

void add_train_flags(CLI::App* c, Flags& f) {
    c->add_option("--config", f.config, "JSON config file; flags override it");
    c->add_option("--archetype", f.archetype, "Model head, e.g. GRU-P");
    c->add_option("--hidden-size", f.hidden, "Hidden state size d_g (grid levels for PREISACH)");
    c->add_option("--seed", f.seed, "Seed for init, split and batching");
    c->add_option("--epochs", f.epochs);
    c->add_option("--lr", f.lr, "Adam learning rate");
    c->add_option("--batch-size", f.batch);
    c->add_option("--subseq-len", f.subseq, "Training subsequence length l");
    c->add_option("--warmup-len", f.warmup);
    c->add_option("--precision", f.precision, "single or double");
    c->add_option("--lambda-w", f.lambda_w, "PINN-JA regularizer weight");
    c->add_option("--clip", f.clip, "Global gradient-norm clip");
    c->add_option("--patience", f.patience, "Early-stopping patience in epochs (0 disables)");
}

/// Keys a config file may carry besides the training config.
struct FileConfig {
    TrainConfig train;
    std::optional<std::string> material, data;
};

FileConfig read_config(const Flags& f) {
    FileConfig fc;
    if (!f.config) return fc;
    json j;
    try {
        j = json::parse(util::read_file(*f.config));
    } catch (const json::exception& e) {
        throw ConfigError(*f.config + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(*f.config + ": expected a JSON object");
    if (j.contains("material")) fc.material = j["material"].get<std::string>(), j.erase("material");
    if (j.contains("data_dir")) fc.data = j["data_dir"].get<std::string>(), j.erase("data_dir");
    fc.train = TrainConfig::from_json(j);
    return fc;
}

TrainConfig resolve(const Flags& f, const FileConfig& fc) {
    TrainConfig c = fc.train;
    if (f.archetype) c.archetype = parse_archetype(*f.archetype);
    if (f.hidden) c.d_g = *f.hidden;
    if (f.seed) c.seed = *f.seed;
    if (f.epochs) c.epochs = *f.epochs;
    if (f.lr) c.lr = *f.lr;
    if (f.batch) c.batch_size = *f.batch;
    if (f.subseq) c.subseq_len = *f.subseq;
    if (f.warmup) c.warmup_length = *f.warmup;
    if (f.precision) c.precision = diff::parse_precision(*f.precision);
    if (f.lambda_w) c.lambda_w = *f.lambda_w;
    if (f.clip) c.clip = *f.clip;
    if (f.patience) c.patience = *f.patience;
    c.validate();
    return c;
}

fs::path data_root(const Flags& f, const FileConfig& fc) {
    if (f.data) return *f.data;
    if (fc.data) return *fc.data;
    if (const char* env = std::getenv("HSK_DATA_DIR"); env && *env) return env;
    throw ConfigError("no dataset root: pass --data or set HSK_DATA_DIR");
}

std::string material(const Flags& f, const FileConfig& fc) {
    if (f.material) return *f.material;
    if (fc.material) return *fc.material;
    throw ConfigError("--material is required");
}

/// Combined hash over the files of one material.
std::string dataset_hash(const fs::path& root, const std::string& mat) {
    const auto m = data::DatasetManifest::read(root);
    const auto it = m.materials.find(mat);
    if (it == m.materials.end()) throw DataError("material '" + mat + "' not in " + root.string());
    std::uint64_t h = util::fnv1a("");
    for (const auto& rel : it->second) {
        fs::path csv = root / rel;
        fs::path side = csv;
        side.replace_extension(".json");
        h = util::fnv1a(util::hash_file(csv), h);
        if (fs::exists(side)) h = util::fnv1a(util::hash_file(side), h);
    }
    return util::hex64(h);
}

class Run {
public:
    Run(std::string command, const fs::path& out) : command_(std::move(command)), out_(out) {}

    util::StagedOutput& out() { return out_; }
    json& config() { return config_; }
    void input(const std::string& key, const std::string& hash) { inputs_[key] = hash; }

    void commit() {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json outputs = json::array();
        for (const auto& p : out_.outputs()) outputs.push_back(p.string());
        outputs.push_back((out_.dest() / "run_manifest.json").string());
        json m{{"command", command_},
               {"config", config_},
               {"inputs", inputs_},
               {"toolkit_version", kVersion},
               {"outputs", outputs},
               {"wall_time_s", wall}};
        out_.write("run_manifest.json", m.dump(2) + "\n");
        out_.commit();
    }

private:
    std::string command_;
    util::StagedOutput out_;
    json config_ = json::object();
    std::map<std::string, std::string> inputs_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json split_json(const std::vector<data::MeasuredSequence>& all, const data::Split& s) {
    auto ids = [&](const std::vector<std::size_t>& idx) {
        json a = json::array();
        for (auto i : idx) a.push_back(all[i].id);
        return a;
    };
    return {{"train", ids(s.train)}, {"eval", ids(s.eval)}, {"test", ids(s.test)}};
}

std::vector<data::MeasuredSequence> select(const std::vector<data::MeasuredSequence>& all, const json& ids) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < all.size(); ++i) pos[all[i].id] = i;
    std::vector<data::MeasuredSequence> out;
    for (const auto& id : ids) {
        const auto it = pos.find(id.get<std::string>());
        if (it == pos.end()) throw DataError("sequence '" + id.get<std::string>() + "' not found in the dataset");
        out.push_back(all[it->second]);
    }
    return out;
}

std::vector<data::MeasuredSequence> pick_split(const std::vector<data::MeasuredSequence>& all,
                                               const fs::path& ck_dir, const std::string& which) {
    if (which == "all") return all;
    if (which != "train" && which != "eval" && which != "test") {
        throw ConfigError("--split must be train, eval, test or all");
    }
    const fs::path p = ck_dir / "split.json";
    if (!fs::exists(p)) throw IoError("no split.json next to the checkpoint; use --split all");
    return select(all, json::parse(util::read_file(p)).at(which));
}

fs::path checkpoint_dir(const std::string& path) {
    return fs::is_directory(path) ? fs::path(path) : fs::path(path).parent_path();
}

// ---------------------------------------------------------------------------

int cmd_ingest(const std::string& raw, const std::string& layout, const Flags& f) {
    Run run("ingest", f.out);
    const auto rep = data::ingest(raw, run.out(), layout);
    run.config() = {{"raw", raw}, {"layout", rep.layout}};
    for (const auto& p : rep.inputs) run.input(p.string(), util::hash_file(p));
    run.commit();
    for (const auto& [m, files] : rep.manifest.materials) std::cout << m << ": " << files.size() << " sequences\n";
    return 0;
}

int cmd_synth(const physics::SynthConfig& sc, bool swap, const Flags& f) {
    Run run("synth", f.out);
    auto seqs = physics::synth_ja_dataset(sc);
    data::DatasetManifest m;
    for (auto& s : seqs) {
        if (swap) s = data::swap_roles(s);
        data::stage_sequence(run.out(), sc.material, s);
        m.materials[sc.material].push_back(sc.material + "/" + s.id + ".csv");
    }
    run.out().write("manifest.json", m.to_json());
    run.config() = {{"count", sc.count},          {"length", sc.length},   {"seed", sc.seed},
                    {"eddy_kappa", sc.eddy_kappa}, {"swap_roles", swap},    {"material", sc.material}};
    run.commit();
    std::cout << sc.material << ": " << seqs.size() << " sequences\n";
    return 0;
}

template <typename T>
void train_into(Run& run, const TrainConfig& cfg, const std::vector<data::MeasuredSequence>& train,
                const std::vector<data::MeasuredSequence>& eval, const data::NormConstants& norm) {
    std::string curve = "epoch,train_loss,eval_sre\n";
    auto res = training::train<T>(cfg, train, eval, norm, [&](const training::EpochLog& l, const auto&) {
        curve += std::to_string(l.epoch) + "," + util::fmt(l.train_loss) + "," + util::fmt(l.eval_sre) + "\n";
        std::fprintf(stderr, "epoch %zu  loss %s  eval SRE %s\n", l.epoch, util::fmt(l.train_loss).c_str(),
                     util::fmt(l.eval_sre).c_str());
    });
    const auto train_rep = training::evaluate(res.model, std::span<const data::MeasuredSequence>(train), norm,
                                              cfg.warmup_length);
    Checkpoint ck{cfg, norm, res.model, res.best_epoch, res.best_eval_sre};
    training::save_checkpoint(ck, run.out());
    const auto bytes = training::parameter_blob(ck.model).size();
    run.out().write("loss_curve.csv", curve);
    json report{{"best_epoch", res.best_epoch},
                {"epochs_run", res.curve.size()},
                {"best_eval_sre", res.best_eval_sre},
                {"train_sre", train_rep.sre().mean},
                {"train_nere", train_rep.nere().mean},
                {"param_count", ck.param_count()},
                {"model_bytes", bytes}};
    run.out().write("train_report.json", report.dump(2) + "\n");
    std::cout << "params " << ck.param_count() << "  best epoch " << res.best_epoch << "  train SRE "
              << util::fmt(train_rep.sre().mean) << "  model " << bytes << " bytes\n";
}

int cmd_train(const Flags& f) {
    const auto fc = read_config(f);
    const TrainConfig cfg = resolve(f, fc);
    const fs::path root = data_root(f, fc);
    const std::string mat = material(f, fc);
    const auto all = data::load_material(root, mat);
    const auto split = data::split_dataset(all, kSplit, cfg.seed);
    const auto train = data::take<data::MeasuredSequence>(all, split.train);
    const auto eval = data::take<data::MeasuredSequence>(all, split.eval);
    const auto norm = data::compute_norm_constants(train);

    Run run("train", f.out);
    run.config() = cfg.to_json();
    run.config()["material"] = mat;
    run.input("dataset:" + mat, dataset_hash(root, mat));
    if (f.config) run.input(*f.config, util::hash_file(*f.config));
    run.out().write("split.json", split_json(all, split).dump(2) + "\n");
    if (cfg.precision == diff::Precision::Single) train_into<float>(run, cfg, train, eval, norm);
    else train_into<double>(run, cfg, train, eval, norm);
    run.commit();
    return 0;
}

Checkpoint load_checked(const std::string& path, const Flags& f) {
    auto ck = training::load_checkpoint(path);
    if (f.archetype && parse_archetype(*f.archetype) != ck.config.archetype) {
        throw ConfigError("archetype/checkpoint mismatch: requested " + *f.archetype + ", checkpoint holds " +
                          to_string(ck.config.archetype));
    }
    return ck;
}

int cmd_eval(const std::string& ck_path, const std::string& which, const Flags& f) {
    const auto ck = load_checked(ck_path, f);
    const FileConfig fc = read_config(f);
    const fs::path root = data_root(f, fc);
    const std::string mat = material(f, fc);
    const auto seqs = pick_split(data::load_material(root, mat), checkpoint_dir(ck_path), which);
    const std::size_t warmup = f.warmup.value_or(ck.config.warmup_length);

    Run run("eval", f.out);
    run.config() = {{"checkpoint", ck_path}, {"material", mat}, {"split", which}, {"warmup_len", warmup}};
    run.input("checkpoint", util::hash_file(checkpoint_dir(ck_path) / "model.bin"));
    run.input("dataset:" + mat, dataset_hash(root, mat));
    const auto rep = std::visit([&](const auto& m) { return training::evaluate(m, seqs, ck.norm, warmup); },
                                ck.model);
    run.out().write("metrics.json", rep.to_json().dump(2) + "\n");
    run.out().write("metrics.csv", rep.to_csv());
    run.commit();
    std::cout << "sequences " << seqs.size() << "  SRE avg " << util::fmt(rep.sre().mean) << " p95 "
              << util::fmt(rep.sre().p95) << "  NERE avg " << util::fmt(rep.nere().mean) << " p95 "
              << util::fmt(rep.nere().p95) << "\n";
    return 0;
}

int cmd_predict(const std::string& ck_path, const std::string& which, const std::optional<std::string>& seq_id,
                const Flags& f) {
    const auto ck = load_checked(ck_path, f);
    const FileConfig fc = read_config(f);
    const fs::path root = data_root(f, fc);
    const std::string mat = material(f, fc);
    const auto all = data::load_material(root, mat);
    const auto seqs = seq_id ? select(all, json::array({*seq_id})) : pick_split(all, checkpoint_dir(ck_path), which);
    const std::size_t warmup = f.warmup.value_or(ck.config.warmup_length);

    Run run("predict", f.out);
    run.config() = {{"checkpoint", ck_path}, {"material", mat}, {"warmup_len", warmup}};
    if (seq_id) run.config()["sequence"] = *seq_id;
    else run.config()["split"] = which;
    run.input("checkpoint", util::hash_file(checkpoint_dir(ck_path) / "model.bin"));
    run.input("dataset:" + mat, dataset_hash(root, mat));
    for (const auto& s : seqs) {
        const auto pred = std::visit(
            [&](const auto& m) { return training::predict_sequence(m, s, ck.norm, warmup); }, ck.model);
        std::string csv = "k,B,H_true,H_pred\n";
        for (std::size_t i = 0; i < pred.size(); ++i) {
            const std::size_t k = warmup + i;
            csv += std::to_string(k) + "," + util::fmt(s.B[k]) + "," + util::fmt(s.H[k]) + "," + util::fmt(pred[i]) +
                   "\n";
        }
        run.out().write(fs::path("predictions") / (s.id + ".csv"), csv);
        json side{{"sequence", s.id}, {"material", s.material}, {"tau_s", s.tau_s}, {"warmup_len", warmup}};
        run.out().write(fs::path("predictions") / (s.id + ".json"), side.dump(2) + "\n");
    }
    run.commit();
    std::cout << "predicted " << seqs.size() << " sequences\n";
    return 0;
}

template <typename N>
std::vector<N> parse_list(const std::string& s, const char* what) {
    std::vector<N> out;
    for (const auto& part : util::split(s, ',')) {
        const auto t = util::trim(part);
        if (t.empty()) continue;
        try {
            if constexpr (std::is_same_v<N, std::uint64_t>) out.push_back(std::stoull(t));
            else out.push_back(std::stoul(t));
        } catch (const std::logic_error&) {
            throw ConfigError(std::string("bad ") + what + " list entry '" + t + "'");
        }
    }
    if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
    return out;
}

int cmd_sweep(const std::string& archetypes, const std::string& sizes, const std::string& seeds, int workers,
              const Flags& f) {
    const auto fc = read_config(f);
    Flags g = f;
    g.archetype.reset();
    const TrainConfig base = resolve(g, fc);
    std::vector<Archetype> archs;
    for (const auto& a : util::split(archetypes.empty() ? hsk::to_string(base.archetype) : archetypes, ',')) {
        if (!util::trim(a).empty()) archs.push_back(parse_archetype(util::trim(a)));
    }
    const auto dgs = parse_list<std::size_t>(sizes, "size");
    const auto seed_list = parse_list<std::uint64_t>(seeds, "seed");
    const fs::path root = data_root(f, fc);
    const std::string mat = material(f, fc);
    const auto all = data::load_material(root, mat);
    const auto split = data::split_dataset(all, kSplit, base.seed);
    const auto train = data::take<data::MeasuredSequence>(all, split.train);
    const auto eval = data::take<data::MeasuredSequence>(all, split.eval);
    const auto test = data::take<data::MeasuredSequence>(all, split.test);
    const training::SweepData sd{train, eval, test, data::compute_norm_constants(train)};

    Run run("sweep", f.out);
    run.config() = base.to_json();
    run.config()["material"] = mat;
    json ja = json::array();
    for (auto a : archs) ja.push_back(hsk::to_string(a));
    run.config()["archetypes"] = ja;
    run.config()["sizes"] = dgs;
    run.config()["seeds"] = seed_list;
    run.input("dataset:" + mat, dataset_hash(root, mat));
    const auto trials = training::pareto_sweep(archs, dgs, seed_list, base, sd, workers);
    run.out().write("split.json", split_json(all, split).dump(2) + "\n");
    run.out().write("trials.csv", training::trials_csv(trials));
    std::string med = "archetype,d_g,params,median_sre,median_nere,ok\n";
    for (const auto& p : training::pareto_medians(trials)) {
        med += hsk::to_string(p.archetype) + "," + std::to_string(p.d_g) + "," + std::to_string(p.params) + "," +
               util::fmt(p.median_sre) + "," + util::fmt(p.median_nere) + "," + std::to_string(p.ok) + "\n";
    }
    run.out().write("pareto.csv", med);
    run.commit();
    std::size_t failed = 0;
    for (const auto& t : trials) failed += t.status != "ok";
    std::cout << trials.size() << " trials, " << failed << " failed\n";
    return 0;
}

struct PredictionTable {
    std::vector<std::size_t> k;
    std::vector<std::string> B, H_true, H_pred;  // verbatim fields keep bytes stable
};

PredictionTable read_prediction_csv(const fs::path& p) {
    const auto lines = util::split(util::read_file(p), '\n');
    if (lines.empty() || util::trim(lines[0]) != "k,B,H_true,H_pred") {
        throw IoError(p.string() + ": expected a prediction CSV (k,B,H_true,H_pred)");
    }
    PredictionTable t;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = util::trim(lines[i]);
        if (line.empty()) continue;
        const auto f = util::split(line, ',');
        if (f.size() != 4) throw IoError(p.string() + ": row " + std::to_string(i + 1) + ": expected 4 fields");
        try {
            t.k.push_back(std::stoul(f[0]));
        } catch (const std::logic_error&) {
            throw IoError(p.string() + ": row " + std::to_string(i + 1) + ": bad sample index");
        }
        t.B.push_back(f[1]);
        t.H_true.push_back(f[2]);
        t.H_pred.push_back(f[3]);
    }
    return t;
}

int cmd_plotdata(const std::string& kind, const std::string& source, const Flags& f) {
    if (!fs::exists(source)) throw IoError("source not found: " + source);
    std::string csv;
    json cfg{{"kind", kind}, {"source", source}};
    if (kind == "bh_loop" || kind == "timeseries") {
        const auto t = read_prediction_csv(source);
        double tau = data::kDefaultTau;
        fs::path side = source;
        side.replace_extension(".json");
        if (fs::exists(side)) tau = json::parse(util::read_file(side)).value("tau_s", tau);
        csv = kind == "bh_loop" ? "B,H_true,H_pred\n" : "t_us,B,H_true,H_pred\n";
        for (std::size_t i = 0; i < t.k.size(); ++i) {
            if (kind == "timeseries") csv += util::fmt(static_cast<double>(t.k[i]) * tau * 1e6) + ",";
            csv += t.B[i] + "," + t.H_true[i] + "," + t.H_pred[i] + "\n";
        }
        if (kind == "timeseries") cfg["tau_s"] = tau;
    } else if (kind == "pareto") {
        std::vector<training::Trial> trials;
        try {
            trials = training::parse_trials_csv(util::read_file(source));
        } catch (const IoError& e) {
            throw IoError(source + ": kind 'pareto' needs a sweep trials.csv (" + e.what() + ")");
        }
        csv = "archetype,params,median_sre,median_nere\n";
        for (const auto& p : training::pareto_medians(trials)) {
            csv += hsk::to_string(p.archetype) + "," + std::to_string(p.params) + "," + util::fmt(p.median_sre) + "," +
                   util::fmt(p.median_nere) + "\n";
        }
    } else {
        throw ConfigError("unknown plot kind '" + kind + "' (bh_loop, timeseries, pareto)");
    }
    Run run("plotdata", f.out);
    run.config() = cfg;
    run.input(source, util::hash_file(source));
    run.out().write(kind + ".csv", csv);
    run.commit();
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Magnetic hysteresis sequence models: train, evaluate, predict, sweep"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Flags f;

    auto out_opt = [&](CLI::App* c) { c->add_option("--out", f.out, "Output directory")->required(); };

    std::string raw, layout = "auto";
    auto* ingest = app.add_subcommand("ingest", "Convert raw measurements into a canonical dataset");
    ingest->add_option("--raw", raw, "Raw data directory")->required();
    ingest->add_option("--layout", layout, "auto, canonical or magnet");
    out_opt(ingest);

    physics::SynthConfig sc;
    bool swap = false;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset from a JA forward model");
    synth->add_option("--count", sc.count);
    synth->add_option("--length", sc.length);
    synth->add_option("--seed", sc.seed);
    synth->add_option("--eddy", sc.eddy_kappa, "Rate term kappa * dB/dt added to H");
    synth->add_option("--material", sc.material);
    synth->add_flag("--swap-roles", swap, "Store H as the input signal and B as the target");
    out_opt(synth);

    auto* train = app.add_subcommand("train", "Train a model on one material");
    add_data_flags(train, f);
    add_train_flags(train, f);
    out_opt(train);

    std::string ck, which = "test";
    std::optional<std::string> seq_id;
    auto* eval = app.add_subcommand("eval", "Score a checkpoint");
    eval->add_option("--checkpoint", ck, "Checkpoint directory")->required();
    eval->add_option("--split", which, "train, eval, test or all");
    eval->add_option("--archetype", f.archetype, "Expected archetype");
    eval->add_option("--warmup-len", f.warmup);
    eval->add_option("--config", f.config);
    add_data_flags(eval, f);
    out_opt(eval);

    auto* predict = app.add_subcommand("predict", "Write per-sequence predictions");
    predict->add_option("--checkpoint", ck, "Checkpoint directory")->required();
    predict->add_option("--split", which, "train, eval, test or all");
    predict->add_option("--sequence", seq_id, "Single sequence id");
    predict->add_option("--archetype", f.archetype, "Expected archetype");
    predict->add_option("--warmup-len", f.warmup);
    predict->add_option("--config", f.config);
    add_data_flags(predict, f);
    out_opt(predict);

    std::string archs, sizes = "8", seeds = "0";
    int workers = 0;
    auto* sweep = app.add_subcommand("sweep", "Pareto sweep over hidden sizes and seeds");
    add_data_flags(sweep, f);
    add_train_flags(sweep, f);
    sweep->add_option("--archetypes", archs, "Comma-separated archetypes (default: --archetype)");
    sweep->add_option("--sizes", sizes, "Comma-separated hidden sizes");
    sweep->add_option("--seeds", seeds, "Comma-separated seeds");
    sweep->add_option("--workers", workers, "Concurrent trials (0: all cores)");
    out_opt(sweep);

    std::string kind, source;
    auto* plot = app.add_subcommand("plotdata", "Export plot-ready CSV");
    plot->add_option("--kind", kind, "bh_loop, timeseries or pareto")->required();
    plot->add_option("--source", source, "Prediction CSV or sweep trials.csv")->required();
    out_opt(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (*ingest) return cmd_ingest(raw, layout, f);
        if (*synth) return cmd_synth(sc, swap, f);
        if (*train) return cmd_train(f);
        if (*eval) return cmd_eval(ck, which, f);
        if (*predict) return cmd_predict(ck, which, seq_id, f);
        if (*sweep) {
            if (archs.empty() && f.archetype) archs = *f.archetype;
            return cmd_sweep(archs, sizes, seeds, workers, f);
        }
        if (*plot) return cmd_plotdata(kind, source, f);
    } catch (const std::exception& e) {
        std::cerr << "hsk: error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("hsk");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace hsk::cli
