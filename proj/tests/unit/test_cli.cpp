#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "hsk/cli/cli.hpp"
#include "hsk/util/io.hpp"
#include "json.hpp"
#include "../support/tempdir.hpp"

using hsk::cli::run;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& line : hsk::util::split(hsk::util::read_file(p), '\n')) {
        if (!hsk::util::trim(line).empty()) rows.push_back(hsk::util::split(hsk::util::trim(line), ','));
    }
    return rows;
}

json read_json(const fs::path& p) { return json::parse(hsk::util::read_file(p)); }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        auto text = hsk::util::read_file(e.path());
        if (e.path().filename() == "run_manifest.json") {
            auto j = json::parse(text);
            j.erase("wall_time_s");
            text = j.dump();
        }
        out[fs::relative(e.path(), dir).string()] = text;
    }
    return out;
}

struct Workspace {
    test::TempDir dir;
    std::string data = (dir.path() / "data").string();

    Workspace() {
        REQUIRE(run({"synth", "--count", "20", "--length", "160", "--seed", "4", "--out", data}) == 0);
    }

    std::vector<std::string> train_args(const std::string& out) const {
        return {"train",        "--data", data, "--material",   "SYNTH", "--hidden-size", "4",     "--epochs", "2",
                "--batch-size", "4",      "--subseq-len", "40", "--warmup-len", "4",     "--seed",        "2",
                "--lr",         "0.005",  "--out",    out};
    }
};

}  // namespace

TEST_CASE("ingest of an empty directory fails cleanly") {
    test::TempDir dir;
    fs::create_directories(dir.path() / "raw");
    const auto out = dir.path() / "out";
    CHECK(run({"ingest", "--raw", (dir.path() / "raw").string(), "--out", out.string()}) == 1);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("bad arguments exit nonzero") {
    CHECK(run({}) != 0);
    CHECK(run({"train", "--epochs", "x", "--out", "/nonexistent/x"}) != 0);
}

TEST_CASE("train, eval, predict and plot data") {
    Workspace ws;
    const auto ck = (ws.dir.path() / "ck").string();
    REQUIRE(run(ws.train_args(ck)) == 0);
    for (const char* f : {"model.json", "model.bin", "loss_curve.csv", "split.json", "train_report.json",
                          "run_manifest.json"}) {
        CHECK(fs::exists(fs::path(ck) / f));
    }
    const auto manifest = read_json(fs::path(ck) / "run_manifest.json");
    CHECK(manifest["command"] == "train");
    CHECK(manifest["toolkit_version"] == hsk::cli::kVersion);
    CHECK(manifest["config"]["hidden_size"] == 4);
    CHECK(read_csv(fs::path(ck) / "loss_curve.csv").size() == 3);

    SUBCASE("eval on the training split matches the training report") {
        const auto out = ws.dir.path() / "ev";
        REQUIRE(run({"eval", "--checkpoint", ck, "--data", ws.data, "--material", "SYNTH", "--split", "train",
                     "--out", out.string()}) == 0);
        const double reported = read_json(fs::path(ck) / "train_report.json")["train_sre"];
        const double evaluated = read_json(out / "metrics.json")["aggregate"]["sre"]["mean"];
        CHECK(evaluated == reported);
        const auto rows = read_csv(out / "metrics.csv");
        CHECK(rows.front() == std::vector<std::string>{"id", "sre", "nere", "mse", "mae", "wce"});
        CHECK(rows[rows.size() - 2][0] == "mean");
        CHECK(rows.back()[0] == "p95");
    }
    SUBCASE("archetype mismatch") {
        CHECK(run({"eval", "--checkpoint", ck, "--data", ws.data, "--material", "SYNTH", "--archetype",
                   "LSTM-P", "--out", (ws.dir.path() / "x").string()}) == 1);
        CHECK_FALSE(fs::exists(ws.dir.path() / "x"));
    }
    SUBCASE("predict with a single warmup sample, then plot data") {
        const auto out = ws.dir.path() / "pr";
        REQUIRE(run({"predict", "--checkpoint", ck, "--data", ws.data, "--material", "SYNTH", "--warmup-len",
                     "1", "--split", "all", "--out", out.string()}) == 0);
        std::vector<fs::path> csvs;
        for (const auto& e : fs::directory_iterator(out / "predictions")) {
            if (e.path().extension() == ".csv") csvs.push_back(e.path());
        }
        REQUIRE(csvs.size() == 20);
        std::sort(csvs.begin(), csvs.end());
        const auto pred = read_csv(csvs[0]);
        CHECK(pred[0] == std::vector<std::string>{"k", "B", "H_true", "H_pred"});
        CHECK(pred.size() == 1 + 159);
        CHECK(pred[1][0] == "1");

        const auto bh = ws.dir.path() / "bh";
        REQUIRE(run({"plotdata", "--kind", "bh_loop", "--source", csvs[0].string(), "--out", bh.string()}) == 0);
        const auto loop = read_csv(bh / "bh_loop.csv");
        CHECK(loop[0] == std::vector<std::string>{"B", "H_true", "H_pred"});
        CHECK(loop.size() - 1 == 159);

        const auto ts = ws.dir.path() / "ts";
        REQUIRE(run({"plotdata", "--kind", "timeseries", "--source", csvs[0].string(), "--out", ts.string()}) ==
                0);
        const auto series = read_csv(ts / "timeseries.csv");
        CHECK(series[0][0] == "t_us");
        for (std::size_t i = 1; i < series.size(); ++i) {
            const double k = std::stod(pred[i][0]);
            CHECK(std::stod(series[i][0]) == doctest::Approx(k * 62.5e-9 * 1e6).epsilon(1e-8));
            CHECK(series[i][1] == pred[i][1]);
        }
        CHECK(run({"plotdata", "--kind", "pareto", "--source", csvs[0].string(), "--out",
                   (ws.dir.path() / "bad").string()}) == 1);
    }
}

TEST_CASE("flags override the config file") {
    Workspace ws;
    const auto cfg = ws.dir.path() / "cfg.json";
    hsk::util::write_file_atomic(cfg, R"({"epochs": 3, "lr": 0.002, "hidden_size": 5, "material": "SYNTH"})");
    const auto out = ws.dir.path() / "t";
    REQUIRE(run({"train", "--config", cfg.string(), "--data", ws.data, "--epochs", "1", "--batch-size", "4",
                 "--subseq-len", "40", "--warmup-len", "4", "--out", out.string()}) == 0);
    const auto c = read_json(out / "run_manifest.json")["config"];
    CHECK(c["epochs"] == 1);
    CHECK(c["lr"] == 0.002);
    CHECK(c["hidden_size"] == 5);
    CHECK(c["subseq_len"] == 40);
    CHECK(c["clip"] == 1.0);
    hsk::util::write_file_atomic(cfg, R"({"epoks": 3})");
    CHECK(run({"train", "--config", cfg.string(), "--data", ws.data, "--material", "SYNTH", "--out",
               (ws.dir.path() / "u").string()}) == 1);
}

TEST_CASE("repeated runs write identical bytes") {
    Workspace ws;
    const auto a = ws.dir.path() / "a";
    REQUIRE(run(ws.train_args(a.string())) == 0);
    const auto first = snapshot(a);
    REQUIRE(run(ws.train_args(a.string())) == 0);
    CHECK(snapshot(a) == first);
}

TEST_CASE("sweep and pareto export") {
    Workspace ws;
    const auto out = ws.dir.path() / "sw";
    REQUIRE(run({"sweep", "--data", ws.data, "--material", "SYNTH", "--archetype", "GRU-P", "--sizes", "4,8",
                 "--seeds", "1,2", "--epochs", "1", "--batch-size", "4", "--subseq-len", "40", "--warmup-len", "4",
                 "--out", out.string()}) == 0);
    const auto trials = read_csv(out / "trials.csv");
    REQUIRE(trials.size() == 5);
    CHECK(trials[0] == std::vector<std::string>{"archetype", "d_g", "params", "seed", "sre", "nere", "status"});

    // Independent median per (archetype, d_g).
    std::map<std::string, std::vector<double>> sre;
    for (std::size_t i = 1; i < trials.size(); ++i) sre[trials[i][2]].push_back(std::stod(trials[i][4]));
    const auto plot = ws.dir.path() / "pp";
    REQUIRE(run({"plotdata", "--kind", "pareto", "--source", (out / "trials.csv").string(), "--out",
                 plot.string()}) == 0);
    const auto rows = read_csv(plot / "pareto.csv");
    CHECK(rows[0] == std::vector<std::string>{"archetype", "params", "median_sre", "median_nere"});
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto v = sre.at(rows[i][1]);
        std::sort(v.begin(), v.end());
        const double med = 0.5 * (v[0] + v[1]);
        CHECK(std::stod(rows[i][2]) == doctest::Approx(med).epsilon(1e-8));
    }
    CHECK(run({"plotdata", "--kind", "bh_loop", "--source", (out / "trials.csv").string(), "--out",
               (ws.dir.path() / "bad").string()}) == 1);
}
