#include "hsk/training/sweep.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "hsk/cells/cells.hpp"
#include "hsk/objectives/metrics.hpp"
#include "hsk/util/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hsk::training {

namespace {

std::string sanitize(std::string s) {
    for (auto& c : s) {
        if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
    }
    return s;
}

template <typename T>
void run(Trial& t, const TrainConfig& cfg, const SweepData& d) {
    const auto res = train<T>(cfg, d.train, d.eval, d.norm);
    const auto scored = d.test.empty() ? d.eval : d.test;
    if (scored.empty()) throw DataError("sweep needs a test or eval set");
    const auto rep = evaluate(res.model, scored, d.norm, cfg.warmup_length);
    t.params = res.model.param_count();
    t.sre = rep.sre().mean;
    t.nere = rep.nere().mean;
}

}  // namespace

std::vector<Trial> pareto_sweep(std::span<const Archetype> archetypes, std::span<const std::size_t> sizes,
                                std::span<const std::uint64_t> seeds, const TrainConfig& base, const SweepData& data,
                                int workers) {
    if (archetypes.empty() || sizes.empty() || seeds.empty()) {
        throw ConfigError("sweep needs at least one archetype, size and seed");
    }
    std::vector<Trial> trials;
    for (auto a : archetypes) {
        for (auto d : sizes) {
            for (auto s : seeds) {
                Trial t;
                t.archetype = a;
                t.d_g = d;
                t.seed = s;
                t.params = cells::param_count(a, d, base.d_x);
                trials.push_back(t);
            }
        }
    }
#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#else
    const int threads = 1;
    (void)workers;
#endif
    const auto n = static_cast<std::ptrdiff_t>(trials.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Trial& t = trials[static_cast<std::size_t>(i)];
        TrainConfig cfg = base;
        cfg.archetype = t.archetype;
        cfg.d_g = t.d_g;
        cfg.seed = t.seed;
        try {
            if (cfg.precision == Precision::Single) run<float>(t, cfg, data);
            else run<double>(t, cfg, data);
        } catch (const std::exception& e) {
            t.sre = t.nere = 0;
            t.status = "failed:" + sanitize(e.what());
        }
    }
    return trials;
}

std::vector<ParetoPoint> pareto_medians(std::span<const Trial> trials) {
    std::vector<ParetoPoint> out;
    std::map<std::pair<Archetype, std::size_t>, std::size_t> index;
    std::vector<std::vector<double>> sre, nere;
    for (const auto& t : trials) {
        const auto key = std::make_pair(t.archetype, t.d_g);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            out.push_back({t.archetype, t.d_g, t.params, 0, 0, 0});
            sre.emplace_back();
            nere.emplace_back();
        }
        if (t.status == "ok") {
            sre[it->second].push_back(t.sre);
            nere[it->second].push_back(t.nere);
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].ok = sre[i].size();
        if (out[i].ok == 0) {
            out[i].median_sre = out[i].median_nere = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        out[i].median_sre = objectives::median(sre[i]);
        out[i].median_nere = objectives::median(nere[i]);
    }
    return out;
}

std::string trials_csv(std::span<const Trial> trials) {
    using util::fmt;
    std::string out = "archetype,d_g,params,seed,sre,nere,status\n";
    for (const auto& t : trials) {
        out += to_string(t.archetype) + "," + std::to_string(t.d_g) + "," + std::to_string(t.params) + "," +
               std::to_string(t.seed) + "," + fmt(t.sre) + "," + fmt(t.nere) + "," + t.status + "\n";
    }
    return out;
}

std::vector<Trial> parse_trials_csv(const std::string& text) {
    const auto lines = util::split(text, '\n');
    if (lines.empty() || util::trim(lines[0]) != "archetype,d_g,params,seed,sre,nere,status") {
        throw IoError("not a sweep trial table");
    }
    std::vector<Trial> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = util::trim(lines[i]);
        if (line.empty()) continue;
        const auto f = util::split(line, ',');
        if (f.size() != 7) throw IoError("sweep table row " + std::to_string(i + 1) + ": expected 7 fields");
        Trial t;
        try {
            t.archetype = parse_archetype(f[0]);
            t.d_g = std::stoul(f[1]);
            t.params = std::stoul(f[2]);
            t.seed = std::stoull(f[3]);
        } catch (const std::logic_error&) {
            throw IoError("sweep table row " + std::to_string(i + 1) + ": bad integer field");
        }
        t.sre = util::parse_double(f[4]);
        t.nere = util::parse_double(f[5]);
        t.status = f[6];
        out.push_back(t);
    }
    return out;
}

}  // namespace hsk::training
