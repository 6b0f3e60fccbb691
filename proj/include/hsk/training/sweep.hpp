#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsk/archetype.hpp"
#include "hsk/data/sequence.hpp"
#include "hsk/training/train.hpp"

namespace hsk::training {

struct Trial {
    Archetype archetype = Archetype::GruP;
    std::size_t d_g = 0;
    std::size_t params = 0;
    std::uint64_t seed = 0;
    double sre = 0;
    double nere = 0;
    std::string status = "ok";  // "ok" or "failed:<reason>"
};

struct ParetoPoint {
    Archetype archetype = Archetype::GruP;
    std::size_t d_g = 0;
    std::size_t params = 0;
    double median_sre = 0;
    double median_nere = 0;
    std::size_t ok = 0;
};

struct SweepData {
    std::span<const data::MeasuredSequence> train;
    std::span<const data::MeasuredSequence> eval;
    std::span<const data::MeasuredSequence> test;  // scored set; eval is used when empty
    data::NormConstants norm;
};

/// Train one model per (archetype, d_g, seed) and score it. Trials run
/// concurrently on up to `workers` threads (0: OpenMP default); rows come
/// back in (archetype, d_g, seed) input order whatever the schedule.
std::vector<Trial> pareto_sweep(std::span<const Archetype> archetypes, std::span<const std::size_t> sizes,
                                std::span<const std::uint64_t> seeds, const TrainConfig& base, const SweepData& data,
                                int workers = 0);

/// Median SRE/NERE per (archetype, d_g) over successful trials.
std::vector<ParetoPoint> pareto_medians(std::span<const Trial> trials);

std::string trials_csv(std::span<const Trial> trials);
std::vector<Trial> parse_trials_csv(const std::string& text);

}  // namespace hsk::training
