#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "json.hpp"

#include "hsk/data/sequence.hpp"
#include "hsk/heads/model.hpp"
#include "hsk/training/train.hpp"
#include "hsk/util/io.hpp"

namespace hsk::training {

inline constexpr int kCheckpointVersion = 1;

using AnyModel = std::variant<heads::Model<float>, heads::Model<double>>;

struct Checkpoint {
    TrainConfig config;
    data::NormConstants norm;
    AnyModel model;
    std::size_t best_epoch = 0;
    double best_eval_sre = -1;

    std::size_t param_count() const;
    Precision precision() const { return model.index() == 0 ? Precision::Single : Precision::Double; }
};

/// FNV-1a over the canonical dump of the config.
std::string config_hash(const TrainConfig& cfg);

/// Little-endian parameter blob in layout order.
std::string parameter_blob(const AnyModel& m);

/// Stage model.json and model.bin under `out`, optionally in a subdirectory.
void save_checkpoint(const Checkpoint& ck, util::StagedOutput& out, const std::filesystem::path& sub = {});

/// Read a checkpoint directory (or its model.json).
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hsk::training
