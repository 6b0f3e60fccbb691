#include "hsk/training/checkpoint.hpp"

#include <bit>
#include <cstring>

namespace hsk::training {

namespace fs = std::filesystem;

namespace {

template <typename T>
void put_le(std::string& out, T v) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U u;
    std::memcpy(&u, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const char* p) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i);
    T v;
    std::memcpy(&v, &u, sizeof(T));
    return v;
}

template <typename T>
heads::Model<T> read_params(const nlohmann::json& j, const std::string& blob, const TrainConfig& cfg) {
    auto m = heads::make_model<T>(cfg.model_config(), cfg.seed);
    const auto& layout = j.at("parameters");
    if (layout.size() != m.params.size()) {
        throw ConfigError("checkpoint has " + std::to_string(layout.size()) + " parameter tensors, " +
                          hsk::to_string(cfg.archetype) + " expects " + std::to_string(m.params.size()));
    }
    std::size_t off = 0;
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        auto& p = m.params[i];
        const auto& e = layout[i];
        if (e.at("name").get<std::string>() != p.name || e.at("rows").get<std::size_t>() != p.value.rows() ||
            e.at("cols").get<std::size_t>() != p.value.cols()) {
            throw ConfigError("checkpoint parameter " + std::to_string(i) + " (" + e.at("name").get<std::string>() +
                              ") does not match the " + hsk::to_string(cfg.archetype) + " layout");
        }
        for (auto& v : p.value.values()) {
            if (off + sizeof(T) > blob.size()) throw IoError("checkpoint blob is truncated");
            v = get_le<T>(blob.data() + off);
            off += sizeof(T);
        }
    }
    if (off != blob.size()) throw IoError("checkpoint blob has trailing bytes");
    return m;
}

}  // namespace

std::size_t Checkpoint::param_count() const {
    return std::visit([](const auto& m) { return m.param_count(); }, model);
}

std::string config_hash(const TrainConfig& cfg) { return util::hex64(util::fnv1a(cfg.to_json().dump())); }

std::string parameter_blob(const AnyModel& model) {
    std::string out;
    std::visit(
        [&](const auto& m) {
            for (const auto& p : m.params) {
                for (auto v : p.value.values()) put_le(out, v);
            }
        },
        model);
    return out;
}

void save_checkpoint(const Checkpoint& ck, util::StagedOutput& out, const fs::path& sub) {
    const std::string blob = parameter_blob(ck.model);
    nlohmann::json j;
    j["format"] = "hsk-checkpoint";
    j["version"] = kCheckpointVersion;
    j["archetype"] = hsk::to_string(ck.config.archetype);
    j["precision"] = diff::to_string(ck.precision());
    j["config"] = ck.config.to_json();
    j["config_hash"] = config_hash(ck.config);
    j["norm"] = {{"H_max", ck.norm.H_max}, {"B_max", ck.norm.B_max}, {"theta_max", ck.norm.theta_max}};
    j["param_count"] = ck.param_count();
    j["best_epoch"] = ck.best_epoch;
    j["best_eval_sre"] = ck.best_eval_sre;
    auto& layout = j["parameters"] = nlohmann::json::array();
    std::visit(
        [&](const auto& m) {
            for (const auto& p : m.params) {
                layout.push_back({{"name", p.name}, {"rows", p.value.rows()}, {"cols", p.value.cols()}});
            }
        },
        ck.model);
    j["blob"] = {{"file", "model.bin"}, {"bytes", blob.size()}, {"fnv1a", util::hex64(util::fnv1a(blob))}};
    out.write(sub / "model.json", j.dump(2) + "\n");
    out.write(sub / "model.bin", blob);
}

Checkpoint load_checkpoint(const fs::path& path) {
    const fs::path json_path = fs::is_directory(path) ? path / "model.json" : path;
    if (!fs::exists(json_path)) throw IoError("checkpoint not found: " + json_path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(util::read_file(json_path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(json_path.string() + ": " + e.what());
    }
    if (j.value("format", "") != "hsk-checkpoint") throw IoError(json_path.string() + ": not a checkpoint");
    if (j.value("version", 0) != kCheckpointVersion) {
        throw IoError(json_path.string() + ": unsupported checkpoint version");
    }
    Checkpoint ck;
    try {
        ck.config = TrainConfig::from_json(j.at("config"));
        if (!j.contains("norm")) throw ConfigError("checkpoint is missing norm constants");
        const auto& n = j.at("norm");
        ck.norm = {n.at("H_max").get<double>(), n.at("B_max").get<double>(), n.at("theta_max").get<double>()};
        ck.best_epoch = j.value("best_epoch", std::size_t{0});
        ck.best_eval_sre = j.value("best_eval_sre", -1.0);
        if (parse_archetype(j.at("archetype").get<std::string>()) != ck.config.archetype) {
            throw ConfigError("checkpoint archetype tag disagrees with its config");
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(json_path.string() + ": " + e.what());
    }
    ck.norm.validate();
    const std::string blob = util::read_file(json_path.parent_path() / j.at("blob").at("file").get<std::string>());
    if (util::hex64(util::fnv1a(blob)) != j.at("blob").at("fnv1a").get<std::string>()) {
        throw IoError("checkpoint blob hash mismatch");
    }
    if (ck.config.precision == Precision::Single) ck.model = read_params<float>(j, blob, ck.config);
    else ck.model = read_params<double>(j, blob, ck.config);
    if (ck.param_count() != j.at("param_count").get<std::size_t>()) {
        throw ConfigError("checkpoint parameter count does not match its layout");
    }
    return ck;
}

}  // namespace hsk::training
