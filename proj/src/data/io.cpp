#include "hsk/data/io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hsk/error.hpp"
#include "json.hpp"

namespace hsk::data {

using nlohmann::json;

std::string sequence_csv(const MeasuredSequence& s) {
    std::string out = "k,B_T,H_Am\n";
    out.reserve(out.size() + s.size() * 40);
    for (std::size_t k = 0; k < s.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += util::fmt(s.B[k]);
        out += ',';
        out += util::fmt(s.H[k]);
        out += '\n';
    }
    return out;
}

std::string sidecar_json(const MeasuredSequence& s) {
    json j;
    j["material"] = s.material;
    j["temperature_C"] = s.temperature_C;
    j["f_sw_Hz"] = s.f_sw_Hz ? json(*s.f_sw_Hz) : json(nullptr);
    j["tau_s"] = s.tau_s;
    return j.dump(2) + "\n";
}

MeasuredSequence read_sequence(const fs::path& csv) {
    MeasuredSequence s;
    s.id = csv.stem().string();
    fs::path side = csv;
    side.replace_extension(".json");
    if (!fs::exists(side)) throw IoError(csv.string() + ": missing sidecar " + side.string());
    try {
        const json j = json::parse(util::read_file(side));
        s.material = j.at("material").get<std::string>();
        s.temperature_C = j.at("temperature_C").get<double>();
        s.tau_s = j.value("tau_s", kDefaultTau);
        if (j.contains("f_sw_Hz") && !j["f_sw_Hz"].is_null()) s.f_sw_Hz = j["f_sw_Hz"].get<double>();
    } catch (const json::exception& e) {
        throw IoError(side.string() + ": " + e.what());
    }

    std::istringstream in(util::read_file(csv));
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw IoError(csv.string() + ": empty file");
    ++lineno;
    if (util::trim(line) != "k,B_T,H_Am") throw IoError(csv.string() + ": row 1: expected header k,B_T,H_Am");
    while (std::getline(in, line)) {
        ++lineno;
        if (util::trim(line).empty()) continue;
        const auto f = util::split(line, ',');
        try {
            if (f.size() != 3) throw IoError("expected 3 fields, found " + std::to_string(f.size()));
            const double k = util::parse_double(f[0]);
            if (k != static_cast<double>(s.B.size())) throw IoError("sample index out of sequence");
            s.B.push_back(util::parse_double(f[1]));
            s.H.push_back(util::parse_double(f[2]));
        } catch (const IoError& e) {
            throw IoError(csv.string() + ": row " + std::to_string(lineno) + ": " + e.what());
        }
    }
    try {
        s.validate();
    } catch (const DataError& e) {
        throw IoError(csv.string() + ": " + e.what());
    }
    return s;
}

void stage_sequence(util::StagedOutput& out, const fs::path& dir, const MeasuredSequence& s) {
    out.write(dir / (s.id + ".csv"), sequence_csv(s));
    out.write(dir / (s.id + ".json"), sidecar_json(s));
}

std::string DatasetManifest::to_json() const {
    json j;
    j["format"] = "hsk-dataset";
    j["version"] = 1;
    json mats = json::object();
    for (const auto& [name, files] : materials) {
        mats[name] = {{"count", files.size()}, {"sequences", files}};
    }
    j["materials"] = mats;
    return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::read(const fs::path& root) {
    const fs::path p = root / "manifest.json";
    if (!fs::exists(p)) throw IoError("no dataset manifest at " + p.string());
    DatasetManifest m;
    try {
        const json j = json::parse(util::read_file(p));
        if (j.value("format", "") != "hsk-dataset") throw IoError(p.string() + ": not a dataset manifest");
        for (const auto& [name, entry] : j.at("materials").items()) {
            m.materials[name] = entry.at("sequences").get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        throw IoError(p.string() + ": " + e.what());
    }
    return m;
}

std::vector<MeasuredSequence> load_material(const fs::path& root, const std::string& material) {
    const auto m = DatasetManifest::read(root);
    const auto it = m.materials.find(material);
    if (it == m.materials.end()) throw DataError("material '" + material + "' not in dataset " + root.string());
    std::vector<MeasuredSequence> out;
    out.reserve(it->second.size());
    for (const auto& rel : it->second) out.push_back(read_sequence(root / rel));
    return out;
}

namespace {

std::vector<fs::path> sorted_files(const fs::path& dir, bool recursive) {
    std::vector<fs::path> out;
    if (recursive) {
        for (const auto& e : fs::recursive_directory_iterator(dir)) {
            if (e.is_regular_file()) out.push_back(e.path());
        }
    } else {
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.is_regular_file()) out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string safe_name(std::string s) {
    for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
    }
    return s;
}

std::vector<std::vector<double>> read_matrix(const fs::path& p) {
    std::istringstream in(util::read_file(p));
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (util::trim(line).empty()) continue;
        std::vector<double> r;
        try {
            for (const auto& f : util::split(line, ',')) r.push_back(util::parse_double(f));
        } catch (const IoError& e) {
            throw IoError(p.string() + ": row " + std::to_string(lineno) + ": " + e.what());
        }
        if (!rows.empty() && r.size() != rows.front().size()) {
            throw IoError(p.string() + ": row " + std::to_string(lineno) + ": expected " +
                          std::to_string(rows.front().size()) + " values, found " + std::to_string(r.size()));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::optional<fs::path> find_prefixed(const fs::path& dir, const std::string& prefix) {
    for (const auto& f : sorted_files(dir, false)) {
        const auto name = f.filename().string();
        if (name.rfind(prefix, 0) == 0 && f.extension() == ".csv") return f;
    }
    return std::nullopt;
}

bool looks_magnet(const fs::path& raw) {
    for (const auto& e : fs::directory_iterator(raw)) {
        if (e.is_directory() && find_prefixed(e.path(), "B_waveform")) return true;
    }
    return false;
}

void ingest_canonical(const fs::path& raw, util::StagedOutput& out, IngestReport& rep) {
    std::set<std::string> seen;
    for (const auto& f : sorted_files(raw, true)) {
        if (f.extension() != ".csv") continue;
        fs::path side = f;
        side.replace_extension(".json");
        if (!fs::exists(side)) continue;
        auto s = read_sequence(f);
        s.id = safe_name(s.id);
        const std::string mat = safe_name(s.material);
        if (!seen.insert(mat + "/" + s.id).second) {
            throw DataError("duplicate sequence id '" + s.id + "' for material " + mat);
        }
        stage_sequence(out, mat, s);
        rep.manifest.materials[s.material].push_back(mat + "/" + s.id + ".csv");
        rep.inputs.push_back(f);
        rep.inputs.push_back(side);
    }
}

void ingest_magnet(const fs::path& raw, util::StagedOutput& out, IngestReport& rep) {
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(raw)) {
        if (e.is_directory()) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        const auto bf = find_prefixed(dir, "B_waveform");
        if (!bf) continue;
        const auto hf = find_prefixed(dir, "H_waveform");
        const auto tf = find_prefixed(dir, "Temperature");
        if (!hf || !tf) throw IoError(dir.string() + ": B_waveform present but H_waveform or Temperature missing");
        const auto ff = find_prefixed(dir, "Frequency");
        const auto B = read_matrix(*bf);
        const auto H = read_matrix(*hf);
        const auto Tm = read_matrix(*tf);
        std::vector<std::vector<double>> F;
        if (ff) F = read_matrix(*ff);
        if (H.size() != B.size() || Tm.size() != B.size() || (ff && F.size() != B.size())) {
            throw IoError(dir.string() + ": waveform, temperature and frequency files disagree on row count");
        }
        const std::string mat = safe_name(dir.filename().string());
        for (std::size_t i = 0; i < B.size(); ++i) {
            MeasuredSequence s;
            char id[32];
            std::snprintf(id, sizeof id, "seq_%05zu", i);
            s.id = id;
            s.material = dir.filename().string();
            s.B = B[i];
            s.H = H[i];
            s.temperature_C = Tm[i].at(0);
            if (ff) s.f_sw_Hz = F[i].at(0);
            try {
                s.validate();
            } catch (const DataError& e) {
                throw IoError(bf->string() + ": row " + std::to_string(i + 1) + ": " + e.what());
            }
            stage_sequence(out, mat, s);
            rep.manifest.materials[s.material].push_back(mat + "/" + s.id + ".csv");
        }
        rep.inputs.push_back(*bf);
        rep.inputs.push_back(*hf);
        rep.inputs.push_back(*tf);
        if (ff) rep.inputs.push_back(*ff);
    }
}

}  // namespace

IngestReport ingest(const fs::path& raw, util::StagedOutput& out, const std::string& layout) {
    if (!fs::is_directory(raw)) throw IoError("raw input " + raw.string() + " is not a directory");
    IngestReport rep;
    rep.layout = layout;
    if (layout == "auto") rep.layout = looks_magnet(raw) ? "magnet" : "canonical";
    if (rep.layout == "canonical") {
        ingest_canonical(raw, out, rep);
    } else if (rep.layout == "magnet") {
        ingest_magnet(raw, out, rep);
    } else {
        throw ConfigError("unknown raw layout '" + layout + "' (expected auto, canonical or magnet)");
    }
    if (rep.manifest.materials.empty()) throw DataError("no sequences found in " + raw.string());
    out.write("manifest.json", rep.manifest.to_json());
    return rep;
}

}  // namespace hsk::data
