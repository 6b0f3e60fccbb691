#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hsk/data/sequence.hpp"
#include "hsk/util/io.hpp"

namespace hsk::data {

namespace fs = std::filesystem;

/// Canonical sequence CSV: header `k,B_T,H_Am`, one row per sample.
std::string sequence_csv(const MeasuredSequence& s);

/// Sidecar JSON: {material, temperature_C, f_sw_Hz, tau_s}.
std::string sidecar_json(const MeasuredSequence& s);

/// Read `<stem>.csv` and its `<stem>.json` sidecar. Parse errors name the
/// file and the 1-based line.
MeasuredSequence read_sequence(const fs::path& csv);

/// Stage `<dir>/<id>.csv` and `<dir>/<id>.json` for writing.
void stage_sequence(util::StagedOutput& out, const fs::path& dir, const MeasuredSequence& s);

/// A dataset root holds manifest.json listing sequence CSVs per material,
/// relative to the root.
struct DatasetManifest {
    std::map<std::string, std::vector<std::string>> materials;

    std::string to_json() const;
    static DatasetManifest read(const fs::path& root);
};

std::vector<MeasuredSequence> load_material(const fs::path& root, const std::string& material);

struct IngestReport {
    std::string layout;
    DatasetManifest manifest;
    std::vector<fs::path> inputs;
};

/// Convert a raw directory into a canonical dataset staged in `out`.
/// Layouts: "canonical" (CSV + sidecar pairs anywhere below `raw`),
/// "magnet" (per-material directories holding B_waveform*.csv,
/// H_waveform*.csv, Temperature*.csv and optionally Frequency*.csv, one
/// sequence per line), or "auto".
IngestReport ingest(const fs::path& raw, util::StagedOutput& out, const std::string& layout = "auto");

}  // namespace hsk::data
