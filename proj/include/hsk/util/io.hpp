#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hsk::util {

namespace fs = std::filesystem;

/// printf "%.9g": enough digits to round-trip single precision.
std::string fmt(double v);

std::string read_file(const fs::path& p);

/// Write via a sibling temporary and rename, so readers never see a torn file.
void write_file_atomic(const fs::path& p, std::string_view content);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL);
std::string hex64(std::uint64_t v);
std::string hash_file(const fs::path& p);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);
double parse_double(std::string_view s);

/// Collects the outputs of one command in a staging directory next to the
/// destination. commit() moves every staged file into place; if the object
/// dies uncommitted the staging directory is removed.
class StagedOutput {
public:
    explicit StagedOutput(fs::path dest);
    ~StagedOutput();
    StagedOutput(const StagedOutput&) = delete;
    StagedOutput& operator=(const StagedOutput&) = delete;

    /// Staging path for a file that will end up at dest/rel.
    fs::path path(const fs::path& rel);
    void write(const fs::path& rel, std::string_view content);

    /// Final locations of everything staged so far.
    std::vector<fs::path> outputs() const;
    const fs::path& dest() const { return dest_; }

    void commit();

private:
    fs::path dest_;
    fs::path stage_;
    std::vector<fs::path> files_;
    bool committed_ = false;
};

}  // namespace hsk::util
