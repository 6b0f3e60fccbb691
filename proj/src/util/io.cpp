#include "hsk/util/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "hsk/error.hpp"

namespace hsk::util {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& p, std::string_view content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, p);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string hash_file(const fs::path& p) { return hex64(fnv1a(read_file(p))); }

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view s) {
    const std::string t = trim(s);
    if (t.empty()) throw IoError("empty numeric field");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw IoError("not a number: '" + t + "'");
    }
    if (used != t.size() || !std::isfinite(v)) throw IoError("not a finite number: '" + t + "'");
    return v;
}

StagedOutput::StagedOutput(fs::path dest) : dest_(std::move(dest)) {
    std::random_device rd;
    const auto tag = hex64((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    stage_ = dest_.parent_path() / ("." + dest_.filename().string() + ".staging-" + tag);
    fs::create_directories(stage_);
}

StagedOutput::~StagedOutput() {
    if (!committed_) {
        std::error_code ec;
        fs::remove_all(stage_, ec);
    }
}

fs::path StagedOutput::path(const fs::path& rel) {
    if (std::find(files_.begin(), files_.end(), rel) == files_.end()) files_.push_back(rel);
    const fs::path p = stage_ / rel;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

void StagedOutput::write(const fs::path& rel, std::string_view content) {
    const fs::path p = path(rel);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + p.string());
}

std::vector<fs::path> StagedOutput::outputs() const {
    std::vector<fs::path> out;
    out.reserve(files_.size());
    for (const auto& f : files_) out.push_back(dest_ / f);
    return out;
}

void StagedOutput::commit() {
    fs::create_directories(dest_);
    for (const auto& f : files_) {
        const fs::path to = dest_ / f;
        if (to.has_parent_path()) fs::create_directories(to.parent_path());
        fs::rename(stage_ / f, to);
    }
    std::error_code ec;
    fs::remove_all(stage_, ec);
    committed_ = true;
}

}  // namespace hsk::util
