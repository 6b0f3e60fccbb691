#include "hsk/objectives/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hsk/util/io.hpp"

namespace hsk::objectives {

namespace {

void same_length(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) {
        throw ShapeError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    }
    if (a.empty()) throw DataError(std::string(what) + ": empty window");
}

}  // namespace

double loss_rmse(std::span<const double> h, std::span<const double> h_hat, std::span<const double> b,
                 std::optional<double> b_prev) {
    same_length(h, h_hat, "loss_rmse");
    same_length(h, b, "loss_rmse");
    double acc = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        double w = 0;
        if (k > 0) w = std::abs(b[k] - b[k - 1]);
        else if (b_prev) w = std::abs(b[0] - *b_prev);
        const double e = h[k] - h_hat[k];
        acc += e * e * w;
    }
    return std::sqrt(acc / static_cast<double>(h.size()));
}

double loss_weighted(double l_rmse, double h_max, std::span<const double> h_full) {
    if (h_full.empty()) throw DataError("loss_weighted: empty sequence");
    double acc = 0;
    for (double v : h_full) acc += v * v;
    const double rms = std::sqrt(acc / static_cast<double>(h_full.size()));
    if (!(rms > 0)) throw DataError("loss_weighted: H sequence is identically zero");
    return l_rmse * h_max / rms;
}

double sre(std::span<const double> h_hat, std::span<const double> h) {
    same_length(h_hat, h, "sre");
    double num = 0, den = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double e = h_hat[k] - h[k];
        num += e * e;
        den += h[k] * h[k];
    }
    if (!(den > 0)) throw DomainError("sre: reference H is all zero");
    return std::sqrt(num / den);
}

double nere(std::span<const double> h_hat, std::span<const double> h_full, std::span<const double> b_full,
            std::size_t k1) {
    same_length(h_full, b_full, "nere");
    if (h_hat.empty() || k1 + h_hat.size() > h_full.size()) throw ShapeError("nere: window out of range");
    auto dB = [&](std::size_t k) { return k == 0 ? 0.0 : b_full[k] - b_full[k - 1]; };
    double total = 0;
    for (std::size_t k = 0; k < h_full.size(); ++k) total += dB(k) * h_full[k];
    if (total == 0.0) throw DomainError("nere: total loop energy is zero");
    double pred = 0, ref = 0;
    for (std::size_t i = 0; i < h_hat.size(); ++i) {
        const std::size_t k = k1 + i;
        pred += dB(k) * h_hat[i];
        ref += dB(k) * h_full[k];
    }
    return (pred - ref) / total;
}

double mse(std::span<const double> h_hat, std::span<const double> h) {
    same_length(h_hat, h, "mse");
    double acc = 0;
    for (std::size_t k = 0; k < h.size(); ++k) acc += (h_hat[k] - h[k]) * (h_hat[k] - h[k]);
    return acc / static_cast<double>(h.size());
}

double mae(std::span<const double> h_hat, std::span<const double> h) {
    same_length(h_hat, h, "mae");
    double acc = 0;
    for (std::size_t k = 0; k < h.size(); ++k) acc += std::abs(h_hat[k] - h[k]);
    return acc / static_cast<double>(h.size());
}

double wce(std::span<const double> h_hat, std::span<const double> h) {
    same_length(h_hat, h, "wce");
    double m = 0;
    for (std::size_t k = 0; k < h.size(); ++k) m = std::max(m, std::abs(h_hat[k] - h[k]));
    return m;
}

double percentile(std::vector<double> v, double p) {
    if (v.empty()) throw DataError("percentile of an empty set");
    if (!(p > 0 && p <= 100)) throw DomainError("percentile must be in (0, 100]");
    std::sort(v.begin(), v.end());
    const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(v.size())));
    return v[std::max<std::size_t>(rank, 1) - 1];
}

double mean(std::span<const double> v) {
    if (v.empty()) throw DataError("mean of an empty set");
    double acc = 0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    if (v.empty()) throw DataError("median of an empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace {

template <typename F>
Aggregate aggregate(const std::vector<SequenceMetrics>& s, F f) {
    std::vector<double> v;
    v.reserve(s.size());
    for (const auto& m : s) v.push_back(f(m));
    return {mean(v), percentile(v, 95)};
}

}  // namespace

Aggregate MetricReport::sre() const { return aggregate(sequences, [](const auto& m) { return m.sre; }); }
Aggregate MetricReport::nere() const { return aggregate(sequences, [](const auto& m) { return m.nere; }); }
Aggregate MetricReport::mse() const { return aggregate(sequences, [](const auto& m) { return m.mse; }); }
Aggregate MetricReport::mae() const { return aggregate(sequences, [](const auto& m) { return m.mae; }); }
Aggregate MetricReport::wce() const { return aggregate(sequences, [](const auto& m) { return m.wce; }); }

nlohmann::json MetricReport::to_json() const {
    nlohmann::json j;
    j["count"] = sequences.size();
    auto agg = [](Aggregate a) { return nlohmann::json{{"mean", a.mean}, {"p95", a.p95}}; };
    j["aggregate"] = {{"sre", agg(sre())}, {"nere", agg(nere())}, {"mse", agg(mse())},
                      {"mae", agg(mae())}, {"wce", agg(wce())}};
    auto& seqs = j["sequences"] = nlohmann::json::array();
    for (const auto& m : sequences) {
        seqs.push_back({{"id", m.id}, {"sre", m.sre}, {"nere", m.nere}, {"mse", m.mse}, {"mae", m.mae},
                        {"wce", m.wce}});
    }
    return j;
}

std::string MetricReport::to_csv() const {
    using util::fmt;
    std::string out = "id,sre,nere,mse,mae,wce\n";
    for (const auto& m : sequences) {
        out += m.id + "," + fmt(m.sre) + "," + fmt(m.nere) + "," + fmt(m.mse) + "," + fmt(m.mae) + "," +
               fmt(m.wce) + "\n";
    }
    const Aggregate a[] = {sre(), nere(), mse(), mae(), wce()};
    out += "mean";
    for (const auto& x : a) out += "," + fmt(x.mean);
    out += "\np95";
    for (const auto& x : a) out += "," + fmt(x.p95);
    out += "\n";
    return out;
}

}  // namespace hsk::objectives
