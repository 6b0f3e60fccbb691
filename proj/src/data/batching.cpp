#include "hsk/data/batching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "hsk/error.hpp"

namespace hsk::data {

std::vector<MiniBatch> make_minibatches(std::span<const MeasuredSequence> seqs, std::size_t l, std::size_t b,
                                        std::size_t warmup, std::uint64_t seed) {
    if (b == 0) throw ConfigError("batch size must be >= 1");
    if (warmup == 0) throw ConfigError("warmup length must be >= 1");
    if (l < warmup + 2) {
        throw ConfigError("subsequence length " + std::to_string(l) + " is shorter than warmup + 2");
    }
    std::mt19937_64 rng(seed);
    std::vector<WindowRow> rows;
    std::vector<double> seq_rms(seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        const auto& s = seqs[i];
        const std::size_t n = s.size();
        if (n < l) {
            throw DataError("sequence '" + s.id + "' has " + std::to_string(n) + " samples, shorter than l = " +
                            std::to_string(l));
        }
        seq_rms[i] = rms(s.H);
        const std::size_t slack = n % l;
        const std::size_t offset = slack == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, slack)(rng);
        for (std::size_t start = offset; start + l <= n; start += l) {
            rows.push_back({i, {start, start + warmup, start + l - 1, n - 1}});
        }
    }
    std::shuffle(rows.begin(), rows.end(), rng);

    std::vector<MiniBatch> out;
    for (std::size_t first = 0; first + b <= rows.size(); first += b) {
        MiniBatch mb;
        mb.rows.assign(rows.begin() + static_cast<std::ptrdiff_t>(first),
                       rows.begin() + static_cast<std::ptrdiff_t>(first + b));
        mb.B = diff::Tensor<double>(b, l);
        mb.H = diff::Tensor<double>(b, l);
        mb.theta = diff::Tensor<double>(b, 1);
        mb.rms = diff::Tensor<double>(b, 1);
        for (std::size_t r = 0; r < b; ++r) {
            const auto& row = mb.rows[r];
            const auto& s = seqs[row.seq];
            for (std::size_t j = 0; j < l; ++j) {
                mb.B(r, j) = s.B[row.task.k0 + j];
                mb.H(r, j) = s.H[row.task.k0 + j];
            }
            mb.theta(r, 0) = s.temperature_C;
            mb.rms(r, 0) = seq_rms[row.seq];
        }
        out.push_back(std::move(mb));
    }
    return out;
}

Split split_dataset(std::span<const MeasuredSequence> seqs, std::array<double, 3> fractions, std::uint64_t seed) {
    if (seqs.empty()) throw DataError("cannot split an empty dataset");
    for (double f : fractions) {
        if (f < 0.0) throw ConfigError("split fractions must be non-negative");
    }
    if (std::abs(fractions[0] + fractions[1] + fractions[2] - 1.0) > 1e-9) {
        throw ConfigError("split fractions must sum to 1");
    }
    const std::size_t n = seqs.size();
    const auto count = [&](double f) {
        return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9));
    };
    std::size_t want_eval = count(fractions[1]);
    std::size_t want_test = count(fractions[2]);

    // Missing metadata forms its own stratum key (NaN would not compare).
    std::map<std::pair<double, double>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = seqs[i].f_sw_Hz.value_or(-1.0);
        strata[{f, seqs[i].temperature_C}].push_back(i);
    }
    std::mt19937_64 rng(seed);
    Split split;
    std::vector<std::vector<std::size_t>> pools;
    for (auto& [key, members] : strata) {
        std::shuffle(members.begin(), members.end(), rng);
        split.train.push_back(members.front());
        pools.emplace_back(members.begin() + 1, members.end());
    }
    std::vector<std::size_t> dealt;
    for (std::size_t round = 0;; ++round) {
        bool any = false;
        for (const auto& p : pools) {
            if (round < p.size()) {
                dealt.push_back(p[round]);
                any = true;
            }
        }
        if (!any) break;
    }
    want_test = std::min(want_test, dealt.size());
    want_eval = std::min(want_eval, dealt.size() - want_test);
    for (std::size_t i = 0; i < dealt.size(); ++i) {
        if (i < want_test) {
            split.test.push_back(dealt[i]);
        } else if (i < want_test + want_eval) {
            split.eval.push_back(dealt[i]);
        } else {
            split.train.push_back(dealt[i]);
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.eval.begin(), split.eval.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

}  // namespace hsk::data
