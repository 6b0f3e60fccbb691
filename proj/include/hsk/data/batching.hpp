#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hsk/data/sequence.hpp"
#include "hsk/diff/tensor.hpp"

namespace hsk::data {

/// One batch row: a task window on a source sequence.
struct WindowRow {
    std::size_t seq = 0;
    PredictionTask task;
};

struct MiniBatch {
    std::vector<WindowRow> rows;
    diff::Tensor<double> B;      // b x l, tesla
    diff::Tensor<double> H;      // b x l, A/m
    diff::Tensor<double> theta;  // b x 1, degrees C
    diff::Tensor<double> rms;    // b x 1, RMS of H over the whole source sequence
};

/// Cut every sequence into non-overlapping subsequences of length l after a
/// random offset in [0, n mod l], shuffle them and group b at a time. A last
/// partial batch is dropped. Subsequence rows carry the task
/// (start, start + warmup, start + l - 1, n - 1).
std::vector<MiniBatch> make_minibatches(std::span<const MeasuredSequence> seqs, std::size_t l, std::size_t b,
                                        std::size_t warmup, std::uint64_t seed);

struct Split {
    std::vector<std::size_t> train, eval, test;
};

/// Partition indices of `seqs`. Sequences are grouped by (f_sw, temperature);
/// one member of each group is always kept for training and the remaining
/// members are dealt round-robin across groups to test, then eval, until the
/// requested counts floor(n * fraction) are met.
Split split_dataset(std::span<const MeasuredSequence> seqs, std::array<double, 3> fractions, std::uint64_t seed);

template <typename S>
std::vector<S> take(std::span<const S> all, std::span<const std::size_t> idx) {
    std::vector<S> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(all[i]);
    return out;
}

}  // namespace hsk::data
