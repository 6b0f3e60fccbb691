#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hsk/data/batching.hpp"
#include "hsk/data/sequence.hpp"
#include "hsk/diff/tensor.hpp"

namespace hsk::data {

/// Model-ready view of a batch of task windows sharing one window length and
/// warmup length. Column j corresponds to sample k0 + j of each row.
template <typename T>
struct Window {
    std::size_t rows = 0;
    std::size_t len = 0;
    std::size_t warmup = 0;
    std::size_t d_x = 4;
    std::vector<diff::Tensor<T>> x;  // len entries of rows x d_x
    diff::Tensor<T> u, y;            // normalized input (B~) and target (H~), rows x len
    diff::Tensor<T> u_raw, y_raw;    // physical units
    diff::Tensor<T> rms;             // rows x 1, RMS of the full target sequence
    T u_max = T(1);
    T y_max = T(1);
    double tau = kDefaultTau;

    std::size_t horizon() const { return len - warmup; }

    diff::Tensor<T> col(const diff::Tensor<T>& m, std::size_t j) const {
        diff::Tensor<T> c(rows, 1);
        for (std::size_t r = 0; r < rows; ++r) c(r, 0) = m(r, j);
        return c;
    }

    /// |u_k - u_{k-1}| over the prediction columns; the first weight uses the
    /// last warmup sample.
    diff::Tensor<T> loss_weights() const {
        diff::Tensor<T> w(rows, horizon());
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < horizon(); ++j) {
                const std::size_t c = warmup + j;
                w(r, j) = c == 0 ? T(0) : std::abs(u(r, c) - u(r, c - 1));
            }
        }
        return w;
    }

    diff::Tensor<T> target() const {
        diff::Tensor<T> t(rows, horizon());
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < horizon(); ++j) t(r, j) = y(r, warmup + j);
        }
        return t;
    }

    Window slice_rows(std::size_t r0, std::size_t r1) const {
        Window w;
        w.rows = r1 - r0;
        w.len = len;
        w.warmup = warmup;
        w.d_x = d_x;
        w.u_max = u_max;
        w.y_max = y_max;
        w.tau = tau;
        auto cut = [&](const diff::Tensor<T>& m) {
            diff::Tensor<T> o(w.rows, m.cols());
            for (std::size_t r = 0; r < w.rows; ++r) {
                for (std::size_t j = 0; j < m.cols(); ++j) o(r, j) = m(r0 + r, j);
            }
            return o;
        };
        w.x.reserve(x.size());
        for (const auto& xi : x) w.x.push_back(cut(xi));
        w.u = cut(u);
        w.y = cut(y);
        w.u_raw = cut(u_raw);
        w.y_raw = cut(y_raw);
        w.rms = cut(rms);
        return w;
    }
};

/// Build a window batch. Every row must have the same window and warmup
/// length. The first d_x feature rows (B~, dB~, d2B~, theta~) are used.
template <typename T>
Window<T> make_window(std::span<const MeasuredSequence> seqs, std::span<const WindowRow> rows,
                      const NormConstants& norm, std::size_t d_x) {
    if (rows.empty()) throw DataError("make_window: no rows");
    if (d_x < 1 || d_x > 4) throw ConfigError("d_x must be between 1 and 4");
    norm.validate();
    Window<T> w;
    w.rows = rows.size();
    w.len = rows[0].task.window();
    w.warmup = rows[0].task.warmup();
    w.d_x = d_x;
    w.u_max = static_cast<T>(norm.B_max);
    w.y_max = static_cast<T>(norm.H_max);
    w.tau = seqs[rows[0].seq].tau_s;
    w.u = w.y = w.u_raw = w.y_raw = diff::Tensor<T>(w.rows, w.len);
    w.rms = diff::Tensor<T>(w.rows, 1);
    w.x.assign(w.len, diff::Tensor<T>(w.rows, d_x));
    for (std::size_t r = 0; r < w.rows; ++r) {
        const auto& row = rows[r];
        if (row.seq >= seqs.size()) throw DataError("make_window: sequence index out of range");
        const auto& s = seqs[row.seq];
        if (row.task.window() != w.len || row.task.warmup() != w.warmup) {
            throw ShapeError("make_window: rows disagree on window or warmup length");
        }
        const auto X = featurize(s, row.task, norm);
        for (std::size_t j = 0; j < w.len; ++j) {
            const std::size_t k = row.task.k0 + j;
            for (std::size_t f = 0; f < d_x; ++f) w.x[j](r, f) = static_cast<T>(X(f, j));
            w.u(r, j) = static_cast<T>(X(0, j));
            w.y(r, j) = static_cast<T>(s.H[k] / norm.H_max);
            w.u_raw(r, j) = static_cast<T>(s.B[k]);
            w.y_raw(r, j) = static_cast<T>(s.H[k]);
        }
        w.rms(r, 0) = static_cast<T>(rms(std::span<const double>(s.H).first(row.task.k3 + 1)));
    }
    return w;
}

template <typename T>
Window<T> make_window(std::span<const MeasuredSequence> seqs, const MiniBatch& mb, const NormConstants& norm,
                      std::size_t d_x) {
    return make_window<T>(seqs, std::span<const WindowRow>(mb.rows), norm, d_x);
}

/// Single-row window over a whole sequence.
template <typename T>
Window<T> full_window(const MeasuredSequence& s, std::size_t warmup, const NormConstants& norm, std::size_t d_x) {
    const WindowRow row{0, full_task(s.size(), warmup)};
    return make_window<T>(std::span<const MeasuredSequence>(&s, 1), std::span<const WindowRow>(&row, 1), norm,
                          d_x);
}

}  // namespace hsk::data
