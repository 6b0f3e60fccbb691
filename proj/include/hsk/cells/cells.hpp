#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsk/archetype.hpp"
#include "hsk/diff/eager.hpp"
#include "hsk/diff/graph.hpp"

namespace hsk::cells {

using diff::Tensor;

/// A trainable tensor with a stable name used by checkpoints.
template <typename T>
struct Param {
    std::string name;
    Tensor<T> value;
};

template <typename T>
using ParamList = std::vector<Param<T>>;

// Weight matrices are stored (out x in) so that a batch step computes x W^T.
// Biases are 1 x d_g rows.
template <typename V>
struct GruWeights {
    V W_z, W_r, W, U_z, U_r, U, b_z, b_r, b, b_n;
};

template <typename V>
struct LstmWeights {
    V W_i, W_f, W_m, W_o, U_i, U_f, U_m, U_o, b_i, b_f, b_m, b_o;
};

template <typename T>
using GruParams = GruWeights<Tensor<T>>;
template <typename T>
using LstmParams = LstmWeights<Tensor<T>>;

inline constexpr std::size_t kGruTensors = 10;
inline constexpr std::size_t kLstmTensors = 12;

const std::array<const char*, kGruTensors>& gru_names();
const std::array<const char*, kLstmTensors>& lstm_names();

template <typename V>
struct HiddenState {
    V g;
    V c;
    bool has_c = false;
};

template <typename V>
GruWeights<V> gru_view(std::span<const V> p) {
    if (p.size() < kGruTensors) throw ShapeError("gru_view: expected 10 tensors");
    return {p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7], p[8], p[9]};
}

template <typename V>
LstmWeights<V> lstm_view(std::span<const V> p) {
    if (p.size() < kLstmTensors) throw ShapeError("lstm_view: expected 12 tensors");
    return {p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7], p[8], p[9], p[10], p[11]};
}

template <typename V>
std::vector<V> flatten(const GruWeights<V>& p) {
    return {p.W_z, p.W_r, p.W, p.U_z, p.U_r, p.U, p.b_z, p.b_r, p.b, p.b_n};
}

template <typename V>
std::vector<V> flatten(const LstmWeights<V>& p) {
    return {p.W_i, p.W_f, p.W_m, p.W_o, p.U_i, p.U_f, p.U_m, p.U_o, p.b_i, p.b_f, p.b_m, p.b_o};
}

/// One GRU step on a batch: x is (b x d_x), g_prev is (b x d_g).
template <typename V>
V gru_step(const V& x, const V& g_prev, const GruWeights<V>& p) {
    using diff::matmul_nt;
    const V z = sigmoid(matmul_nt(x, p.W_z) + p.b_z + matmul_nt(g_prev, p.U_z));
    const V r = sigmoid(matmul_nt(x, p.W_r) + p.b_r + matmul_nt(g_prev, p.U_r));
    const V n = tanh(matmul_nt(x, p.W) + p.b + r * (matmul_nt(g_prev, p.U) + p.b_n));
    return n + z * (g_prev - n);
}

template <typename V>
HiddenState<V> lstm_step(const V& x, const HiddenState<V>& s, const LstmWeights<V>& p) {
    using diff::matmul_nt;
    if (!s.has_c) throw StateError("lstm_step: missing cell state");
    const V i = sigmoid(matmul_nt(x, p.W_i) + p.b_i + matmul_nt(s.g, p.U_i));
    const V f = sigmoid(matmul_nt(x, p.W_f) + p.b_f + matmul_nt(s.g, p.U_f));
    const V m = tanh(matmul_nt(x, p.W_m) + p.b_m + matmul_nt(s.g, p.U_m));
    const V o = sigmoid(matmul_nt(x, p.W_o) + p.b_o + matmul_nt(s.g, p.U_o));
    const V c = f * s.c + i * m;
    return {o * tanh(c), c, true};
}

std::size_t gru_param_count(std::size_t d_g, std::size_t d_x);
std::size_t lstm_param_count(std::size_t d_g, std::size_t d_x);

/// Number of hysterons on a Preisach grid with `levels` thresholds per axis.
std::size_t preisach_grid_size(std::size_t levels);

/// Trainable scalar count of an archetype. For the Preisach model `d_g` is
/// the number of threshold levels per grid axis.
std::size_t param_count(Archetype a, std::size_t d_g, std::size_t d_x);

/// Uniform on +-sqrt(1/d_g) for the U family, +-sqrt(1/d_x) for the W family,
/// zero biases.
template <typename T>
GruParams<T> gru_init(std::size_t d_g, std::size_t d_x, std::uint64_t seed);

template <typename T>
LstmParams<T> lstm_init(std::size_t d_g, std::size_t d_x, std::uint64_t seed);

template <typename T>
GruParams<T> gru_zeros(std::size_t d_g, std::size_t d_x);

template <typename T>
LstmParams<T> lstm_zeros(std::size_t d_g, std::size_t d_x);

template <typename T>
void append(ParamList<T>& out, const GruParams<T>& p, const std::string& prefix = "gru.");

template <typename T>
void append(ParamList<T>& out, const LstmParams<T>& p, const std::string& prefix = "lstm.");

template <typename T>
std::size_t count(const ParamList<T>& params) {
    std::size_t n = 0;
    for (const auto& p : params) n += p.value.size();
    return n;
}

}  // namespace hsk::cells
