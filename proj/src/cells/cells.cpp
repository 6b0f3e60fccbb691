#include "hsk/cells/cells.hpp"

#include <cmath>
#include <random>

namespace hsk::cells {

const std::array<const char*, kGruTensors>& gru_names() {
    static const std::array<const char*, kGruTensors> n{"W_z", "W_r", "W", "U_z", "U_r",
                                                         "U",   "b_z", "b_r", "b", "b_n"};
    return n;
}

const std::array<const char*, kLstmTensors>& lstm_names() {
    static const std::array<const char*, kLstmTensors> n{"W_i", "W_f", "W_m", "W_o", "U_i", "U_f",
                                                          "U_m", "U_o", "b_i", "b_f", "b_m", "b_o"};
    return n;
}

std::size_t gru_param_count(std::size_t d_g, std::size_t d_x) {
    return 3 * d_g * d_x + 3 * d_g * d_g + 4 * d_g;
}

std::size_t lstm_param_count(std::size_t d_g, std::size_t d_x) {
    return 4 * (d_g * d_x + d_g * d_g + d_g);
}

std::size_t preisach_grid_size(std::size_t levels) { return levels * (levels + 1) / 2; }

std::size_t param_count(Archetype a, std::size_t d_g, std::size_t d_x) {
    if (d_g == 0 || d_x == 0) throw ConfigError("param_count: d_g and d_x must be >= 1");
    switch (a) {
        case Archetype::LstmP: return lstm_param_count(d_g, d_x);
        case Archetype::Ja: return 5;
        case Archetype::JaResidual:
        case Archetype::PinnJa: return gru_param_count(d_g, d_x) + 5;
        case Archetype::Preisach: return preisach_grid_size(d_g) + 3;
        default: return gru_param_count(d_g, d_x);
    }
}

namespace {

template <typename T>
Tensor<T> uniform(std::size_t r, std::size_t c, double bound, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    Tensor<T> t(r, c);
    for (auto& v : t.values()) v = static_cast<T>(dist(rng));
    return t;
}

}  // namespace

template <typename T>
GruParams<T> gru_init(std::size_t d_g, std::size_t d_x, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double bw = std::sqrt(1.0 / static_cast<double>(d_x));
    const double bu = std::sqrt(1.0 / static_cast<double>(d_g));
    GruParams<T> p;
    p.W_z = uniform<T>(d_g, d_x, bw, rng);
    p.W_r = uniform<T>(d_g, d_x, bw, rng);
    p.W = uniform<T>(d_g, d_x, bw, rng);
    p.U_z = uniform<T>(d_g, d_g, bu, rng);
    p.U_r = uniform<T>(d_g, d_g, bu, rng);
    p.U = uniform<T>(d_g, d_g, bu, rng);
    p.b_z = p.b_r = p.b = p.b_n = Tensor<T>(1, d_g);
    return p;
}

template <typename T>
LstmParams<T> lstm_init(std::size_t d_g, std::size_t d_x, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double bw = std::sqrt(1.0 / static_cast<double>(d_x));
    const double bu = std::sqrt(1.0 / static_cast<double>(d_g));
    LstmParams<T> p;
    p.W_i = uniform<T>(d_g, d_x, bw, rng);
    p.W_f = uniform<T>(d_g, d_x, bw, rng);
    p.W_m = uniform<T>(d_g, d_x, bw, rng);
    p.W_o = uniform<T>(d_g, d_x, bw, rng);
    p.U_i = uniform<T>(d_g, d_g, bu, rng);
    p.U_f = uniform<T>(d_g, d_g, bu, rng);
    p.U_m = uniform<T>(d_g, d_g, bu, rng);
    p.U_o = uniform<T>(d_g, d_g, bu, rng);
    p.b_i = p.b_f = p.b_m = p.b_o = Tensor<T>(1, d_g);
    return p;
}

template <typename T>
GruParams<T> gru_zeros(std::size_t d_g, std::size_t d_x) {
    const Tensor<T> w(d_g, d_x), u(d_g, d_g), b(1, d_g);
    return {w, w, w, u, u, u, b, b, b, b};
}

template <typename T>
LstmParams<T> lstm_zeros(std::size_t d_g, std::size_t d_x) {
    const Tensor<T> w(d_g, d_x), u(d_g, d_g), b(1, d_g);
    return {w, w, w, w, u, u, u, u, b, b, b, b};
}

template <typename T>
void append(ParamList<T>& out, const GruParams<T>& p, const std::string& prefix) {
    const auto v = flatten(p);
    for (std::size_t i = 0; i < kGruTensors; ++i) out.push_back({prefix + gru_names()[i], v[i]});
}

template <typename T>
void append(ParamList<T>& out, const LstmParams<T>& p, const std::string& prefix) {
    const auto v = flatten(p);
    for (std::size_t i = 0; i < kLstmTensors; ++i) out.push_back({prefix + lstm_names()[i], v[i]});
}

#define HSK_INSTANTIATE(T)                                                                     \
    template GruParams<T> gru_init<T>(std::size_t, std::size_t, std::uint64_t);                \
    template LstmParams<T> lstm_init<T>(std::size_t, std::size_t, std::uint64_t);              \
    template GruParams<T> gru_zeros<T>(std::size_t, std::size_t);                              \
    template LstmParams<T> lstm_zeros<T>(std::size_t, std::size_t);                            \
    template void append<T>(ParamList<T>&, const GruParams<T>&, const std::string&);           \
    template void append<T>(ParamList<T>&, const LstmParams<T>&, const std::string&);

HSK_INSTANTIATE(float)
HSK_INSTANTIATE(double)

#undef HSK_INSTANTIATE

}  // namespace hsk::cells
