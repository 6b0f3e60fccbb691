#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "hsk/archetype.hpp"
#include "hsk/cells/cells.hpp"
#include "hsk/physics/ja.hpp"
#include "hsk/physics/preisach.hpp"

namespace hsk::heads {

using diff::Tensor;

inline constexpr double kEpsB = 1e-6;  // GRU-L division guard on |B~|

struct ModelConfig {
    Archetype archetype = Archetype::GruP;
    std::size_t d_g = 8;  // hidden size; threshold levels per axis for the Preisach model
    std::size_t d_x = 4;
    std::size_t warmup_length = 16;
    physics::JaScales eta;
    double preisach_T = physics::kPreisachSharpness;

    void validate() const;
};

/// N_g for a GRU-V state of size d_g = 2 (N_g + 1)^2.
std::size_t gru_v_grid(std::size_t d_g);

/// Named parameters laid out per archetype:
///   GRU heads         gru.{W_z ... b_n}
///   LSTM-P            lstm.{W_i ... b_o}
///   JA                ja.theta (1 x 5)
///   JA-RES, PINN-JA   gru.* then ja.theta
///   Preisach          preisach.w0, preisach.w1, preisach.w2, preisach.mu (1 x N)
template <typename T>
struct Model {
    ModelConfig cfg;
    cells::ParamList<T> params;

    std::size_t param_count() const { return cells::count(params); }
};

template <typename T>
Model<T> make_model(const ModelConfig& cfg, std::uint64_t seed);

}  // namespace hsk::heads
