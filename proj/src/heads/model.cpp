#include "hsk/heads/model.hpp"

#include <cmath>

namespace hsk::heads {

std::size_t gru_v_grid(std::size_t d_g) {
    const auto half = d_g / 2;
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(half))));
    if (d_g % 2 != 0 || side * side != half || side < 2) {
        throw ConfigError("GRU-V needs d_g = 2 (N_g + 1)^2 with N_g >= 1, got " + std::to_string(d_g));
    }
    return side - 1;
}

void ModelConfig::validate() const {
    if (d_g == 0) throw ConfigError("hidden size must be >= 1");
    if (d_x < 1 || d_x > 4) throw ConfigError("d_x must be between 1 and 4");
    if (warmup_length == 0) throw ConfigError("warmup length must be >= 1");
    if (archetype == Archetype::GruV) gru_v_grid(d_g);
    if (archetype == Archetype::GruJadp && d_g < 5) throw ConfigError("GRU-JADP needs d_g >= 5");
    if (!(preisach_T > 0.0)) throw ConfigError("Preisach sharpness must be positive");
    for (double e : eta.array()) {
        if (!(e > 0.0)) throw ConfigError("JA scaling factors must be positive");
    }
}

template <typename T>
Model<T> make_model(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Model<T> m;
    m.cfg = cfg;
    switch (cfg.archetype) {
        case Archetype::LstmP:
            cells::append(m.params, cells::lstm_init<T>(cfg.d_g, cfg.d_x, seed));
            break;
        case Archetype::Ja:
            m.params.push_back({"ja.theta", Tensor<T>(1, 5)});
            break;
        case Archetype::Preisach: {
            const std::size_t n = cells::preisach_grid_size(cfg.d_g);
            m.params.push_back({"preisach.w0", Tensor<T>::scalar(T(0))});
            m.params.push_back({"preisach.w1", Tensor<T>::scalar(T(0.5))});
            m.params.push_back({"preisach.w2", Tensor<T>::scalar(T(0.5))});
            m.params.push_back({"preisach.mu", Tensor<T>(1, n, static_cast<T>(1.0 / static_cast<double>(n)))});
            break;
        }
        default:
            cells::append(m.params, cells::gru_init<T>(cfg.d_g, cfg.d_x, seed));
            if (cfg.archetype == Archetype::JaResidual || cfg.archetype == Archetype::PinnJa) {
                m.params.push_back({"ja.theta", Tensor<T>(1, 5)});
            }
            break;
    }
    return m;
}

template Model<float> make_model<float>(const ModelConfig&, std::uint64_t);
template Model<double> make_model<double>(const ModelConfig&, std::uint64_t);

}  // namespace hsk::heads
