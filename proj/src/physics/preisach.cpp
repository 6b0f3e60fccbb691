#include "hsk/physics/preisach.hpp"

#include <algorithm>
#include <cmath>

#include "hsk/error.hpp"

namespace hsk::physics {

PreisachGrid PreisachGrid::make(std::size_t levels, double lo, double hi) {
    if (levels == 0) throw ConfigError("Preisach grid needs at least one level");
    if (!(hi > lo)) throw ConfigError("Preisach grid range is empty");
    PreisachGrid g;
    auto level = [&](std::size_t i) {
        return levels == 1 ? 0.5 * (lo + hi)
                           : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(levels - 1);
    };
    for (std::size_t i = 0; i < levels; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            g.alpha.push_back(level(i));
            g.beta.push_back(level(j));
        }
    }
    return g;
}

double preisach_hysteron(double h, double h_prev, double g_prev, double alpha, double beta, double T) {
    if (!(T > 0.0)) throw DomainError("hysteron sharpness must be positive");
    if (h > h_prev) return std::min(g_prev + 1.0 + std::tanh((h - alpha) / T), 1.0);
    return std::max(g_prev - 1.0 - std::tanh((beta - h) / T), -1.0);
}

std::vector<double> preisach_predict(std::span<const double> u, const PreisachParams& p) {
    const std::size_t N = p.grid.size();
    if (p.mu.size() != N) throw ShapeError("preisach_predict: mu length does not match the grid");
    std::vector<double> gamma(N, -1.0), out;
    out.reserve(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (k > 0) {
            for (std::size_t n = 0; n < N; ++n) {
                gamma[n] = preisach_hysteron(u[k], u[k - 1], gamma[n], p.grid.alpha[n], p.grid.beta[n], p.T);
            }
        }
        double s = 0.0;
        for (std::size_t n = 0; n < N; ++n) s += p.mu[n] * gamma[n];
        out.push_back(p.w2 * s + p.w1 * u[k] + p.w0);
    }
    return out;
}

}  // namespace hsk::physics
