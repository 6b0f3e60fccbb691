#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hsk/diff/graph.hpp"

namespace hsk::diff {

enum class Stencil {
    ThreePoint,  // (f(x+h) - f(x-h)) / 2h
    FivePoint,   // fourth order; much smaller truncation error at larger h
};

/// Compare reverse-mode gradients of the scalar `out` against central
/// differences taken by replaying the tape. Returns the largest
///   |analytic - numeric| / max(|analytic|, |numeric|, floor)
/// over every element of every leaf in `leaves`, where floor is
/// max(1e-12, rel_floor * largest |analytic| entry).
inline double finite_diff_check(Graph<double>& g, Var<double> out, std::span<const Var<double>> leaves,
                                double eps = 1e-6, Stencil stencil = Stencil::ThreePoint, double rel_floor = 0.0) {
    if (g.value(out).size() != 1) throw ShapeError("finite_diff_check needs a scalar output");
    g.forward();
    g.backward(out);
    std::vector<Tensor<double>> analytic;
    analytic.reserve(leaves.size());
    double scale = 0.0;
    for (const auto& v : leaves) {
        analytic.push_back(g.grad(v));
        for (double a : analytic.back().values()) scale = std::max(scale, std::abs(a));
    }
    const double floor = std::max(1e-12, rel_floor * scale);

    double worst = 0.0;
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        const Tensor<double> base = g.value(leaves[l]);
        for (std::size_t i = 0; i < base.size(); ++i) {
            auto at = [&](double h) {
                Tensor<double> p = base;
                p[i] = base[i] + h;
                g.set_value(leaves[l], p);
                g.forward();
                return g.value(out).item();
            };
            const double numeric =
                stencil == Stencil::ThreePoint
                    ? (at(eps) - at(-eps)) / (2.0 * eps)
                    : (8.0 * (at(eps) - at(-eps)) - (at(2 * eps) - at(-2 * eps))) / (12.0 * eps);
            const double a = analytic[l][i];
            const double denom = std::max({std::abs(a), std::abs(numeric), floor});
            worst = std::max(worst, std::abs(a - numeric) / denom);
        }
        g.set_value(leaves[l], base);
    }
    g.forward();
    return worst;
}

inline double finite_diff_check(Graph<double>& g, Var<double> out, double eps = 1e-6,
                                Stencil stencil = Stencil::ThreePoint, double rel_floor = 0.0) {
    const auto params = g.parameters();
    return finite_diff_check(g, out, std::span<const Var<double>>(params), eps, stencil, rel_floor);
}

}  // namespace hsk::diff
