#include "hsk/physics/ja.hpp"

#include <cmath>

#include "hsk/diff/special.hpp"

namespace hsk::physics {

double ja_m_an(double He, double Ms, double a) {
    if (!(a > 0.0)) throw DomainError("ja_m_an: a must be positive");
    return Ms * diff::special::langevin(He / a);
}

JaPhysical ja_params_from_theta(const std::array<double, 5>& theta, const JaScales& eta) {
    const auto e = eta.array();
    std::array<double, 5> z{};
    for (std::size_t i = 0; i < 5; ++i) {
        if (!(e[i] > 0.0)) throw ConfigError("JA scaling factors must be positive");
        z[i] = e[i] * diff::special::sigmoid(theta[i]);
    }
    return {z[0], z[1], z[2], z[3], z[4]};
}

std::array<double, 5> ja_theta_from_params(const JaPhysical& p, const JaScales& eta) {
    const std::array<double, 5> z{p.Ms, p.a, p.alpha_w, p.k, p.c};
    const auto e = eta.array();
    std::array<double, 5> th{};
    for (std::size_t i = 0; i < 5; ++i) {
        const double q = z[i] / e[i];
        if (!(q > 0.0 && q < 1.0)) throw DomainError("JA parameter outside (0, eta)");
        th[i] = std::log(q / (1.0 - q));
    }
    return th;
}

double ja_dmdh(const JaState& s, double dB, const JaPhysical& p) {
    if (dB == 0.0) return 0.0;
    const double delta = dB > 0.0 ? 1.0 : -1.0;
    const double He = s.H + p.alpha_w * s.M;
    const double x = He / p.a;
    const double M_an = p.Ms * diff::special::langevin(x);
    const double dM_an = p.Ms / p.a * diff::special::langevin_deriv(x);
    const double gap = M_an - s.M;
    const double irr = delta * gap < 0.0 ? 0.0 : gap;
    const double N = irr + p.c * p.k * delta * dM_an;
    const double den = p.k * delta - p.alpha_w * N;
    if (std::abs(den) < 1e-30) throw SingularityError("ja_dmdh: vanishing denominator");
    return N / den;
}

namespace {

double increment(const JaState& s, double dB, const JaPhysical& p) {
    const double D = ja_dmdh(s, dB, p);
    if (D == -1.0) throw SingularityError("JA step: dM/dH = -1");
    return dB * (1.0 / kMu0) * (1.0 - D / (1.0 + D));
}

}  // namespace

JaState ja_step_euler(const JaState& s, double B_k, double B_next, double tau, const JaPhysical& p) {
    if (!(tau > 0.0)) throw DomainError("ja_step_euler: tau must be positive");
    const double H = s.H + increment(s, B_next - B_k, p);
    return {H, B_next * (1.0 / kMu0) - H};
}

double ja_delta_h(double H, double B_k, double B_next, const JaPhysical& p) {
    return increment({H, B_k * (1.0 / kMu0) - H}, B_next - B_k, p);
}

PinnResidual pinn_ja_residual(std::span<const double> H, std::span<const double> B, const JaPhysical& p) {
    if (H.size() != B.size()) throw ShapeError("pinn_ja_residual: H and B lengths differ");
    if (H.size() < 2) throw ShapeError("pinn_ja_residual: need at least 2 samples");
    PinnResidual r;
    double acc = 0.0;
    for (std::size_t k = 1; k < H.size(); ++k) {
        const double e = ja_delta_h(H[k - 1], B[k - 1], B[k], p) - (H[k] - H[k - 1]);
        r.e.push_back(e);
        acc += e * e;
    }
    r.loss = std::sqrt(acc / static_cast<double>(r.e.size()));
    return r;
}

}  // namespace hsk::physics
