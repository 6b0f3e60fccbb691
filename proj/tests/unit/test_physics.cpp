#include <cmath>
#include <random>

#include "doctest.h"
#include "hsk/diff/gradcheck.hpp"
#include "hsk/physics/ja.hpp"
#include "hsk/physics/preisach.hpp"
#include "hsk/physics/synth.hpp"

using namespace hsk;
using namespace hsk::physics;
using diff::Tensor;

namespace {

const JaPhysical kJa{3.5e5, 25.0, 5e-5, 30.0, 0.3};

Tensor<double> col(double v) { return Tensor<double>(1, 1, v); }

}  // namespace

TEST_CASE("anhysteretic magnetization") {
    CHECK(ja_m_an(0.0, 1e5, 10.0) == 0.0);
    CHECK(ja_m_an(1e9, 1e5, 10.0) == doctest::Approx(1e5).epsilon(1e-6));
    CHECK(ja_m_an(10.0, 1e5, 10.0) == doctest::Approx(0.313035 * 1e5).epsilon(1e-6));
    CHECK(ja_m_an(1e-9, 3.0, 1.0) == doctest::Approx(1e-9).epsilon(1e-6));
    CHECK(ja_m_an(-10.0, 1e5, 10.0) == -ja_m_an(10.0, 1e5, 10.0));
}

TEST_CASE("sigmoid parameter mapping") {
    const JaScales eta;
    const auto half = ja_params_from_theta({0, 0, 0, 0, 0}, eta);
    CHECK(half.Ms == eta.Ms / 2);
    CHECK(half.c == eta.c / 2);
    const auto top = ja_params_from_theta({40, 40, 40, 40, 40}, eta);
    CHECK(top.a == doctest::Approx(eta.a));
    const JaPhysical p{0.3 * eta.Ms, 0.3 * eta.a, 0.3 * eta.alpha_w, 0.3 * eta.k, 0.3 * eta.c};
    const auto th = ja_theta_from_params(p, eta);
    for (double t : th) CHECK(t == doctest::Approx(std::log(3.0 / 7.0)).epsilon(1e-12));
    CHECK(std::log(3.0 / 7.0) == doctest::Approx(-0.8473).epsilon(1e-4));
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0, 5);
    for (int i = 0; i < 100; ++i) {
        const auto q = ja_params_from_theta({n(rng), n(rng), n(rng), n(rng), n(rng)}, eta);
        CHECK((q.Ms > 0 && q.Ms < eta.Ms && q.k > 0 && q.k < eta.k && q.c > 0 && q.c < eta.c));
    }
    CHECK_THROWS_AS(ja_theta_from_params({eta.Ms, 1, 1e-3, 1, 0.1}, eta), DomainError);
}

TEST_CASE("dM/dH casework") {
    JaPhysical p = kJa;
    // Falling flux with M below the anhysteretic curve: no irreversible term.
    p.c = 0.0;
    const JaState below{10.0, 0.0};
    CHECK(ja_m_an(below.H + p.alpha_w * below.M, p.Ms, p.a) > below.M);
    CHECK(ja_dmdh(below, -1e-3, p) == 0.0);
    CHECK(ja_dmdh(below, 1e-3, p) > 0.0);
    // On the anhysteretic curve with c = 0 the numerator vanishes.
    p.alpha_w = 0.0;
    const JaState on{10.0, ja_m_an(10.0, p.Ms, p.a)};
    CHECK(ja_dmdh(on, 1e-3, p) == 0.0);
    CHECK(ja_dmdh(on, 0.0, kJa) == 0.0);
}

TEST_CASE("Euler step") {
    const JaState s{12.0, 0.08 / kMu0 - 12.0};
    CHECK(ja_step_euler(s, 0.08, 0.08, 62.5e-9, kJa).H == s.H);
    // Vacuum response: c = 0, alpha = 0 and M on the anhysteretic curve.
    JaPhysical p = kJa;
    p.c = 0;
    p.alpha_w = 0;
    const double H = 15.0, M = ja_m_an(H, p.Ms, p.a);
    const double B = kMu0 * (H + M);
    const auto n = ja_step_euler({H, M}, B, B + 1e-4, 62.5e-9, p);
    CHECK(n.H - H == doctest::Approx(1e-4 / kMu0).epsilon(1e-12));
    CHECK(n.M == doctest::Approx((B + 1e-4) / kMu0 - n.H));
    CHECK_THROWS_AS(ja_step_euler(s, 0.0, 0.1, 0.0, kJa), DomainError);
}

TEST_CASE("sinusoidal excitation closes a loop with positive area") {
    SynthConfig c;
    c.count = 3;
    c.samples_per_period_min = c.samples_per_period_max = 200;
    c.length = 201;
    for (const auto& s : synth_ja_dataset(c)) {
        double peak = 0, area = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            peak = std::max(peak, std::abs(s.H[k]));
            if (k) area += s.H[k] * (s.B[k] - s.B[k - 1]);
        }
        CHECK(std::abs(s.H.back() - s.H.front()) < 0.01 * peak);
        CHECK(area > 0.0);
    }
}

TEST_CASE("batched JA increment matches the scalar model") {
    const JaScales eta;
    const std::array<double, 5> th{0.4, -3.2, -4.5, -3.4, -0.6};
    const auto p = ja_params_from_theta(th, eta);
    Tensor<double> theta(1, 5);
    for (std::size_t i = 0; i < 5; ++i) theta[i] = th[i];
    const auto coeffs = ja_coeffs<double>(theta, eta);
    for (double dB : {1e-4, -2e-4, 0.0}) {
        for (double H : {-20.0, 3.0, 35.0}) {
            const double B = 0.05;
            const auto got = ja_delta_h<double>(col(H), col(B), col(B + dB), coeffs);
            CHECK(got[0] == doctest::Approx(ja_delta_h(H, B, B + dB, p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("coupled GRU-JA step") {
    const JaScales eta;
    auto w = cells::gru_zeros<double>(6, 2);
    w.b = Tensor<double>(1, 6);
    for (std::size_t i = 0; i < 6; ++i) w.b[i] = 0.3 * static_cast<double>(i) - 0.9;
    w.b_z = Tensor<double>(1, 6, -800.0);  // z = 0: the output is tanh(b) regardless of input
    Tensor<double> x(1, 2, 0.4), g(1, 6, 0.1);
    const double B0 = 0.03, B1 = 0.0305;
    auto [H1, g1] = gru_jadp_step<double>(x, g, w, eta, col(5.0), col(B0), col(B1));
    std::array<double, 5> th;
    for (std::size_t i = 0; i < 5; ++i) th[i] = std::tanh(w.b[i]);
    CHECK(H1[0] == doctest::Approx(5.0 + ja_delta_h(5.0, B0, B1, ja_params_from_theta(th, eta))).epsilon(1e-12));
    // Flat flux leaves H unchanged whatever the network emits.
    auto [H2, g2] = gru_jadp_step<double>(x, g1, w, eta, H1, col(B1), col(B1));
    CHECK(H2[0] == H1[0]);
}

TEST_CASE("JA with residual GRU increment") {
    const Tensor<double> ja = col(1.5), inc = col(0.25);
    CHECK(ja_residual_step<double>(ja, inc)[0] == 1.75);
    CHECK(ja_residual_step<double>(ja, col(0.0))[0] == 1.5);
    CHECK_THROWS_AS(ja_residual_step<float>(Tensor<float>(1, 1, 1.f), Tensor<float>(1, 1, 0.f)), ConfigError);
}

TEST_CASE("JA residual regularizer") {
    const std::vector<double> B{0.01, 0.012, 0.015, 0.013};
    std::vector<double> H{4.0};
    for (std::size_t k = 1; k < B.size(); ++k) H.push_back(H.back() + ja_delta_h(H.back(), B[k - 1], B[k], kJa));
    CHECK(pinn_ja_residual(H, B, kJa).loss == doctest::Approx(0.0).epsilon(1e-15));

    const std::vector<double> H2{4.0, 6.0, 5.0}, B2{0.01, 0.012, 0.011};
    const double e1 = ja_delta_h(4.0, 0.01, 0.012, kJa) - 2.0;
    const double e2 = ja_delta_h(6.0, 0.012, 0.011, kJa) + 1.0;
    const auto r = pinn_ja_residual(H2, B2, kJa);
    CHECK(r.e[0] == doctest::Approx(e1));
    CHECK(r.e[1] == doctest::Approx(e2));
    CHECK(r.loss == doctest::Approx(std::sqrt((e1 * e1 + e2 * e2) / 2)));

    const JaScales eta;
    const auto th = ja_theta_from_params(kJa, eta);
    Tensor<double> theta(1, 5), Ht(1, 3), Bt(1, 3);
    for (std::size_t i = 0; i < 5; ++i) theta[i] = th[i];
    for (std::size_t i = 0; i < 3; ++i) Ht[i] = H2[i], Bt[i] = B2[i];
    const auto batched = pinn_ja_loss<double>(Ht, Bt, ja_coeffs<double>(theta, eta), 1.0);
    CHECK(batched[0] == doctest::Approx(r.loss).epsilon(1e-9));
}

TEST_CASE("JA gradients match finite differences") {
    const JaScales eta;
    const auto th = ja_theta_from_params(kJa, eta);
    diff::Graph<double> g;
    Tensor<double> t0(1, 5);
    for (std::size_t i = 0; i < 5; ++i) t0[i] = th[i];
    const auto theta = g.parameter(t0);
    const auto coeffs = ja_coeffs<double>(theta, eta);
    auto H = g.constant(col(2.0));
    std::vector<diff::Var<double>> hs;
    for (int k = 0; k < 12; ++k) {
        const double b0 = 0.03 * std::sin(0.3 * k), b1 = 0.03 * std::sin(0.3 * (k + 1));
        H = H + ja_delta_h<double>(H, col(b0), col(b1), coeffs);
        hs.push_back(H);
    }
    const auto out = diff::sum(diff::concat_cols(std::span<const diff::Var<double>>(hs)));
    CHECK(diff::finite_diff_check(g, out, 1e-6) < 1e-5);
}

TEST_CASE("hysteron") {
    const double T = kPreisachSharpness;
    CHECK(preisach_hysteron(10.0, -10.0, -1.0, 0.2, -0.2, T) == 1.0);
    CHECK(preisach_hysteron(-10.0, 10.0, 1.0, 0.2, -0.2, T) == -1.0);
    // Equal input takes the falling branch.
    CHECK(preisach_hysteron(-0.5, -0.5, 1.0, 0.2, -0.2, T) == -1.0);
    CHECK(preisach_hysteron(0.5, 0.5, 1.0, 0.2, -0.2, T) == 1.0);
    // Between the thresholds the state is kept.
    CHECK(preisach_hysteron(0.0, -0.1, -1.0, 0.2, -0.2, T) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(preisach_hysteron(0.0, 0.1, 1.0, 0.2, -0.2, T) == doctest::Approx(1.0).epsilon(1e-12));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    const auto grid = PreisachGrid::make(9);
    std::vector<double> g(grid.size(), -1.0);
    double prev = 0;
    for (int k = 0; k < 2000; ++k) {
        const double h = u(rng);
        for (std::size_t n = 0; n < grid.size(); ++n) {
            g[n] = preisach_hysteron(h, prev, g[n], grid.alpha[n], grid.beta[n], T);
            CHECK((g[n] >= -1.0 && g[n] <= 1.0));
        }
        prev = h;
    }
}

TEST_CASE("Preisach grid and prediction") {
    const auto grid = PreisachGrid::make(17);
    CHECK(grid.size() == 153);
    for (std::size_t n = 0; n < grid.size(); ++n) CHECK(grid.alpha[n] >= grid.beta[n]);

    std::vector<double> u;
    for (int k = 0; k <= 40; ++k) u.push_back(-1.0 + 0.05 * k);
    for (int k = 1; k <= 40; ++k) u.push_back(1.0 - 0.05 * k);
    PreisachParams p{PreisachGrid::make(5), std::vector<double>(15, 0.0), 0.0, 1.0, 0.0, kPreisachSharpness};
    auto y = preisach_predict(u, p);
    for (std::size_t k = 0; k < u.size(); ++k) CHECK(y[k] == u[k]);
    p.w0 = 0.3;
    p.w2 = 2.0;
    y = preisach_predict(u, p);
    for (std::size_t k = 0; k < u.size(); ++k) CHECK(y[k] == doctest::Approx(u[k] + 0.3));

    // Weight on off-diagonal cells opens the loop.
    for (std::size_t n = 0; n < p.grid.size(); ++n) p.mu[n] = p.grid.alpha[n] > p.grid.beta[n] ? 0.1 : 0.0;
    p.w0 = 0;
    y = preisach_predict(u, p);
    const std::size_t up = 20, down = 60;  // both at u = 0
    CHECK(u[up] == doctest::Approx(u[down]));
    CHECK(std::abs(y[up] - y[down]) > 0.1);
}

TEST_CASE("batched Preisach matches the scalar model") {
    const auto grid = PreisachGrid::make(6);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> d(-1, 1);
    PreisachParams p{grid, std::vector<double>(grid.size()), 0.1, 0.4, 0.7, kPreisachSharpness};
    for (auto& m : p.mu) m = std::abs(d(rng));
    Tensor<double> u(1, 30), mu(1, grid.size());
    std::vector<double> us;
    for (std::size_t k = 0; k < 30; ++k) us.push_back(u[k] = d(rng));
    for (std::size_t n = 0; n < grid.size(); ++n) mu[n] = p.mu[n];
    const auto want = preisach_predict(us, p);
    const auto gamma = preisach_states(u, grid, p.T);
    for (std::size_t k = 0; k < 30; ++k) {
        const auto y = preisach_output<double>(gamma[k], col(us[k]), col(p.w0), col(p.w1), col(p.w2), mu);
        CHECK(y[0] == doctest::Approx(want[k]).epsilon(1e-13));
    }
}
