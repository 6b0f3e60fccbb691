#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hsk/heads/rollout.hpp"
#include "../support/fixtures.hpp"

using namespace hsk;
using namespace hsk::heads;
using T = Tensor<double>;

namespace {

T col(std::initializer_list<double> v) {
    T t(v.size(), 1);
    std::size_t i = 0;
    for (double x : v) t[i++] = x;
    return t;
}

T random_tensor(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1, 1);
    T t(r, c);
    for (auto& v : t.values()) v = d(rng);
    return t;
}

cells::GruParams<double> random_gru(std::size_t d_g, std::size_t d_x, std::uint64_t seed) {
    return cells::gru_init<double>(d_g, d_x, seed);
}

}  // namespace

TEST_CASE("injection overwrites element 0 only") {
    std::mt19937_64 rng(4);
    const T g = random_tensor(3, 6, rng);
    const T out = inject(g, col({0.5, -0.25, 0.125}));
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(out(r, 0) == (r == 0 ? 0.5 : r == 1 ? -0.25 : 0.125));
        for (std::size_t j = 1; j < 6; ++j) CHECK(out(r, j) == g(r, j));
    }
    CHECK(inject(T(2, 1, 9.0), col({1, 2}))[1] == 2.0);
}

TEST_CASE("direct warmup") {
    const auto zero = cells::gru_zeros<double>(4, 4);
    const std::vector<T> none;
    SUBCASE("single sample runs no step") {
        const std::vector<T> inj{col({0.3})};
        const T g = warmup_direct<T, double>(std::span<const T>(none), inj, random_gru(4, 4, 1));
        CHECK(g(0, 0) == 0.3);
        for (std::size_t j = 1; j < 4; ++j) CHECK(g(0, j) == 0.0);
    }
    SUBCASE("zero weights propagate zeros") {
        const std::vector<T> x{T(1, 4, 0.7)};
        const std::vector<T> inj{col({0.3}), col({-0.6})};
        const T g = warmup_direct<T, double>(std::span<const T>(x), inj, zero);
        CHECK(g(0, 0) == -0.6);
        for (std::size_t j = 1; j < 4; ++j) CHECK(g(0, j) == 0.0);
    }
    SUBCASE("three samples match a hand unrolled loop") {
        std::mt19937_64 rng(9);
        const auto p = random_gru(5, 4, 3);
        const std::vector<T> x{random_tensor(2, 4, rng), random_tensor(2, 4, rng)};
        const std::vector<T> inj{col({0.1, 0.2}), col({-0.3, 0.4}), col({0.5, -0.6})};
        T g(2, 5);
        g(0, 0) = 0.1;
        g(1, 0) = 0.2;
        for (std::size_t i = 0; i < 2; ++i) {
            g = cells::gru_step(x[i], g, p);
            for (std::size_t r = 0; r < 2; ++r) g(r, 0) = inj[i + 1](r, 0);
        }
        const T got = warmup_direct<T, double>(std::span<const T>(x), inj, p);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(got[i] == g[i]);
    }
    const auto empty = [&] { return warmup_direct<T, double>(std::span<const T>(none), std::span<const T>(none), zero); };
    CHECK_THROWS_AS(empty(), DataError);
}

TEST_CASE("GRU-P rollout matches warmup then prediction by hand") {
    const auto w = fixture::window<double>(2, 12, 3);
    ModelConfig cfg;
    cfg.d_g = 6;
    auto m = make_model<double>(cfg, 5);
    std::vector<T> p;
    for (const auto& q : m.params) p.push_back(q.value);
    const auto gw = cells::gru_view(std::span<const T>(p));
    T g(2, 6);
    for (std::size_t r = 0; r < 2; ++r) g(r, 0) = w.y(r, 0);
    for (std::size_t j = 1; j < 3; ++j) {
        g = cells::gru_step(w.x[j], g, gw);
        for (std::size_t r = 0; r < 2; ++r) g(r, 0) = w.y(r, j);
    }
    const auto res = predict(m, w);
    CHECK(res.pred_norm.cols() == 9);
    for (std::size_t j = 3; j < 12; ++j) {
        g = cells::gru_step(w.x[j], g, gw);
        for (std::size_t r = 0; r < 2; ++r) {
            CHECK(res.pred_norm(r, j - 3) == g(r, 0));
            CHECK(res.pred(r, j - 3) == doctest::Approx(g(r, 0) * w.y_max));
        }
    }
}

TEST_CASE("LSTM-P warmup injects g and leaves c free") {
    auto p = cells::lstm_init<double>(4, 4, 2);
    std::mt19937_64 rng(1);
    const std::vector<T> x{random_tensor(1, 4, rng)};
    const std::vector<T> inj{col({0.2}), col({0.4})};
    const auto s = warmup_direct_lstm<T, double>(std::span<const T>(x), inj, p);
    cells::HiddenState<T> ref{T(1, 4), T(1, 4), true};
    ref.g(0, 0) = 0.2;
    ref = cells::lstm_step(x[0], ref, p);
    CHECK(s.g(0, 0) == 0.4);
    for (std::size_t j = 1; j < 4; ++j) CHECK(s.g(0, j) == ref.g(0, j));
    for (std::size_t j = 0; j < 4; ++j) CHECK(s.c(0, j) == ref.c(0, j));
}

TEST_CASE("GRU-M and GRU-L warmup readouts invert the injection") {
    data::Window<double> w;
    w.rows = 1;
    w.len = 6;
    w.warmup = 5;
    w.u = T(1, 6);
    w.y = T(1, 6);
    const double us[] = {-0.9, -0.31, 0.02, 0.44, 0.97, 0.5};
    const double ys[] = {-0.999999, -0.2, 0.05, 0.61, 0.93, 0.0};
    for (std::size_t j = 0; j < 6; ++j) w.u[j] = us[j], w.y[j] = ys[j];

    const auto m = inject_gru_m(w);
    const auto l = inject_gru_l(w);
    CHECK(std::isfinite(m[0][0]));
    for (std::size_t j = 0; j < 5; ++j) {
        const T g = inject(T(1, 3, 0.7), m[j]);
        CHECK(std::abs(std::tanh(w.u[j] - head0(g)[0]) - w.y[j]) < 1e-10);
        const T gl = inject(T(1, 3, 0.7), l[j]);
        CHECK(std::abs(head0(gl)[0] * w.u[j] - w.y[j]) < 1e-10);
    }

    w.y[2] = 1.0;
    CHECK_THROWS_AS(inject_gru_m(w), DomainError);
    w.y[2] = -1.0;
    CHECK_THROWS_AS(inject_gru_m(w), DomainError);
    w.u[3] = 0.0;
    try {
        inject_gru_l(w);
        FAIL("expected a guard error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("sample 3") != std::string::npos);
    }
}

TEST_CASE("GRU-V") {
    CHECK(gru_v_grid(8) == 1);
    CHECK(gru_v_grid(32) == 3);
    CHECK(gru_v_grid(50) == 4);
    CHECK_THROWS_AS(gru_v_grid(10), ConfigError);
    CHECK_THROWS_AS(gru_v_grid(2), ConfigError);
    const T sel = gru_v_selector<double>(8);
    CHECK(sel[0] == 1.0);
    CHECK(sel[1] == 0.0);
    CHECK(sel[6] == 1.0);

    // Zero weights keep the grid at zero, so the prediction is B~.
    const auto w = fixture::window<double>(2, 10, 4);
    ModelConfig cfg;
    cfg.archetype = Archetype::GruV;
    cfg.d_g = 32;
    auto m = make_model<double>(cfg, 1);
    for (auto& q : m.params) q.value = T(q.value.rows(), q.value.cols());
    const auto res = predict(m, w);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t j = 0; j < 6; ++j) CHECK(res.pred_norm(r, j) == w.u(r, 4 + j));
    }
}

TEST_CASE("predictions are a pure function of window and parameters") {
    const auto w = fixture::window<double>(3, 16, 4);
    for (Archetype a : {Archetype::GruP, Archetype::LstmP, Archetype::GruJadp, Archetype::Preisach}) {
        ModelConfig cfg;
        cfg.archetype = a;
        const auto m = make_model<double>(cfg, 3);
        const auto r1 = predict(m, w);
        const auto r2 = predict(m, w);
        CHECK(r1.pred_norm.values().size() == 36);
        CHECK(std::equal(r1.pred_norm.values().begin(), r1.pred_norm.values().end(), r2.pred_norm.values().begin()));
    }
}

TEST_CASE("JA rollout starts from the measured field") {
    const auto w = fixture::window<double>(1, 8, 3);
    ModelConfig cfg;
    cfg.archetype = Archetype::Ja;
    const auto m = make_model<double>(cfg, 1);
    const auto p = physics::ja_params_from_theta({0, 0, 0, 0, 0}, cfg.eta);
    double H = w.y_raw[2];
    const auto res = predict(m, w);
    for (std::size_t j = 3; j < 8; ++j) {
        H += physics::ja_delta_h(H, w.u_raw[j - 1], w.u_raw[j], p);
        CHECK(res.pred(0, j - 3) == doctest::Approx(H).epsilon(1e-12));
    }
}

TEST_CASE("window guards") {
    auto w = fixture::window<double>(1, 8, 3);
    ModelConfig cfg;
    const auto m = make_model<double>(cfg, 1);
    w.warmup = 0;
    CHECK_THROWS_AS(predict(m, w), DataError);
    w.warmup = 3;
    cfg.d_x = 2;
    CHECK_THROWS_AS(predict(make_model<double>(cfg, 1), w), ShapeError);
}

TEST_CASE("rollout gradients match finite differences") {
    const auto w = fixture::window<double>(2, 10, 3);
    for (Archetype a : {Archetype::GruP, Archetype::GruM, Archetype::LstmP}) {
        ModelConfig cfg;
        cfg.archetype = a;
        cfg.d_g = 4;
        auto m = make_model<double>(cfg, 11);
        CAPTURE(to_string(a));
        CHECK(fixture::rollout_grad_error(m, w) < 1e-5);
    }
}
