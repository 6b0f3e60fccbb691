#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hsk/objectives/metrics.hpp"

using namespace hsk;
using namespace hsk::objectives;
using V = std::vector<double>;

TEST_CASE("weighted rmse") {
    const V h{0.1, 0.2, 0.3};
    CHECK(loss_rmse(h, h, V{0.1, 0.5, 0.9}, 0.0) == 0.0);
    CHECK(loss_rmse(h, V{1, 1, 1}, V{0.4, 0.4, 0.4}, 0.4) == 0.0);
    const double hand = loss_rmse(V{1, 1, 1}, V{0, 0, 0}, V{0.5, 1.0, 1.5}, 0.0);
    CHECK(hand == doctest::Approx(std::sqrt(1.5 / 3.0)).epsilon(1e-15));
    // Without the warmup sample the first weight is zero.
    CHECK(loss_rmse(V{1, 1, 1}, V{0, 0, 0}, V{0.5, 1.0, 1.5}) == doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK_THROWS_AS(loss_rmse(V{1, 2}, V{1}, V{1, 2}), ShapeError);
}

TEST_CASE("weighted rmse depends on pairing only") {
    const V h{0.1, -0.4, 0.3, 0.8}, p{0.0, -0.2, 0.5, 0.6}, b{0.0, 0.3, 0.1, 0.7};
    const double a = loss_rmse(h, p, b);
    CHECK(loss_rmse(p, h, b) == a);
    // Summing the weighted terms in reverse order gives the same value.
    double acc = 0;
    for (std::size_t k = 4; k-- > 0;) {
        const double wk = k == 0 ? 0 : std::abs(b[k] - b[k - 1]);
        acc += (h[k] - p[k]) * (h[k] - p[k]) * wk;
    }
    CHECK(a == doctest::Approx(std::sqrt(acc / 4)).epsilon(1e-15));
}

TEST_CASE("rms weighting") {
    const V flat(10, 100.0);
    CHECK(loss_weighted(0.3, 100.0, flat) == doctest::Approx(0.3));
    V half(10, 50.0);
    CHECK(loss_weighted(0.3, 100.0, half) == doctest::Approx(0.6));
    CHECK(loss_weighted(1.0, 100.0, V{50, -50, 50, -50}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(loss_weighted(1.0, 100.0, V{0, 0, 0}), DataError);
}

TEST_CASE("sre") {
    const V h{1, -2, 3};
    CHECK(sre(h, h) == 0.0);
    CHECK(std::abs(sre(V{2, -4, 6}, h) - 1.0) < 1e-12);
    CHECK(std::abs(sre(V{0, 0, 0}, h) - 1.0) < 1e-12);
    CHECK_THROWS_AS(sre(h, V{0, 0, 0}), DomainError);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    V a(20), b(20);
    for (std::size_t i = 0; i < 20; ++i) a[i] = u(rng), b[i] = u(rng);
    V as = a, bs = b;
    for (std::size_t i = 0; i < 20; ++i) as[i] *= -3.7, bs[i] *= -3.7;
    CHECK(sre(as, bs) == doctest::Approx(sre(a, b)).epsilon(1e-13));
}

TEST_CASE("nere") {
    const std::size_t n = 64;
    V B(n), H(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 2 * M_PI * static_cast<double>(k) / 32.0;
        B[k] = std::sin(t);
        H[k] = 10 * std::sin(t + 0.4);
    }
    const std::size_t k1 = 32;
    const V truth(H.begin() + k1, H.end());
    CHECK(nere(truth, H, B, k1) == 0.0);

    // B over [k1 - 1, n - 1] closes on itself: a constant offset telescopes away.
    V Bc = B;
    Bc.back() = B[k1 - 1];
    V off = truth;
    for (auto& v : off) v += 3.25;
    CHECK(std::abs(nere(off, H, Bc, k1)) < 1e-10);

    // Overpredicting H while B rises gives positive NERE.
    const V b2{0.0, 1.0}, h2{1.0, 1.0};
    CHECK(nere(V{2.0}, h2, b2, 1) > 0.0);
    CHECK(nere(V{2.0}, h2, b2, 1) == doctest::Approx(1.0));

    // Linear in the prediction error.
    V e1(truth.size()), e2(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) e1[i] = truth[i] + 0.1 * i, e2[i] = truth[i] + 0.2 * i;
    CHECK(nere(e2, H, B, k1) == doctest::Approx(2 * nere(e1, H, B, k1)).epsilon(1e-12));

    CHECK_THROWS_AS(nere(V{1.0}, V{1.0, 1.0}, V{2.0, 2.0}, 1), DomainError);
}

TEST_CASE("mse mae wce") {
    const V p{0.1, -0.3}, z{0.0, 0.0};
    CHECK(mse(p, z) == doctest::Approx(0.05));
    CHECK(mae(p, z) == doctest::Approx(0.2));
    CHECK(wce(p, z) == doctest::Approx(0.3));
    CHECK(mse(z, z) == 0.0);
    CHECK(mae(z, z) == 0.0);
    CHECK(wce(z, z) == 0.0);
    CHECK_THROWS_AS(mse(V{}, V{}), DataError);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 50; ++t) {
        V a(7), b(7);
        for (std::size_t i = 0; i < 7; ++i) a[i] = u(rng), b[i] = u(rng);
        CHECK(wce(a, b) >= mae(a, b));
    }
}

TEST_CASE("aggregates against a sort oracle") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    MetricReport rep;
    V sres;
    for (int i = 0; i < 37; ++i) {
        SequenceMetrics m;
        m.id = "s" + std::to_string(i);
        m.sre = u(rng);
        m.wce = 1.0;
        m.mae = 0.5;
        sres.push_back(m.sre);
        rep.sequences.push_back(m);
    }
    V sorted = sres;
    std::sort(sorted.begin(), sorted.end());
    // Nearest rank: ceil(0.95 * 37) = 36th smallest.
    CHECK(rep.sre().p95 == sorted[35]);
    double acc = 0;
    for (double v : sres) acc += v;
    CHECK(rep.sre().mean == doctest::Approx(acc / 37));
    CHECK(percentile(V{3, 1, 2}, 50) == 2);
    CHECK(median(V{0.4, 0.1, 0.2}) == 0.2);
    CHECK(median(V{1, 2, 3, 4}) == 2.5);
    const auto j = rep.to_json();
    CHECK(j["count"] == 37);
    CHECK(j["sequences"].size() == 37);
    const auto csv = rep.to_csv();
    CHECK(csv.rfind("id,sre,nere,mse,mae,wce\n", 0) == 0);
    CHECK(csv.find("\nmean,") != std::string::npos);
    CHECK(csv.find("\np95,") != std::string::npos);
}

TEST_CASE("batched loss rows match the scalar definition") {
    data::Window<double> w;
    w.rows = 1;
    w.len = 5;
    w.warmup = 2;
    w.y_max = 100;
    w.u = diff::Tensor<double>(1, 5);
    w.y = diff::Tensor<double>(1, 5);
    const V u{0.1, 0.3, 0.2, 0.6, 0.5}, y{0.2, 0.1, -0.1, 0.4, 0.3};
    for (std::size_t j = 0; j < 5; ++j) w.u(0, j) = u[j], w.y(0, j) = y[j];
    w.rms = diff::Tensor<double>(1, 1, 40.0);
    diff::Tensor<double> pred(1, 3);
    pred[0] = 0.0, pred[1] = 0.5, pred[2] = 0.1;
    const auto rows = loss_rows<double>(pred, w);
    const double l = loss_rmse(V{-0.1, 0.4, 0.3}, V{0.0, 0.5, 0.1}, V{0.2, 0.6, 0.5}, 0.3);
    CHECK(rows[0] == doctest::Approx(l * 100 / 40).epsilon(1e-14));
}
