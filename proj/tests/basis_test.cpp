#include "nivfunc/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "nivfunc/rng.hpp"
#include "oracles.hpp"

using namespace nivfunc;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST_CASE("trigonometric basis point values") {
  CHECK(eval_basis(1, 0.37) == 1.0);
  CHECK(eval_basis(2, 0.0) == doctest::Approx(kSqrt2).epsilon(1e-12));
  CHECK(eval_basis(3, 0.25) == doctest::Approx(kSqrt2).epsilon(1e-12));
  CHECK(eval_basis(4, 0.5) == doctest::Approx(kSqrt2).epsilon(1e-12));  // cos(2pi) = 1

  CHECK_THROWS_AS(eval_basis(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(eval_basis(3, -0.01), std::invalid_argument);
  CHECK_THROWS_AS(eval_basis(3, 1.01), std::invalid_argument);
}

TEST_CASE("prefix evaluation agrees with direct evaluation") {
  std::vector<double> buf(128);
  for (double s : {0.0, 0.123, 0.5, 0.731, 1.0}) {
    eval_basis_prefix(s, buf);
    for (int j = 1; j <= 128; ++j)
      CHECK(buf[static_cast<std::size_t>(j - 1)] ==
            doctest::Approx(eval_basis(j, s)).epsilon(1e-10));
  }
}

TEST_CASE("weight sequences") {
  WeightConfig cfg;

  SUBCASE("index one is pinned to one") {
    cfg.p = 3.3;
    cfg.s = 0.7;
    cfg.a = 2.1;
    const auto [b, h, v] = weights(1, cfg);
    CHECK(b == 1.0);
    CHECK(h == 1.0);
    CHECK(v == 1.0);
  }

  SUBCASE("polynomial values") {
    cfg.p = 2.0;
    CHECK(weight_b(3, cfg) == doctest::Approx(81.0));
    cfg.s = 1.0;
    CHECK(weight_h(10, cfg) == doctest::Approx(100.0));
    cfg.a = 1.0;
    CHECK(weight_v(2, cfg) == doctest::Approx(0.25));
  }

  SUBCASE("exponential operator weights") {
    cfg.a = 1.0;
    cfg.kind = DecayKind::Exponential;
    CHECK(weight_v(2, cfg) == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
    CHECK(weight_v(2, cfg) == doctest::Approx(0.0183156).epsilon(1e-5));
  }

  SUBCASE("monotonicity over a long index range") {
    for (WeightConfig c : {WeightConfig{.p = 1.5, .s = 0.5, .a = 2.0},
                           WeightConfig{.p = 0.0, .s = 2.0, .a = 0.5,
                                        .kind = DecayKind::Exponential}}) {
      double prev_b = weight_b(1, c), prev_h = weight_h(1, c), prev_v = weight_v(1, c);
      for (int j = 2; j <= 10000; ++j) {
        const double b = weight_b(j, c), h = weight_h(j, c), v = weight_v(j, c);
        REQUIRE(b >= prev_b);
        REQUIRE(h >= prev_h);
        REQUIRE(v <= prev_v);
        prev_b = b;
        prev_h = h;
        prev_v = v;
      }
    }
  }
}

TEST_CASE("weighted norms and ellipsoid membership") {
  WeightConfig cfg;
  CHECK(weighted_norm_sq(CoefVector{{0.0, 0.0, 0.0}}, WeightSeq::B, cfg) == 0.0);

  cfg.p = 1.0;
  CHECK(weighted_norm_sq(CoefVector{{0.0, 1.0}}, WeightSeq::B, cfg) == doctest::Approx(4.0));

  CHECK(weighted_norm_sq(CoefVector{{1.0, 0.5, 0.25}}, WeightSeq::Unit, cfg) ==
        doctest::Approx(1.3125));
}

TEST_CASE("indicator representer coefficients") {
  SUBCASE("full interval is the constant function") {
    const CoefVector h = indicator_representer(0.0, 1.0, 3);
    CHECK(h.v[0] == doctest::Approx(1.0));
    CHECK(std::abs(h.v[1]) < 1e-15);
    CHECK(std::abs(h.v[2]) < 1e-15);
  }

  SUBCASE("half interval") {
    const CoefVector h2 = indicator_representer(0.0, 0.5, 2);
    CHECK(h2.v[0] == doctest::Approx(0.5));
    CHECK(std::abs(h2.v[1]) < 1e-15);

    const CoefVector h3 = indicator_representer(0.0, 0.5, 3);
    // sqrt(2) * integral of sin(2 pi s) over [0, 1/2], by quadrature.
    const double oracle = oracles::integrate(
        [](double s) { return std::sqrt(2.0) * std::sin(2.0 * std::numbers::pi * s); }, 0.0, 0.5,
        4096);
    CHECK(h3.v[2] == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(h3.v[2] == doctest::Approx(0.450158).epsilon(1e-5));
  }

  SUBCASE("coefficients match quadrature for j <= 32") {
    for (auto [lo, hi] : {std::pair{0.1, 0.35}, std::pair{0.0, 0.8}}) {
      const CoefVector h = indicator_representer(lo, hi, 32);
      for (int j = 1; j <= 32; ++j) {
        const double oracle =
            oracles::integrate([j](double s) { return eval_basis(j, s); }, lo, hi, 8192);
        REQUIRE(std::abs(h.coef(j) - oracle) < 1e-8);
      }
    }
  }

  CHECK_THROWS_AS(indicator_representer(0.5, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(indicator_representer(0.7, 0.2, 4), std::invalid_argument);
}

TEST_CASE("smooth coefficient families") {
  const CoefVector x = smooth_coefs(2.0, 1.0, 3);
  CHECK(x.v[0] == doctest::Approx(1.0));
  CHECK(x.v[1] == doctest::Approx(0.25));
  CHECK(x.v[2] == doctest::Approx(1.0 / 9.0));

  CHECK_THROWS_AS(smooth_coefs(0.4, 1.0, 3), std::invalid_argument);

  SUBCASE("calibrated scale keeps the ellipsoid membership") {
    WeightConfig cfg;
    cfg.p = 2.0;
    cfg.rho = 1.0;
    const double scale = calibrated_scale(cfg.p + 1.0, cfg.p, cfg.rho);
    // the analytic partial-sum route allows any scale^2 <= 6/pi^2 here
    CHECK(scale * scale <= 6.0 / (std::numbers::pi * std::numbers::pi) + 1e-12);
    for (int m : {1, 8, 64, 512}) {
      const CoefVector phi = smooth_coefs(cfg.p + 1.0, scale, m);
      REQUIRE(weighted_norm_sq(phi, WeightSeq::B, cfg) <= cfg.rho);
    }
  }
}

TEST_CASE("orthonormality under quadrature") {
  for (int j = 1; j <= 9; ++j) {
    for (int l = 1; l <= 9; ++l) {
      const double ip = oracles::integrate(
          [j, l](double s) { return eval_basis(j, s) * eval_basis(l, s); }, 0.0, 1.0, 4096);
      const double expected = (j == l) ? 1.0 : 0.0;
      REQUIRE(std::abs(ip - expected) < 1e-8);
    }
  }
}

TEST_CASE("Parseval identity for random coefficient vectors") {
  StreamRng rng(20240817u, 0, 1);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform() * 16);
    CoefVector x;
    for (int j = 0; j < m; ++j) x.v.push_back(rng.normal());
    const double quad = oracles::integrate(
        [&x](double s) {
          const double f = eval_series(x, s);
          return f * f;
        },
        0.0, 1.0, 8192);
    const double sum = weighted_norm_sq(x, WeightSeq::Unit, WeightConfig{});
    REQUIRE(quad == doctest::Approx(sum).epsilon(1e-6));
  }
}
