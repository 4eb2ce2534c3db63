#include "nivfunc/galerkin.hpp"

#include <cmath>

#include "doctest.h"
#include "nivfunc/rates.hpp"
#include "nivfunc/rng.hpp"
#include "oracles.hpp"

using namespace nivfunc;

namespace {

JointModel default_model(double a = 1.0, int J = 8) {
  WeightConfig cfg;
  cfg.a = a;
  return build_joint(cfg, J, 0.1);
}

}  // namespace

TEST_CASE("true Galerkin matrix is the diagonal spectrum") {
  const JointModel model = default_model(2.0, 5);

  const DenseMatrix t1 = true_matrix(model, 1);
  CHECK(t1.order() == 1);
  CHECK(t1(0, 0) == 1.0);

  const DenseMatrix t2 = true_matrix(model, 2);
  CHECK(t2(0, 1) == 0.0);
  CHECK(t2(1, 0) == 0.0);
  CHECK(t2(1, 1) == doctest::Approx(model.c / 4.0));  // lambda_2 = c 2^{-2}

  CHECK_THROWS_AS(true_matrix(model, 6), NotInjectiveAtDimension);
  try {
    true_matrix(model, 6);
  } catch (const NotInjectiveAtDimension& e) {
    CHECK(e.m() == 6);
    CHECK(e.J() == 5);
  }
}

TEST_CASE("empirical pair on closed-form inputs") {
  SUBCASE("single observation is the rank-one outer product") {
    Sample s;
    s.y = {2.0};
    s.z = {0.3};
    s.w = {0.7};
    const GalerkinPair pair = empirical_pair(s, 3);
    for (int l = 1; l <= 3; ++l) {
      for (int j = 1; j <= 3; ++j)
        REQUIRE(pair.t_hat(l - 1, j - 1) ==
                doctest::Approx(eval_basis(l, 0.7) * eval_basis(j, 0.3)).epsilon(1e-12));
      REQUIRE(pair.g_hat.coef(l) == doctest::Approx(2.0 * eval_basis(l, 0.7)).epsilon(1e-12));
    }
  }

  SUBCASE("top-left entry is exactly one for any sample") {
    const JointModel model = default_model();
    StreamRng rng(5u, 0, 11);
    const Sample s = draw_sample(model, CoefVector{{0.4, 0.2}}, 0.3, 257, rng);
    const GalerkinPair pair = empirical_pair(s, 2);
    CHECK(pair.t_hat(0, 0) == 1.0);
  }

  SUBCASE("replication mean converges to the true matrix") {
    const JointModel model = default_model();
    const int R = 200, n = 10000, m = 3;
    DenseMatrix mean(m);
    for (int r = 0; r < R; ++r) {
      StreamRng rng(987654321u, static_cast<std::uint64_t>(r), 12);
      Sample s;
      s.y.assign(n, 0.0);
      sample_pairs(model, n, rng, s.z, s.w);
      const GalerkinPair pair = empirical_pair(s, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) mean(i, j) += pair.t_hat(i, j);
    }
    const DenseMatrix t_true = true_matrix(model, m);
    const double band = 3.0 * 2.0 / std::sqrt(static_cast<double>(R) * n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) REQUIRE(std::abs(mean(i, j) / R - t_true(i, j)) < band);
  }
}

TEST_CASE("Galerkin solution") {
  SUBCASE("diagonal system divides componentwise") {
    const DenseMatrix t = DenseMatrix::diagonal({1.0, 0.5, 0.25});
    const CoefVector g{{1.0, 1.0, 1.0}};
    const CoefVector x = galerkin_solution(t, g);
    CHECK(x.v[0] == doctest::Approx(1.0));
    CHECK(x.v[1] == doctest::Approx(2.0));
    CHECK(x.v[2] == doctest::Approx(4.0));
  }

  SUBCASE("round trip recovers a known solution") {
    StreamRng rng(31u, 0, 13);
    DenseMatrix t(4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) t(i, j) = rng.normal() * 0.2;
      t(i, i) += 2.0;
    }
    CoefVector x_true;
    for (int i = 0; i < 4; ++i) x_true.v.push_back(rng.normal());
    const CoefVector g(matvec(t, x_true.v));
    const CoefVector x = galerkin_solution(t, g);
    for (int i = 0; i < 4; ++i)
      REQUIRE(x.v[static_cast<std::size_t>(i)] ==
              doctest::Approx(x_true.v[static_cast<std::size_t>(i)]).epsilon(1e-10));
  }

  SUBCASE("singular matrix propagates as an error") {
    DenseMatrix t(2);
    t(0, 0) = t(0, 1) = t(1, 0) = t(1, 1) = 1.0;
    CHECK_THROWS_AS(galerkin_solution(t, CoefVector{{1.0, 1.0}}), std::domain_error);
  }

  SUBCASE("noiseless data recovers the projected truth") {
    // phi supported on the first m coefficients, true operator block,
    // empirical moment vector: solution -> E_m phi at 1/sqrt(n) rate.
    const JointModel model = default_model();
    const int m = 3, n = 100000;
    const CoefVector phi{{0.6, 0.3, -0.2}};
    StreamRng rng(77u, 0, 14);
    const Sample s = draw_sample(model, phi, 0.0, n, rng);
    const GalerkinPair pair = empirical_pair(s, m);
    const CoefVector sol = galerkin_solution(true_matrix(model, m), pair.g_hat);
    // sd of each g_hat entry is at most sup|phi| * sup|f| / sqrt(n)
    double sup_phi = 0.0;
    for (double c : phi.v) sup_phi += std::abs(c) * std::sqrt(2.0);
    for (int j = 1; j <= m; ++j) {
      const double se = sup_phi * std::sqrt(2.0) / std::sqrt(static_cast<double>(n));
      REQUIRE(std::abs(sol.coef(j) - phi.coef(j)) < 3.0 * se / model.lambda(j));
    }
  }
}

TEST_CASE("true functional") {
  CHECK(true_functional(CoefVector{{1.0, 2.0}}, CoefVector{}) == 0.0);
  CHECK(true_functional(CoefVector{{1.0, 0.0}}, CoefVector{{2.0, 3.0}}) == 2.0);
  const CoefVector h = indicator_representer(0.0, 1.0, 5);
  CHECK(true_functional(h, CoefVector{{0.7, -0.3, 0.1}}) == doctest::Approx(0.7));
}

TEST_CASE("thresholded estimator") {
  SUBCASE("singular empirical block truncates to zero") {
    Sample s;
    s.y = {1.0};
    s.z = {0.3};
    s.w = {0.7};  // rank-one t_hat at m = 2
    const GalerkinPair pair = empirical_pair(s, 2);
    const EstimateResult res = estimate_functional(CoefVector{{1.0, 1.0}}, pair, 100.0);
    CHECK(res.truncated);
    CHECK(res.value == 0.0);
    CHECK_FALSE(res.inv_norm.has_value());
  }

  SUBCASE("m = 1 estimator is the representer-weighted sample mean") {
    const JointModel model = default_model();
    StreamRng rng(123u, 0, 15);
    const Sample s = draw_sample(model, CoefVector{{0.9, 0.1}}, 0.4, 501, rng);
    const GalerkinPair pair = empirical_pair(s, 1);
    const CoefVector h{{0.8}};
    const EstimateResult res = estimate_functional(h, pair, 10.0);
    CHECK_FALSE(res.truncated);
    CHECK(res.value == 0.8 * pair.g_hat.coef(1));
    double ybar = 0.0;
    for (double y : s.y) ybar += y;
    ybar /= s.n();
    CHECK(res.value == doctest::Approx(0.8 * ybar).epsilon(1e-14));
  }

  SUBCASE("threshold comparison is inclusive") {
    GalerkinPair pair;
    pair.m = 2;
    pair.n = 1;
    pair.t_hat = DenseMatrix::diagonal({1.0, 0.5});
    pair.g_hat = CoefVector{{1.0, 1.0}};
    const CoefVector h{{1.0, 1.0}};
    // |t_hat^{-1}| = 2 exactly
    const EstimateResult at = estimate_functional(h, pair, 2.0);
    CHECK_FALSE(at.truncated);
    CHECK(at.value == doctest::Approx(3.0));
    CHECK(*at.inv_norm == doctest::Approx(2.0));

    const EstimateResult below = estimate_functional(h, pair, 2.0 - 1e-9);
    CHECK(below.truncated);
    CHECK(below.value == 0.0);
    CHECK(below.inv_norm.has_value());
  }

  SUBCASE("linearity in the representer; truncation flag independent of h") {
    const JointModel model = default_model();
    StreamRng rng(321u, 0, 16);
    const Sample s = draw_sample(model, CoefVector{{0.5, 0.25, 0.1}}, 0.5, 400, rng);
    const GalerkinPair pair = empirical_pair(s, 3);
    const CoefVector h{{0.3, -0.4, 0.2}};
    CoefVector h2 = h;
    for (auto& c : h2.v) c *= 2.0;
    const EstimateResult r1 = estimate_functional(h, pair, 50.0);
    const EstimateResult r2 = estimate_functional(h2, pair, 50.0);
    CHECK(r1.truncated == r2.truncated);
    if (!r1.truncated) CHECK(r2.value == doctest::Approx(2.0 * r1.value).epsilon(1e-12));
  }

  SUBCASE("argument validation") {
    GalerkinPair pair;
    pair.m = 2;
    pair.t_hat = DenseMatrix::identity(2);
    pair.g_hat = CoefVector{{1.0, 1.0}};
    CHECK_THROWS_AS(estimate_functional(CoefVector{{1.0}}, pair, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_functional(CoefVector{{1.0, 1.0}}, pair, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("moment vector is unbiased for the smoothed coefficients") {
  const JointModel model = default_model();
  const CoefVector phi{{0.8, 0.4, 0.2, 0.1}};
  const int R = 200, n = 10000, m = 4;
  std::vector<double> mean(m, 0.0);
  for (int r = 0; r < R; ++r) {
    StreamRng rng(246810u, static_cast<std::uint64_t>(r), 17);
    const Sample s = draw_sample(model, phi, 0.5, n, rng);
    const GalerkinPair pair = empirical_pair(s, m);
    for (int j = 0; j < m; ++j) mean[static_cast<std::size_t>(j)] += pair.g_hat.v[static_cast<std::size_t>(j)];
  }
  double sup_phi = 0.0;
  for (double c : phi.v) sup_phi += std::abs(c) * std::sqrt(2.0);
  const double sd_bound = std::sqrt(2.0) * (0.5 + sup_phi);
  for (int j = 1; j <= m; ++j) {
    const double expected = model.lambda(j) * phi.coef(j);
    REQUIRE(std::abs(mean[static_cast<std::size_t>(j - 1)] / R - expected) <
            3.0 * sd_bound / std::sqrt(static_cast<double>(R) * n));
  }
}

TEST_CASE("operator and noise deviation moment bounds") {
  const JointModel model = default_model(3.0, 16);
  const CoefVector phi{{0.5, 0.25}};
  const double sigma = 0.5;
  const int R = 200, n = 10000;

  SUBCASE("E |Xi|^2 <= 4 m^2 / n") {
    for (int m : {2, 4, 8}) {
      const DenseMatrix t_true = true_matrix(model, m);
      double acc = 0.0;
      for (int r = 0; r < R; ++r) {
        StreamRng rng(1357911u, static_cast<std::uint64_t>(r), 18);
        Sample s;
        s.y.assign(n, 0.0);
        sample_pairs(model, n, rng, s.z, s.w);
        const double norm = spectral_norm(empirical_pair(s, m).t_hat - t_true);
        acc += norm * norm;
      }
      REQUIRE(acc / R <= 4.0 * m * m / static_cast<double>(n));
    }
  }

  SUBCASE("E |B|^2 <= 1.1 (m/n) sigma^2") {
    const int m = 4;
    double acc = 0.0;
    for (int r = 0; r < R; ++r) {
      StreamRng rng(24681012u, static_cast<std::uint64_t>(r), 19);
      const Sample s = draw_sample(model, phi, sigma, n, rng);
      const CoefVector b = noise_vector(s, phi, m);
      for (double c : b.v) acc += c * c;
    }
    REQUIRE(acc / R <= 1.1 * m * sigma * sigma / n);
  }
}

TEST_CASE("approximation residual vector vanishes at full support") {
  const JointModel model = default_model();
  const CoefVector phi{{0.5, -0.25, 0.125}};
  StreamRng rng(4711u, 0, 22);
  const Sample s = draw_sample(model, phi, 0.0, 64, rng);
  // phi_m = phi: the weighted residual is identically zero
  const CoefVector res = residual_vector(s, phi, phi, 2);
  for (double c : res.v) REQUIRE(c == 0.0);

  // dropping the last coefficient leaves the e_3-tail in the residual
  const CoefVector proj{{0.5, -0.25}};
  const CoefVector res2 = residual_vector(s, phi, proj, 2);
  double acc = 0.0;
  for (int i = 0; i < s.n(); ++i)
    acc += 0.125 * eval_basis(3, s.z[static_cast<std::size_t>(i)]) *
           eval_basis(1, s.w[static_cast<std::size_t>(i)]);
  CHECK(res2.coef(1) == doctest::Approx(acc / s.n()).epsilon(1e-12));
}

TEST_CASE("consistency along the corollary tuning") {
  // Coro-style threshold 2 sqrt(D / v_m) with a slightly undersmoothing
  // dimension m = n^{1/(2p+2a+1)}: the risk at n = 1e5 must undercut n = 1e3.
  WeightConfig cfg;
  cfg.p = 2.0;
  cfg.s = 1.0;
  cfg.a = 3.0;
  const JointModel model = build_joint(cfg, 16, 0.1);
  const CoefVector phi = smooth_coefs(cfg.p + 1.0, calibrated_scale(cfg.p + 1.0, cfg.p, cfg.rho), 16);
  const CoefVector h = smooth_coefs(cfg.s + 1.0, calibrated_scale(cfg.s + 1.0, cfg.s, cfg.tau), 16);
  const double truth = true_functional(h, phi);

  auto mse_at = [&](long n, std::uint64_t tag) {
    const int m = std::max(1, static_cast<int>(std::pow(static_cast<double>(n),
                                                        1.0 / (2.0 * cfg.p + 2.0 * cfg.a + 1.0))));
    const double alpha = threshold_alpha(n, m, cfg, ThresholdMode::Corollary);
    const int R = 120;
    double acc = 0.0;
    for (int r = 0; r < R; ++r) {
      StreamRng rng(555u, static_cast<std::uint64_t>(r), tag);
      const Sample s = draw_sample(model, phi, 0.5, static_cast<int>(n), rng);
      const EstimateResult res = estimate_functional(h, empirical_pair(s, m), alpha);
      acc += (res.value - truth) * (res.value - truth);
    }
    return acc / R;
  };

  const double mse_small = mse_at(1000, 20);
  const double mse_large = mse_at(100000, 21);
  CHECK(mse_large < mse_small);
}
