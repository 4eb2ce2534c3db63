#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nivfunc/basis.hpp"

namespace nivfunc {

/// How the estimator threshold alpha(n, m) is formed.
enum class ThresholdMode {
  Theorem,    // alpha = sqrt(n * max(1, 4 D triangle / b_m))
  Remark,     // alpha = n, the large-n rule
  Corollary,  // alpha = 2 sqrt(D / v_m)
};

std::string to_string(ThresholdMode mode);
std::optional<ThresholdMode> threshold_mode_from_string(const std::string& text);

/// Dimension, rate value and threshold selected for one sample size.
struct TuningPlan {
  int k_star = 1;
  double delta_star = 1.0;
  double alpha = 0.0;
  long n = 0;
  /// b_{k*+1} v_{k*} / (b_{k*} v_{k*+1}); the two-sided dimension condition
  /// holds with any triangle >= this ratio.
  double implied_triangle = 1.0;
  /// log-log slope of the rate in the polynomial case; empty for the
  /// exponential case, where no power-law slope exists.
  std::optional<double> rate_exponent;
};

/// k* = max{ k >= 1 : b_k / (n v_k) <= 1 }, evaluated in log space.
int select_dimension(long n, const WeightConfig& cfg);

/// The band constant that makes the two-sided condition hold at k*.
double implied_triangle(long n, int k_star, const WeightConfig& cfg);

/// delta* = 1 / (b_{k*} h_{k*}).
double delta_star(int k_star, const WeightConfig& cfg);

double threshold_alpha(long n, int m, const WeightConfig& cfg,
                       ThresholdMode mode = ThresholdMode::Theorem);

/// Minimax rate curve: polynomial max(n^{-(p+s)/(p+a)}, 1/n);
/// exponential (log n)^{-(p+s)/a}. Requires n >= 2.
double theoretical_rate(long n, const WeightConfig& cfg);

/// Exponential-tail bound on P(||Xi_m||^2 > v_m / (4D)), clamped at 1:
///   2 exp{ -(n v_m / m^2) / (20 D eta^2) + 2 log m }.
double deviation_bound(long n, int m, const WeightConfig& cfg, double eta);

TuningPlan make_tuning_plan(long n, const WeightConfig& cfg, ThresholdMode mode);

/// One grid row of the regularity diagnostics.
struct RegularityRow {
  long n = 0;
  int k_star = 1;
  double seq_log_b = 0.0;     // k*^2 log(b_{k*}) / b_{k*}
  double seq_log_vh = 0.0;    // k*^2 log(min(1/v_{k*}, h_{k*})) / b_{k*}
  double seq_cube = 0.0;      // k*^3 / b_{k*}
  double gamma_partial = 0.0; // sum_{j<=k*} 1/b_j
};

struct RegularityReport {
  std::vector<RegularityRow> rows;
  bool seq_log_b_decreasing = false;
  bool seq_log_vh_decreasing = false;
  bool seq_cube_bounded = false;  // never rises above its first grid value
  bool p_at_least_three_halves = false;
  bool gamma_finite = false;  // 2p > 1, so Gamma = sum b_j^{-1} converges
};

RegularityReport check_regularity(const WeightConfig& cfg, const std::vector<long>& n_grid);

/// Empirical constant for the weight-compatibility condition
///   v_m sup_{j<=m} 1/(v_j h_j) <= Lambda max(1/h_m, v_m),
/// maximized over m <= m_max.
double empirical_lambda(const WeightConfig& cfg, int m_max);

}  // namespace nivfunc
