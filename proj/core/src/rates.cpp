#include "nivfunc/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace nivfunc {

std::string to_string(ThresholdMode mode) {
  switch (mode) {
    case ThresholdMode::Theorem: return "theorem";
    case ThresholdMode::Remark: return "remark";
    case ThresholdMode::Corollary: return "corollary";
  }
  return "theorem";
}

std::optional<ThresholdMode> threshold_mode_from_string(const std::string& text) {
  if (text == "theorem") return ThresholdMode::Theorem;
  if (text == "remark") return ThresholdMode::Remark;
  if (text == "corollary") return ThresholdMode::Corollary;
  return std::nullopt;
}

namespace {

// log(b_k / (n v_k)); log space keeps the exponential kind overflow-free.
double log_ratio(long n, int k, const WeightConfig& cfg) {
  const double log_b = (k == 1) ? 0.0 : 2.0 * cfg.p * std::log(static_cast<double>(k));
  return log_b - log_weight_v(k, cfg) - std::log(static_cast<double>(n));
}

}  // namespace

int select_dimension(long n, const WeightConfig& cfg) {
  if (n < 1) throw std::invalid_argument("select_dimension: n must be >= 1");
  cfg.validate();
  int k = 1;
  // b_1/(n v_1) = 1/n <= 1 always; walk up while the ratio stays <= 1.
  // Nearly flat b with slow operator decay makes k* astronomical; anything
  // past the cap is outside what a dense Galerkin solve could use anyway.
  constexpr int kMaxDimension = 1000000;
  while (log_ratio(n, k + 1, cfg) <= 0.0) {
    if (++k > kMaxDimension)
      throw std::domain_error("select_dimension: tuned dimension exceeds 1e6");
  }
  return k;
}

double implied_triangle(long n, int k_star, const WeightConfig& cfg) {
  (void)n;
  const double log_tri = (2.0 * cfg.p) * std::log(static_cast<double>(k_star + 1) / k_star) +
                         log_weight_v(k_star, cfg) - log_weight_v(k_star + 1, cfg);
  return std::max(1.0, std::exp(log_tri));
}

double delta_star(int k_star, const WeightConfig& cfg) {
  if (k_star < 1) throw std::invalid_argument("delta_star: k_star must be >= 1");
  return 1.0 / (weight_b(k_star, cfg) * weight_h(k_star, cfg));
}

double threshold_alpha(long n, int m, const WeightConfig& cfg, ThresholdMode mode) {
  if (n < 1 || m < 1) throw std::invalid_argument("threshold_alpha: n and m must be >= 1");
  switch (mode) {
    case ThresholdMode::Remark:
      return static_cast<double>(n);
    case ThresholdMode::Corollary:
      return 2.0 * std::sqrt(cfg.D / weight_v(m, cfg));
    case ThresholdMode::Theorem:
    default:
      return std::sqrt(static_cast<double>(n) *
                       std::max(1.0, 4.0 * cfg.D * cfg.triangle / weight_b(m, cfg)));
  }
}

double theoretical_rate(long n, const WeightConfig& cfg) {
  if (n < 2) throw std::invalid_argument("theoretical_rate: n must be >= 2");
  const double nn = static_cast<double>(n);
  if (cfg.kind == DecayKind::Polynomial) {
    const double expo = (cfg.p + cfg.s) / (cfg.p + cfg.a);
    return std::max(std::pow(nn, -expo), 1.0 / nn);
  }
  return std::pow(std::log(nn), -(cfg.p + cfg.s) / cfg.a);
}

double deviation_bound(long n, int m, const WeightConfig& cfg, double eta) {
  if (n < 1 || m < 1) throw std::invalid_argument("deviation_bound: n and m must be >= 1");
  if (eta < 1.0) throw std::invalid_argument("deviation_bound: eta must be >= 1");
  const double v = weight_v(m, cfg);
  const double exponent =
      -(static_cast<double>(n) * v / (static_cast<double>(m) * m)) / (20.0 * cfg.D * eta * eta) +
      2.0 * std::log(static_cast<double>(m));
  return std::min(1.0, 2.0 * std::exp(exponent));
}

TuningPlan make_tuning_plan(long n, const WeightConfig& cfg, ThresholdMode mode) {
  TuningPlan plan;
  plan.n = n;
  plan.k_star = select_dimension(n, cfg);
  plan.delta_star = delta_star(plan.k_star, cfg);
  plan.alpha = threshold_alpha(n, plan.k_star, cfg, mode);
  plan.implied_triangle = implied_triangle(n, plan.k_star, cfg);
  // max(n^{-(p+s)/(p+a)}, 1/n) has log-log slope -min((p+s)/(p+a), 1).
  if (cfg.kind == DecayKind::Polynomial)
    plan.rate_exponent = -std::min((cfg.p + cfg.s) / (cfg.p + cfg.a), 1.0);
  return plan;
}

RegularityReport check_regularity(const WeightConfig& cfg, const std::vector<long>& n_grid) {
  if (n_grid.empty()) throw std::invalid_argument("check_regularity: empty grid");
  RegularityReport report;
  report.rows.reserve(n_grid.size());
  for (long n : n_grid) {
    RegularityRow row;
    row.n = n;
    row.k_star = select_dimension(n, cfg);
    const double k = static_cast<double>(row.k_star);
    const double b = weight_b(row.k_star, cfg);
    const double h = weight_h(row.k_star, cfg);
    const double log_v_inv = -log_weight_v(row.k_star, cfg);
    row.seq_log_b = k * k * std::log(b) / b;
    row.seq_log_vh = k * k * std::min(log_v_inv, std::log(h)) / b;
    row.seq_cube = k * k * k / b;
    double gamma = 0.0;
    for (int j = 1; j <= row.k_star; ++j) gamma += 1.0 / weight_b(j, cfg);
    row.gamma_partial = gamma;
    report.rows.push_back(row);
  }

  auto nonincreasing = [&](auto field) {
    for (std::size_t i = 1; i < report.rows.size(); ++i)
      if (field(report.rows[i]) > field(report.rows[i - 1]) + 1e-12) return false;
    return true;
  };
  report.seq_log_b_decreasing = nonincreasing([](const RegularityRow& r) { return r.seq_log_b; });
  report.seq_log_vh_decreasing = nonincreasing([](const RegularityRow& r) { return r.seq_log_vh; });
  double first = report.rows.front().seq_cube, peak = first;
  for (const auto& r : report.rows) peak = std::max(peak, r.seq_cube);
  report.seq_cube_bounded = peak <= first + 1e-12;
  report.p_at_least_three_halves = cfg.p >= 1.5;
  report.gamma_finite = 2.0 * cfg.p > 1.0;
  return report;
}

double empirical_lambda(const WeightConfig& cfg, int m_max) {
  if (m_max < 1) throw std::invalid_argument("empirical_lambda: m_max must be >= 1");
  // Log space throughout; v_m underflows well before m = 10^3 in the
  // exponential kind.
  double lambda = 0.0;
  double sup_log_inv_vh = 0.0;  // running sup_{j<=m} -log(v_j h_j)
  for (int m = 1; m <= m_max; ++m) {
    const double log_v = log_weight_v(m, cfg);
    const double log_h = (m == 1) ? 0.0 : 2.0 * cfg.s * std::log(static_cast<double>(m));
    sup_log_inv_vh = std::max(sup_log_inv_vh, -log_v - log_h);
    const double log_ratio = log_v + sup_log_inv_vh - std::max(-log_h, log_v);
    lambda = std::max(lambda, std::exp(log_ratio));
  }
  return lambda;
}

}  // namespace nivfunc
