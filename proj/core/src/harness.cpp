#include "nivfunc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace nivfunc {

namespace {

constexpr std::uint64_t kTagSimulate = 0x51b7a11ce5ull;
constexpr std::uint64_t kTagDeviation = 0xde71a710ull;

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs tasks 0..count-1 on `threads` workers; task i is claimed by worker
/// i % threads, so the work split (and with per-task seeding, the result)
/// never depends on scheduling.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
  threads = std::min<std::int64_t>(threads, count);
  if (threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::vector<std::string> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::int64_t i = t; i < count; i += threads) fn(i);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(t)] = e.what();
        failed.store(true);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) {
    for (const auto& msg : errors)
      if (!msg.empty()) throw std::runtime_error("worker failed: " + msg);
  }
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(const Scenario& scenario,
                                             const std::vector<long>& n_grid, int reps,
                                             std::uint64_t master_seed, int threads) {
  Scenario sc = scenario;
  sc.n_grid = n_grid;
  sc.reps = reps;
  sc.master_seed = master_seed;
  sc.seed_set = true;
  return run_experiment(sc, threads);
}

std::vector<ExperimentRecord> run_experiment(const Scenario& scenario, int threads) {
  scenario.validate();

  // Setup errors fire before any sampling.
  struct PerN {
    long n;
    int m;
    double alpha;
  };
  std::vector<PerN> grid;
  grid.reserve(scenario.n_grid.size());
  for (long n : scenario.n_grid) {
    const int k = select_dimension(n, scenario.weights);
    if (k > scenario.J)
      throw ConfigError("run_experiment: tuned dimension k* = " + std::to_string(k) + " at n = " +
                        std::to_string(n) + " exceeds J = " + std::to_string(scenario.J));
    grid.push_back({n, k, threshold_alpha(n, k, scenario.weights, scenario.threshold_mode)});
  }

  const JointModel model = scenario.build_model();
  const CoefVector phi = scenario.structural_coefs();
  const CoefVector h = scenario.representer_coefs();
  const double truth = true_functional(h, phi);
  const int reps = scenario.reps;

  std::vector<ExperimentRecord> records(grid.size() * static_cast<std::size_t>(reps));
  parallel_for(static_cast<std::int64_t>(records.size()), resolve_threads(threads),
               [&](std::int64_t task) {
                 const std::size_t gi = static_cast<std::size_t>(task) / reps;
                 const int rep = static_cast<int>(task % reps);
                 const PerN& cell = grid[gi];

                 StreamRng rng(scenario.master_seed,
                               static_cast<std::uint64_t>(gi) * static_cast<std::uint64_t>(reps) +
                                   static_cast<std::uint64_t>(rep),
                               kTagSimulate);
                 ExperimentRecord rec;
                 rec.n = cell.n;
                 rec.rep = rep;
                 rec.seed = rng.stream_seed();
                 rec.m = cell.m;
                 rec.alpha = cell.alpha;
                 rec.truth = truth;

                 const Sample sample =
                     draw_sample(model, phi, scenario.sigma, static_cast<int>(cell.n), rng);
                 const GalerkinPair pair = empirical_pair(sample, cell.m);
                 const EstimateResult est = estimate_functional(h, pair, cell.alpha);
                 rec.estimate = est.value;
                 rec.truncated = est.truncated;
                 rec.inv_norm =
                     est.inv_norm ? *est.inv_norm : std::numeric_limits<double>::quiet_NaN();
                 const double err = est.value - truth;
                 rec.sq_error = err * err;
                 records[static_cast<std::size_t>(task)] = rec;
               });
  return records;
}

std::vector<SummaryRow> summarize_mse(const std::vector<ExperimentRecord>& records,
                                      bool median_of_means) {
  if (records.empty()) throw std::invalid_argument("summarize_mse: no records");
  std::vector<SummaryRow> rows;
  std::size_t i = 0;
  while (i < records.size()) {
    const long n = records[i].n;
    std::vector<double> sq;
    int truncated = 0;
    while (i < records.size() && records[i].n == n) {
      sq.push_back(records[i].sq_error);
      truncated += records[i].truncated ? 1 : 0;
      ++i;
    }
    const int reps = static_cast<int>(sq.size());
    double mean = 0.0;
    for (double v : sq) mean += v;
    mean /= reps;

    double mse = mean;
    if (median_of_means && reps >= 2) {
      const int blocks = std::min(20, reps);
      std::vector<double> block_means(static_cast<std::size_t>(blocks), 0.0);
      std::vector<int> block_sizes(static_cast<std::size_t>(blocks), 0);
      for (int k = 0; k < reps; ++k) {
        block_means[static_cast<std::size_t>(k % blocks)] += sq[static_cast<std::size_t>(k)];
        ++block_sizes[static_cast<std::size_t>(k % blocks)];
      }
      for (int b = 0; b < blocks; ++b)
        block_means[static_cast<std::size_t>(b)] /= block_sizes[static_cast<std::size_t>(b)];
      std::nth_element(block_means.begin(), block_means.begin() + blocks / 2, block_means.end());
      mse = block_means[static_cast<std::size_t>(blocks / 2)];
    }

    double var = 0.0;
    if (reps > 1) {
      for (double v : sq) var += (v - mean) * (v - mean);
      var /= (reps - 1);
    }
    SummaryRow row;
    row.n = n;
    row.reps = reps;
    row.mse = mse;
    row.mc_se = std::sqrt(var / reps);
    row.truncation_rate = static_cast<double>(truncated) / reps;
    rows.push_back(row);
  }
  return rows;
}

RateFit fit_rate(const std::vector<SummaryRow>& table, double max_truncation) {
  RateFit fit;
  std::vector<double> xs, ys;
  for (const auto& row : table) {
    if (row.truncation_rate > max_truncation) {
      fit.excluded_n.push_back(row.n);
      continue;
    }
    if (!(row.mse > 0.0))
      throw FitError("fit_rate: nonpositive MSE at n = " + std::to_string(row.n));
    fit.n_grid.push_back(row.n);
    fit.mse_values.push_back(row.mse);
    xs.push_back(std::log(static_cast<double>(row.n)));
    ys.push_back(std::log(row.mse));
  }
  const std::size_t k = xs.size();
  if (k < 3) throw FitError("fit_rate: fewer than 3 usable grid points");

  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= static_cast<double>(k);
  ybar /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = xs[i] - xbar;
    const double dy = ys[i] - ybar;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

DeviationReport check_deviation(const Scenario& scenario, const std::vector<long>& n_grid, int m,
                                int reps, int threads) {
  scenario.validate();
  if (m < 1 || m > scenario.J)
    throw ConfigError("check_deviation: m must lie in [1, J]");
  if (reps < 1) throw ConfigError("check_deviation: reps must be >= 1");
  if (n_grid.empty()) throw ConfigError("check_deviation: empty grid");

  const JointModel model = scenario.build_model();
  const DenseMatrix t_true = true_matrix(model, m);
  const double v_m = weight_v(m, scenario.weights);
  const double threshold = v_m / (4.0 * scenario.weights.D);

  DeviationReport report;
  report.pass = true;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const long n = n_grid[gi];
    std::vector<unsigned char> exceed(static_cast<std::size_t>(reps), 0);
    parallel_for(reps, resolve_threads(threads), [&](std::int64_t rep) {
      StreamRng rng(scenario.master_seed,
                    static_cast<std::uint64_t>(gi) * static_cast<std::uint64_t>(reps) +
                        static_cast<std::uint64_t>(rep),
                    kTagDeviation);
      Sample s;
      s.y.assign(static_cast<std::size_t>(n), 0.0);
      sample_pairs(model, static_cast<int>(n), rng, s.z, s.w);
      const GalerkinPair pair = empirical_pair(s, m);
      const double norm = spectral_norm(pair.t_hat - t_true);
      exceed[static_cast<std::size_t>(rep)] = (norm * norm > threshold) ? 1 : 0;
    });
    int count = 0;
    for (unsigned char e : exceed) count += e;

    DeviationRow row;
    row.n = n;
    row.m = m;
    row.reps = reps;
    row.frequency = static_cast<double>(count) / reps;
    row.bound = deviation_bound(n, m, scenario.weights, scenario.eta);
    row.se = std::sqrt(row.bound / reps);
    row.pass = row.frequency <= row.bound + 3.0 * row.se;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

BiasReport check_bias(const Scenario& scenario, const std::vector<int>& m_grid) {
  scenario.validate();
  if (m_grid.empty()) throw ConfigError("check_bias: empty m grid");

  const CoefVector phi = scenario.structural_coefs();
  const CoefVector h = scenario.representer_coefs();
  const WeightConfig& cfg = scenario.weights;

  int m_max = 1;
  for (int m : m_grid) m_max = std::max(m_max, m);

  BiasReport report;
  report.lambda_hat = empirical_lambda(cfg, std::max(m_max, 1000));
  report.pass = true;

  const double proj_bound = 2.0 * cfg.D * cfg.d * cfg.rho;
  const double func_bound = 2.0 * report.lambda_hat * cfg.D * cfg.d * cfg.rho * cfg.tau;

  for (int m : m_grid) {
    if (m < 1) throw ConfigError("check_bias: m must be >= 1");
    BiasRow row;
    row.m = m;
    row.proj_bound = proj_bound;
    row.func_bound = func_bound;

    // phi_m = E_m phi in the diagonal model; all quantities are tail sums.
    const double b_m = weight_b(m, cfg);
    double tail0 = 0.0, tail_half = 0.0, tail1 = 0.0, func = 0.0;
    for (int j = m + 1; j <= phi.m(); ++j) {
      const double pj = phi.coef(j);
      const double bj = weight_b(j, cfg);
      tail0 += pj * pj;
      tail_half += std::sqrt(bj) * pj * pj;
      tail1 += bj * pj * pj;
      func += h.coef(j) * pj;
    }
    row.proj_r0 = b_m * tail0;
    row.proj_r_half = std::sqrt(b_m) * tail_half;
    row.proj_r1 = tail1;

    // b_m min(h_m, 1/v_m) in log space; 1/v_m overflows for the
    // exponential kind long before m = 32.
    const double log_factor =
        std::log(b_m) + std::min((m == 1 ? 0.0 : 2.0 * cfg.s * std::log(static_cast<double>(m))),
                                 -log_weight_v(m, cfg));
    row.func_bias = std::exp(log_factor) * func * func;

    row.pass = row.proj_r0 <= proj_bound && row.proj_r_half <= proj_bound &&
               row.proj_r1 <= proj_bound && row.func_bias <= func_bound;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace nivfunc
