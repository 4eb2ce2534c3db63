#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nivfunc/galerkin.hpp"
#include "nivfunc/scenario.hpp"

namespace nivfunc {

/// One replication of the experiment.
struct ExperimentRecord {
  long n = 0;
  int rep = 0;
  std::uint64_t seed = 0;   // derived stream seed of this replication
  int m = 0;
  double alpha = 0.0;
  double estimate = 0.0;
  double truth = 0.0;
  double sq_error = 0.0;
  bool truncated = false;
  double inv_norm = 0.0;    // NaN when the empirical block was singular
};

struct SummaryRow {
  long n = 0;
  int reps = 0;
  double mse = 0.0;
  double mc_se = 0.0;            // sample std of squared errors / sqrt(reps)
  double truncation_rate = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<long> n_grid;        // points entering the fit
  std::vector<double> mse_values;
  std::vector<long> excluded_n;    // dropped for truncation contamination
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs reps replications for every n in the scenario grid. Each record is a
/// pure function of (scenario, n, rep, master_seed); the output order is
/// (n, rep) regardless of the thread count. threads == 0 picks the hardware
/// concurrency. Throws ConfigError before any sampling when the tuned
/// dimension would exceed the model spectrum.
std::vector<ExperimentRecord> run_experiment(const Scenario& scenario, int threads = 0);

/// Same, with the grid, replication count and seed supplied explicitly
/// (overriding the scenario's fields).
std::vector<ExperimentRecord> run_experiment(const Scenario& scenario,
                                             const std::vector<long>& n_grid, int reps,
                                             std::uint64_t master_seed, int threads = 0);

/// Per-n mean squared error, Monte Carlo standard error, truncation share.
/// With median_of_means, the MSE is the median over 20 block means.
std::vector<SummaryRow> summarize_mse(const std::vector<ExperimentRecord>& records,
                                      bool median_of_means = false);

/// OLS of log(mse) on log(n). Grid points with truncation rate above
/// max_truncation are excluded (and reported); at least 3 points must remain
/// and every included mse must be positive, else FitError.
RateFit fit_rate(const std::vector<SummaryRow>& table, double max_truncation = 0.2);

struct DeviationRow {
  long n = 0;
  int m = 0;
  int reps = 0;
  double frequency = 0.0;  // share of reps with |Xi|^2 > v_m / (4D)
  double bound = 0.0;      // analytic bound, clamped at 1
  double se = 0.0;         // sqrt(bound / reps)
  bool pass = false;       // frequency <= bound + 3 se
};

struct DeviationReport {
  std::vector<DeviationRow> rows;
  bool pass = false;
};

/// Dedicated operator-deviation run at fixed dimension m over n_grid.
DeviationReport check_deviation(const Scenario& scenario, const std::vector<long>& n_grid, int m,
                                int reps, int threads = 0);

/// Galerkin-bias diagnostics at one dimension. In the diagonal model the
/// Galerkin solution is the projection, phi_m = E_m phi, so every quantity
/// is an exact tail sum of the scenario coefficients.
struct BiasRow {
  int m = 0;
  double proj_r0 = 0.0;    // b_m |phi - phi_m|^2
  double proj_r_half = 0.0;// b_m^{1/2} |phi - phi_m|^2_{b^{1/2}}
  double proj_r1 = 0.0;    // |phi - phi_m|^2_b
  double proj_bound = 0.0; // 2 D d rho
  double func_bias = 0.0;  // b_m min(h_m, 1/v_m) <h, phi - phi_m>^2
  double func_bound = 0.0; // 2 Lambda D d rho tau
  bool pass = false;
};

struct BiasReport {
  std::vector<BiasRow> rows;
  double lambda_hat = 1.0;  // empirical weight-compatibility constant
  bool pass = false;
};

/// Evaluates both bias-lemma bounds for every m in m_grid.
BiasReport check_bias(const Scenario& scenario, const std::vector<int>& m_grid);

}  // namespace nivfunc
