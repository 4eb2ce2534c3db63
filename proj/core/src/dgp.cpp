#include "nivfunc/dgp.hpp"

#include <cmath>
#include <stdexcept>

namespace nivfunc {

double JointModel::density(double z, double w) const {
  if (J <= 1) return 1.0;
  std::vector<double> ez(static_cast<std::size_t>(J)), ew(static_cast<std::size_t>(J));
  eval_basis_prefix(z, ez);
  eval_basis_prefix(w, ew);
  double acc = 1.0;
  for (int j = 2; j <= J; ++j)
    acc += lambdas[static_cast<std::size_t>(j - 1)] * ez[static_cast<std::size_t>(j - 1)] *
           ew[static_cast<std::size_t>(j - 1)];
  return acc;
}

JointModel build_joint(const WeightConfig& cfg, int J, double margin) {
  if (J < 1) throw std::invalid_argument("build_joint: J must be >= 1");
  if (!(margin > 0.0 && margin < 1.0))
    throw std::invalid_argument("build_joint: margin must lie in (0,1)");
  cfg.validate();

  JointModel model;
  model.J = J;
  model.lambdas.assign(static_cast<std::size_t>(J), 0.0);
  model.lambdas[0] = 1.0;

  double root_sum = 0.0;
  for (int j = 2; j <= J; ++j) root_sum += std::sqrt(weight_v(j, cfg));
  model.c = (root_sum > 0.0) ? std::min(1.0, (1.0 - margin) / (2.0 * root_sum)) : 1.0;

  double tail = 0.0;
  for (int j = 2; j <= J; ++j) {
    const double lam = model.c * std::sqrt(weight_v(j, cfg));
    model.lambdas[static_cast<std::size_t>(j - 1)] = lam;
    tail += lam;
  }
  model.pmin = 1.0 - 2.0 * tail;
  model.pmax = 1.0 + 2.0 * tail;
  return model;
}

void sample_pairs(const JointModel& model, int n, StreamRng& rng, std::vector<double>& z,
                  std::vector<double>& w, PairSampleStats* stats) {
  if (n < 1) throw std::invalid_argument("sample_pairs: n must be >= 1");
  z.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));

  const bool flat = model.pmax <= 1.0;
  const std::int64_t cap = 1000000ll * n;
  std::int64_t proposals = 0;

  std::vector<double> ez(static_cast<std::size_t>(model.J)), ew(static_cast<std::size_t>(model.J));
  for (int i = 0; i < n; ++i) {
    for (;;) {
      if (++proposals > cap)
        throw std::runtime_error("sample_pairs: rejection loop exceeded its iteration cap");
      const double zc = rng.uniform();
      const double wc = rng.uniform();
      if (flat) {
        z[static_cast<std::size_t>(i)] = zc;
        w[static_cast<std::size_t>(i)] = wc;
        break;
      }
      const double u = rng.uniform();
      eval_basis_prefix(zc, ez);
      eval_basis_prefix(wc, ew);
      double dens = 1.0;
      for (int j = 2; j <= model.J; ++j)
        dens += model.lambdas[static_cast<std::size_t>(j - 1)] *
                ez[static_cast<std::size_t>(j - 1)] * ew[static_cast<std::size_t>(j - 1)];
      if (u * model.pmax <= dens) {
        z[static_cast<std::size_t>(i)] = zc;
        w[static_cast<std::size_t>(i)] = wc;
        break;
      }
    }
  }
  if (stats) {
    stats->proposals = proposals;
    stats->accepted = n;
  }
}

Sample draw_sample(const JointModel& model, const CoefVector& phi, double sigma, int n,
                   StreamRng& rng) {
  if (sigma < 0.0) throw std::invalid_argument("draw_sample: sigma must be >= 0");
  Sample s;
  sample_pairs(model, n, rng, s.z, s.w);
  s.y.resize(static_cast<std::size_t>(n));
  std::vector<double> ez(static_cast<std::size_t>(phi.m()));
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    if (phi.m() > 0) {
      eval_basis_prefix(s.z[static_cast<std::size_t>(i)], ez);
      for (int j = 0; j < phi.m(); ++j)
        mean += phi.v[static_cast<std::size_t>(j)] * ez[static_cast<std::size_t>(j)];
    }
    const double noise = (sigma > 0.0) ? sigma * rng.normal() : 0.0;
    s.y[static_cast<std::size_t>(i)] = mean + noise;
  }
  return s;
}

std::vector<HardInstance::Inequality> HardInstance::inequalities(long n,
                                                                 const WeightConfig& cfg) const {
  const double v = weight_v(k_star, cfg);
  const double b = weight_b(k_star, cfg);
  const double h = weight_h(k_star, cfg);
  const double delta_star = 1.0 / (b * h);
  const double lhs1 = 2.0 * cfg.d * static_cast<double>(n) * v * phi_sq;
  const double lhs2 = b * phi_sq;
  const double lhs3 = h_sq * phi_sq;
  const double rhs3 = delta_star * (cfg.tau / cfg.triangle) * xi;
  return {{lhs1, 1.0, lhs1 <= 1.0}, {lhs2, cfg.rho, lhs2 <= cfg.rho}, {lhs3, rhs3, lhs3 >= rhs3}};
}

HardInstance hard_instance(const WeightConfig& cfg, long n, int k_star) {
  if (n < 1) throw std::invalid_argument("hard_instance: n must be >= 1");
  if (k_star < 1) throw std::invalid_argument("hard_instance: k_star must be >= 1");
  cfg.validate();

  HardInstance inst;
  inst.k_star = k_star;
  inst.xi = std::min(1.0 / (2.0 * cfg.d), cfg.rho / cfg.triangle);

  const double v = weight_v(k_star, cfg);
  const double h = weight_h(k_star, cfg);
  inst.phi_sq = inst.xi / (static_cast<double>(n) * v);
  inst.h_sq = cfg.tau / h;

  // Rounding in the quotient can overshoot the <=-blocks by an ulp; shave
  // phi_sq until both hold as written.
  const double b = weight_b(k_star, cfg);
  for (int guard = 0; guard < 8; ++guard) {
    const double lhs1 = 2.0 * cfg.d * static_cast<double>(n) * v * inst.phi_sq;
    const double lhs2 = b * inst.phi_sq;
    if (lhs1 <= 1.0 && lhs2 <= cfg.rho) break;
    inst.phi_sq = std::nextafter(inst.phi_sq, 0.0);
  }

  inst.phi_coef = std::sqrt(inst.phi_sq);
  inst.h_coef = std::sqrt(inst.h_sq);
  inst.sigma4_bound = 8.0 * (16.0 * cfg.rho * cfg.rho * 4.0 + 3.0);
  return inst;
}

}  // namespace nivfunc
