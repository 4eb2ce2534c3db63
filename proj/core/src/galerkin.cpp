#include "nivfunc/galerkin.hpp"

#include <cmath>
#include <string>

namespace nivfunc {

namespace {

// f and e are both trigonometric here; separate hooks keep a future
// non-symmetric basis choice local to this file.
void eval_basis_z(double z, std::span<double> out) { eval_basis_prefix(z, out); }
void eval_basis_w(double w, std::span<double> out) { eval_basis_prefix(w, out); }

}  // namespace

NotInjectiveAtDimension::NotInjectiveAtDimension(int m, int J)
    : std::domain_error("true_matrix: dimension " + std::to_string(m) +
                        " exceeds the spectrum truncation J = " + std::to_string(J)),
      m_(m),
      J_(J) {}

DenseMatrix true_matrix(const JointModel& model, int m) {
  if (m < 1) throw std::invalid_argument("true_matrix: m must be >= 1");
  if (m > model.J) throw NotInjectiveAtDimension(m, model.J);
  std::vector<double> diag(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) diag[static_cast<std::size_t>(j - 1)] = model.lambda(j);
  return DenseMatrix::diagonal(diag);
}

GalerkinPair empirical_pair(const Sample& sample, int m) {
  if (m < 1) throw std::invalid_argument("empirical_pair: m must be >= 1");
  const int n = sample.n();
  if (n < 1) throw std::invalid_argument("empirical_pair: empty sample");

  GalerkinPair pair;
  pair.m = m;
  pair.n = n;
  pair.t_hat = DenseMatrix(m);
  pair.g_hat.v.assign(static_cast<std::size_t>(m), 0.0);

  std::vector<double> ez(static_cast<std::size_t>(m)), fw(static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i) {
    eval_basis_z(sample.z[static_cast<std::size_t>(i)], ez);
    eval_basis_w(sample.w[static_cast<std::size_t>(i)], fw);
    const double yi = sample.y[static_cast<std::size_t>(i)];
    for (int l = 0; l < m; ++l) {
      const double fl = fw[static_cast<std::size_t>(l)];
      pair.g_hat.v[static_cast<std::size_t>(l)] += yi * fl;
      for (int j = 0; j < m; ++j) pair.t_hat(l, j) += fl * ez[static_cast<std::size_t>(j)];
    }
  }
  // True division keeps exact averages exact: the (1,1) entry accumulates
  // n ones, and n / n == 1.0 for every n.
  for (auto& x : pair.t_hat.data()) x /= n;
  for (auto& x : pair.g_hat.v) x /= n;
  return pair;
}

CoefVector galerkin_solution(const DenseMatrix& t, const CoefVector& g) {
  if (t.order() != g.m()) throw std::invalid_argument("galerkin_solution: size mismatch");
  auto x = solve(t, g.v);
  if (!x) throw std::domain_error("galerkin_solution: singular Galerkin matrix");
  return CoefVector(std::move(*x));
}

double true_functional(const CoefVector& h, const CoefVector& phi) {
  const int m = std::min(h.m(), phi.m());
  double acc = 0.0;
  for (int j = 0; j < m; ++j)
    acc += h.v[static_cast<std::size_t>(j)] * phi.v[static_cast<std::size_t>(j)];
  return acc;
}

EstimateResult estimate_functional(const CoefVector& h, const GalerkinPair& pair, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("estimate_functional: alpha must be > 0");
  if (h.m() < pair.m)
    throw std::invalid_argument("estimate_functional: representer support shorter than m");

  EstimateResult res;
  res.alpha = alpha;

  auto inv = invert(pair.t_hat);
  if (!inv) {
    res.truncated = true;
    return res;
  }
  res.inv_norm = spectral_norm(*inv);
  if (!(*res.inv_norm <= alpha)) {
    res.truncated = true;
    return res;
  }
  const std::vector<double> sol = matvec(*inv, pair.g_hat.v);
  double acc = 0.0;
  for (int j = 0; j < pair.m; ++j) acc += h.v[static_cast<std::size_t>(j)] * sol[static_cast<std::size_t>(j)];
  res.value = acc;
  return res;
}

namespace {

CoefVector weighted_residual(const Sample& sample, const CoefVector& phi, const CoefVector* phi_m,
                             int m) {
  const int n = sample.n();
  CoefVector out;
  out.v.assign(static_cast<std::size_t>(m), 0.0);
  const int support = phi_m ? std::max(phi.m(), phi_m->m()) : phi.m();
  std::vector<double> ez(static_cast<std::size_t>(support)), fw(static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i) {
    eval_basis_z(sample.z[static_cast<std::size_t>(i)], ez);
    eval_basis_w(sample.w[static_cast<std::size_t>(i)], fw);
    double resid;
    if (phi_m) {
      double full = 0.0, proj = 0.0;
      for (int j = 1; j <= support; ++j) {
        const double e = ez[static_cast<std::size_t>(j - 1)];
        full += phi.coef(j) * e;
        proj += phi_m->coef(j) * e;
      }
      resid = full - proj;
    } else {
      double full = 0.0;
      for (int j = 1; j <= support; ++j) full += phi.coef(j) * ez[static_cast<std::size_t>(j - 1)];
      resid = sample.y[static_cast<std::size_t>(i)] - full;
    }
    for (int l = 0; l < m; ++l) out.v[static_cast<std::size_t>(l)] += resid * fw[static_cast<std::size_t>(l)];
  }
  for (auto& x : out.v) x /= n;
  return out;
}

}  // namespace

CoefVector noise_vector(const Sample& sample, const CoefVector& phi, int m) {
  return weighted_residual(sample, phi, nullptr, m);
}

CoefVector residual_vector(const Sample& sample, const CoefVector& phi, const CoefVector& phi_m,
                           int m) {
  return weighted_residual(sample, phi, &phi_m, m);
}

}  // namespace nivfunc
