#include "nivfunc/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nivfunc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void WeightConfig::validate() const {
  require(p >= 0.0, "WeightConfig: p must be >= 0");
  require(s >= 0.0, "WeightConfig: s must be >= 0");
  require(a > 0.0, "WeightConfig: a must be > 0");
  require(rho > 0.0, "WeightConfig: rho must be > 0");
  require(tau > 0.0, "WeightConfig: tau must be > 0");
  require(d >= 1.0, "WeightConfig: d must be >= 1");
  require(D >= d, "WeightConfig: D must be >= d");
  require(triangle >= 1.0, "WeightConfig: triangle must be >= 1");
}

CoefVector::CoefVector(std::vector<double> coefs) : v(std::move(coefs)) {
  for (double x : v) require(std::isfinite(x), "CoefVector: non-finite entry");
}

double eval_basis(int j, double s) {
  require(j >= 1, "eval_basis: index must be >= 1");
  require(s >= 0.0 && s <= 1.0, "eval_basis: point must lie in [0,1]");
  if (j == 1) return 1.0;
  const int k = j / 2;
  const double angle = kTwoPi * k * s;
  return (j % 2 == 0) ? kSqrt2 * std::cos(angle) : kSqrt2 * std::sin(angle);
}

void eval_basis_prefix(double s, std::span<double> out) {
  if (out.empty()) return;
  require(s >= 0.0 && s <= 1.0, "eval_basis_prefix: point must lie in [0,1]");
  out[0] = 1.0;
  if (out.size() == 1) return;
  const double c1 = std::cos(kTwoPi * s);
  const double s1 = std::sin(kTwoPi * s);
  // cos/sin of k*theta by angle addition.
  double ck = c1, sk = s1;
  for (std::size_t j = 1; j < out.size(); ++j) {
    if (j % 2 == 1) {
      out[j] = kSqrt2 * ck;  // e_{2k}
    } else {
      out[j] = kSqrt2 * sk;  // e_{2k+1}
      const double cn = ck * c1 - sk * s1;
      const double sn = sk * c1 + ck * s1;
      ck = cn;
      sk = sn;
    }
  }
}

double eval_series(const CoefVector& x, double s) {
  std::vector<double> e(static_cast<std::size_t>(x.m()));
  eval_basis_prefix(s, e);
  double acc = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) acc += x.v[i] * e[i];
  return acc;
}

double weight_b(int j, const WeightConfig& cfg) {
  require(j >= 1, "weight_b: index must be >= 1");
  return j == 1 ? 1.0 : std::pow(static_cast<double>(j), 2.0 * cfg.p);
}

double weight_h(int j, const WeightConfig& cfg) {
  require(j >= 1, "weight_h: index must be >= 1");
  return j == 1 ? 1.0 : std::pow(static_cast<double>(j), 2.0 * cfg.s);
}

double weight_v(int j, const WeightConfig& cfg) {
  return std::exp(log_weight_v(j, cfg));
}

double log_weight_v(int j, const WeightConfig& cfg) {
  require(j >= 1, "weight_v: index must be >= 1");
  if (j == 1) return 0.0;
  const double x = static_cast<double>(j);
  return cfg.kind == DecayKind::Polynomial ? -2.0 * cfg.a * std::log(x)
                                           : -std::pow(x, 2.0 * cfg.a);
}

WeightTriple weights(int j, const WeightConfig& cfg) {
  return {weight_b(j, cfg), weight_h(j, cfg), weight_v(j, cfg)};
}

double weighted_norm_sq(const CoefVector& x, WeightSeq w, const WeightConfig& cfg) {
  double acc = 0.0;
  for (int j = 1; j <= x.m(); ++j) {
    const double xj = x.v[static_cast<std::size_t>(j - 1)];
    double wj = 1.0;
    switch (w) {
      case WeightSeq::Unit: wj = 1.0; break;
      case WeightSeq::B: wj = weight_b(j, cfg); break;
      case WeightSeq::H: wj = weight_h(j, cfg); break;
      case WeightSeq::V: wj = weight_v(j, cfg); break;
    }
    acc += wj * xj * xj;
  }
  return acc;
}

CoefVector indicator_representer(double lo, double hi, int m) {
  require(m >= 1, "indicator_representer: m must be >= 1");
  require(lo >= 0.0 && hi <= 1.0, "indicator_representer: interval must lie in [0,1]");
  require(lo < hi, "indicator_representer: degenerate interval");
  CoefVector h;
  h.v.resize(static_cast<std::size_t>(m));
  h.v[0] = hi - lo;
  for (int j = 2; j <= m; ++j) {
    const int k = j / 2;
    const double w = kTwoPi * k;
    const double val = (j % 2 == 0)
                           ? kSqrt2 * (std::sin(w * hi) - std::sin(w * lo)) / w
                           : kSqrt2 * (std::cos(w * lo) - std::cos(w * hi)) / w;
    h.v[static_cast<std::size_t>(j - 1)] = val;
  }
  return h;
}

CoefVector smooth_coefs(double exponent, double scale, int m) {
  require(m >= 1, "smooth_coefs: m must be >= 1");
  require(exponent > 0.5, "smooth_coefs: exponent must exceed 1/2");
  require(scale > 0.0, "smooth_coefs: scale must be > 0");
  CoefVector x;
  x.v.resize(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j)
    x.v[static_cast<std::size_t>(j - 1)] = scale * std::pow(static_cast<double>(j), -exponent);
  return x;
}

double calibrated_scale(double exponent, double smoothness, double c) {
  require(c > 0.0, "calibrated_scale: radius must be > 0");
  const double q = 2.0 * exponent - 2.0 * smoothness;
  require(q > 1.0, "calibrated_scale: exponent too small for the requested smoothness");
  const double norm_bound = 1.0 + 1.0 / (q - 1.0);
  return std::sqrt(c / norm_bound);
}

}  // namespace nivfunc
