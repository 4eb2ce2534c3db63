#pragma once

#include <span>
#include <vector>

namespace nivfunc {

/// Decay family of the operator weight sequence v.
enum class DecayKind { Polynomial, Exponential };

/// Smoothness / ill-posedness configuration shared by all modules.
///
/// Weight sequences (1-based index j):
///   b_1 = 1, b_j = j^(2p)                       structural-function weights
///   h_1 = 1, h_j = j^(2s)                       representer weights
///   v_1 = 1, v_j = j^(-2a) or exp(-j^(2a))      operator weights
struct WeightConfig {
  double p = 1.0;       // smoothness of the structural function, >= 0
  double s = 1.0;       // smoothness of the representer, >= 0
  double a = 1.0;       // degree of ill-posedness, > 0
  DecayKind kind = DecayKind::Polynomial;
  double rho = 1.0;       // radius of the structural ellipsoid, > 0
  double tau = 1.0;       // radius of the representer ellipsoid, > 0
  double d = 1.0;         // link-condition constant, >= 1
  double D = 1.0;         // extended-link constant, >= d
  double triangle = 1.0;  // dimension-rule band constant, >= 1

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// Finite coefficient sequence w.r.t. the trigonometric basis.
/// v[j-1] holds the coefficient of e_j.
struct CoefVector {
  std::vector<double> v;

  CoefVector() = default;
  explicit CoefVector(std::vector<double> coefs);

  int m() const { return static_cast<int>(v.size()); }
  /// 1-based access; coefficients beyond the support are zero.
  double coef(int j) const {
    return (j >= 1 && j <= m()) ? v[static_cast<std::size_t>(j - 1)] : 0.0;
  }
};

/// e_1 = 1, e_{2k}(s) = sqrt(2) cos(2 pi k s), e_{2k+1}(s) = sqrt(2) sin(2 pi k s).
/// Requires j >= 1 and s in [0,1].
double eval_basis(int j, double s);

/// Fills out[j-1] = e_j(s) for j = 1..out.size() using the Chebyshev-style
/// angle-addition recurrence (one sin/cos pair total). Agrees with
/// eval_basis to ~1e-12 for j <= 128.
void eval_basis_prefix(double s, std::span<double> out);

/// Sum_j x_j e_j(s) over the support of x.
double eval_series(const CoefVector& x, double s);

struct WeightTriple {
  double b, h, v;
};

double weight_b(int j, const WeightConfig& cfg);
double weight_h(int j, const WeightConfig& cfg);
double weight_v(int j, const WeightConfig& cfg);
/// log(v_j); usable where v_j underflows (exponential decay, large j).
double log_weight_v(int j, const WeightConfig& cfg);
WeightTriple weights(int j, const WeightConfig& cfg);

/// Which weight sequence a weighted norm uses.
enum class WeightSeq { Unit, B, H, V };

/// Sum_j w_j x_j^2 over the support of x. Membership in the ellipsoid of
/// radius c is the test weighted_norm_sq(...) <= c.
double weighted_norm_sq(const CoefVector& x, WeightSeq w, const WeightConfig& cfg);

/// First m trigonometric coefficients of the indicator of [lo, hi] in [0,1]:
///   [h]_1      = hi - lo
///   [h]_{2k}   = sqrt(2) (sin(2 pi k hi) - sin(2 pi k lo)) / (2 pi k)
///   [h]_{2k+1} = sqrt(2) (cos(2 pi k lo) - cos(2 pi k hi)) / (2 pi k)
/// Requires 0 <= lo < hi <= 1.
CoefVector indicator_representer(double lo, double hi, int m);

/// Coefficients scale * j^(-exponent), j = 1..m. Requires exponent > 1/2
/// (square summability) and scale > 0.
CoefVector smooth_coefs(double exponent, double scale, int m);

/// Scale such that smooth_coefs(exponent, scale, m) lies in the radius-c
/// ellipsoid with weights j^(2*smoothness) for every truncation m, using the
/// analytic tail bound sum_j j^(2*smoothness - 2*exponent) <= 1 + 1/(q - 1),
/// q = 2*exponent - 2*smoothness. Requires q > 1.
double calibrated_scale(double exponent, double smoothness, double c);

}  // namespace nivfunc
