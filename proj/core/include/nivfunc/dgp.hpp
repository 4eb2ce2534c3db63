#pragma once

#include <cstdint>
#include <vector>

#include "nivfunc/basis.hpp"
#include "nivfunc/rng.hpp"

namespace nivfunc {

/// Joint law of (Z, W) on [0,1]^2 with uniform marginals and density
///   p(z, w) = 1 + sum_{j=2..J} lambda_j e_j(z) e_j(w),
/// so the conditional expectation operator is diagonal in the trig basis
/// with singular values lambda_j (lambda_1 = 1).
struct JointModel {
  int J = 1;                       // spectrum truncation level
  std::vector<double> lambdas;     // lambdas[j-1] = lambda_j
  double c = 1.0;                  // positivity scale applied to sqrt(v_j)
  double pmin = 1.0;               // global lower bound on the density
  double pmax = 1.0;               // global upper bound on the density

  double lambda(int j) const {
    return (j >= 1 && j <= J) ? lambdas[static_cast<std::size_t>(j - 1)] : 0.0;
  }
  double density(double z, double w) const;

  /// Link-condition constant actually realized by this spectrum:
  /// lambda_j^2 = c^2 v_j for j >= 2, hence d_eff = D_eff = 1/c^2.
  double effective_link_constant() const { return 1.0 / (c * c); }
};

/// lambda_j = c sqrt(v_j), c = min(1, (1 - margin) / (2 sum_{j=2..J} sqrt(v_j))),
/// which keeps the density within [margin, 2 - margin].
JointModel build_joint(const WeightConfig& cfg, int J, double margin);

/// One i.i.d. sample of (Y, Z, W).
struct Sample {
  std::vector<double> y, z, w;
  int n() const { return static_cast<int>(y.size()); }
};

struct PairSampleStats {
  std::int64_t proposals = 0;
  std::int64_t accepted = 0;
};

/// n i.i.d. draws from the joint density by rejection against the uniform
/// proposal with envelope pmax. When pmax == 1 the proposal is returned
/// directly, so the output equals the raw uniform stream.
void sample_pairs(const JointModel& model, int n, StreamRng& rng, std::vector<double>& z,
                  std::vector<double>& w, PairSampleStats* stats = nullptr);

/// Y_i = sum_j phi_j e_j(Z_i) + sigma * eps_i with standard Gaussian eps
/// independent of (Z_i, W_i). The error then satisfies E[U|W] = 0 and
/// E[U^4|W] = 3 sigma^4.
Sample draw_sample(const JointModel& model, const CoefVector& phi, double sigma, int n,
                   StreamRng& rng);

/// One-dimensional least-favorable perturbation at index k*:
///   xi        = min(1/(2d), rho/triangle)
///   phi_coef  = sqrt(xi / (n v_{k*}))
///   h_coef    = sqrt(tau / h_{k*})
/// The stored squares satisfy, in double arithmetic,
///   (i)  2 d n v_{k*} phi_sq <= 1
///   (ii) b_{k*} phi_sq <= rho
///  (iii) h_sq * phi_sq >= delta* (tau/triangle) xi,  delta* = 1/(b_{k*} h_{k*}),
/// provided b_{k*}/(n v_{k*}) lies in [1/triangle, triangle].
struct HardInstance {
  int k_star = 1;
  double xi = 0.0;
  double phi_coef = 0.0;
  double h_coef = 0.0;
  double phi_sq = 0.0;
  double h_sq = 0.0;
  /// Fourth-moment envelope 8(16 rho^2 eta + 3) implied for the error class,
  /// with eta = 4 for the trigonometric basis; recorded, not asserted sharp.
  double sigma4_bound = 0.0;

  struct Inequality {
    double lhs, rhs;
    bool holds;
  };
  /// The three inequality blocks, evaluated from the stored fields.
  std::vector<Inequality> inequalities(long n, const WeightConfig& cfg) const;
};

HardInstance hard_instance(const WeightConfig& cfg, long n, int k_star);

}  // namespace nivfunc
