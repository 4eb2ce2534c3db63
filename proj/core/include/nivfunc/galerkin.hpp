#pragma once

#include <optional>
#include <stdexcept>

#include "nivfunc/basis.hpp"
#include "nivfunc/dgp.hpp"
#include "nivfunc/linalg.hpp"

namespace nivfunc {

/// Raised when the model's operator block would be singular at the
/// requested dimension (m exceeds the spectrum truncation).
class NotInjectiveAtDimension : public std::domain_error {
 public:
  NotInjectiveAtDimension(int m, int J);
  int m() const { return m_; }
  int J() const { return J_; }

 private:
  int m_, J_;
};

/// Empirical Galerkin block and moment vector estimated from a sample:
///   t_hat(l, j) = (1/n) sum_i f_{l+1}(W_i) e_{j+1}(Z_i)
///   g_hat_l     = (1/n) sum_i Y_i f_{l+1}(W_i)
struct GalerkinPair {
  DenseMatrix t_hat;
  CoefVector g_hat;
  int m = 0;
  int n = 0;
};

struct EstimateResult {
  double value = 0.0;
  bool truncated = false;               // the zero branch fired
  double alpha = 0.0;                   // threshold used
  std::optional<double> inv_norm;       // ||t_hat^{-1}|| when invertible
};

/// Diag(lambda_1, ..., lambda_m) of the model operator. Requires m <= J.
DenseMatrix true_matrix(const JointModel& model, int m);

GalerkinPair empirical_pair(const Sample& sample, int m);

/// Solves t x = g; throws std::domain_error when t is singular at the
/// default pivot tolerance.
CoefVector galerkin_solution(const DenseMatrix& t, const CoefVector& g);

/// ell_h(phi) = sum_j h_j phi_j over the common support (shorter vector
/// zero-padded).
double true_functional(const CoefVector& h, const CoefVector& phi);

/// Thresholded plug-in estimator:
///   h^T t_hat^{-1} g_hat  when t_hat is nonsingular and ||t_hat^{-1}|| <= alpha
///   0                     otherwise (truncated).
/// The comparison is inclusive. Requires alpha > 0 and h support >= m.
EstimateResult estimate_functional(const CoefVector& h, const GalerkinPair& pair, double alpha);

/// Diagnostic vectors from the error decomposition; both need the true
/// structural function (and its Galerkin projection) to be known.
///   noise_vector:   B_l = (1/n) sum_i (Y_i - phi(Z_i)) f_l(W_i)
///   residual_vector: S_l = (1/n) sum_i (phi(Z_i) - phi_m(Z_i)) f_l(W_i)
CoefVector noise_vector(const Sample& sample, const CoefVector& phi, int m);
CoefVector residual_vector(const Sample& sample, const CoefVector& phi, const CoefVector& phi_m,
                           int m);

}  // namespace nivfunc
