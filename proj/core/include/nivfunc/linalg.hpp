#pragma once

#include <optional>
#include <vector>

namespace nivfunc {

/// Square dense matrix, row-major, sized for Galerkin blocks (m <= ~64).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int order);
  static DenseMatrix identity(int order);
  static DenseMatrix diagonal(const std::vector<double>& diag);

  int order() const { return order_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * order_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * order_ + j]; }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

 private:
  int order_ = 0;
  std::vector<double> a_;
};

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs);
DenseMatrix operator-(const DenseMatrix& lhs, const DenseMatrix& rhs);
std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x);

/// max_ij |a_ij|.
double max_abs(const DenseMatrix& a);

/// Largest singular value via power iteration on A^T A (relative tolerance
/// 1e-12, at most 10000 sweeps, randomized deterministic restart on
/// stagnation).
double spectral_norm(const DenseMatrix& a);

/// Inverse by Gaussian elimination with partial pivoting. Returns nullopt
/// when a pivot magnitude falls below tol; that branch feeds the estimator's
/// truncation path.
std::optional<DenseMatrix> invert(const DenseMatrix& a, double tol = 1e-12);

/// Solves a x = rhs with the same elimination; nullopt on a tiny pivot.
std::optional<std::vector<double>> solve(const DenseMatrix& a, const std::vector<double>& rhs,
                                         double tol = 1e-12);

}  // namespace nivfunc
