#include "nivfunc/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace nivfunc {

namespace {

// Tiny deterministic generator for power-iteration start vectors; keeps the
// module free of <random> and identical across platforms.
struct SplitMix {
  std::uint64_t state;
  double next_unit() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
};

double norm2(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace

DenseMatrix::DenseMatrix(int order) : order_(order) {
  if (order < 0) throw std::invalid_argument("DenseMatrix: negative order");
  a_.assign(static_cast<std::size_t>(order) * order, 0.0);
}

DenseMatrix DenseMatrix::identity(int order) {
  DenseMatrix m(order);
  for (int i = 0; i < order; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& diag) {
  DenseMatrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.order(); ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return m;
}

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  const int n = lhs.order();
  if (n != rhs.order()) throw std::invalid_argument("matrix product: order mismatch");
  DenseMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double lik = lhs(i, k);
      if (lik == 0.0) continue;
      for (int j = 0; j < n; ++j) out(i, j) += lik * rhs(k, j);
    }
  return out;
}

DenseMatrix operator-(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  const int n = lhs.order();
  if (n != rhs.order()) throw std::invalid_argument("matrix difference: order mismatch");
  DenseMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = lhs(i, j) - rhs(i, j);
  return out;
}

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
  const int n = a.order();
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("matvec: size mismatch");
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += a(i, j) * x[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double spectral_norm(const DenseMatrix& a) {
  const int n = a.order();
  if (n == 0) return 0.0;
  if (n == 1) return std::abs(a(0, 0));

  // Power iteration on G = A^T A; sigma_max = sqrt(lambda_max(G)).
  DenseMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += a(k, i) * a(k, j);
      g(i, j) = acc;
    }

  double scale = max_abs(g);
  if (scale == 0.0) return 0.0;

  SplitMix rng{0x5eed5eed5eed5eedull};
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = rng.next_unit() + 0.5;
  double xn = norm2(x);
  for (auto& v : x) v /= xn;

  double lambda = 0.0;
  double prev = -1.0;
  int stagnant = 0;
  for (int it = 0; it < 10000; ++it) {
    std::vector<double> y = matvec(g, x);
    const double yn = norm2(y);
    if (yn == 0.0) {
      // x landed in the null space; restart from a fresh direction.
      for (auto& v : x) v = rng.next_unit() + 0.5;
      xn = norm2(x);
      for (auto& v : x) v /= xn;
      continue;
    }
    for (auto& v : y) v /= yn;
    lambda = yn;
    if (prev >= 0.0 && std::abs(lambda - prev) <= 1e-12 * std::max(lambda, 1e-300)) {
      x = std::move(y);
      break;
    }
    // A slow eigengap stalls convergence; jitter the iterate once in a while.
    if (prev >= 0.0 && std::abs(lambda - prev) <= 1e-6 * lambda) {
      if (++stagnant == 50) {
        for (auto& v : y) v += 1e-3 * (rng.next_unit() - 0.5);
        const double zn = norm2(y);
        for (auto& v : y) v /= zn;
        stagnant = 0;
      }
    } else {
      stagnant = 0;
    }
    prev = lambda;
    x = std::move(y);
  }
  // One Rayleigh quotient to polish: lambda = x^T G x for the unit iterate.
  std::vector<double> gx = matvec(g, x);
  double rq = 0.0;
  for (int i = 0; i < n; ++i) rq += x[static_cast<std::size_t>(i)] * gx[static_cast<std::size_t>(i)];
  return std::sqrt(std::max(rq, 0.0));
}

namespace {

// Shared elimination core: factors a copy of [a | rhs-block] in place.
// Returns false on a pivot below tol.
bool eliminate(DenseMatrix a, DenseMatrix& rhs, double tol) {
  const int n = a.order();
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double cand = std::abs(a(r, col));
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (!(best >= tol)) return false;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(col, j), a(pivot, j));
        std::swap(rhs(col, j), rhs(pivot, j));
      }
    }
    const double inv_p = 1.0 / a(col, col);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col) * inv_p;
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      for (int j = 0; j < n; ++j) rhs(r, j) -= f * rhs(col, j);
    }
    for (int j = 0; j < n; ++j) rhs(col, j) *= inv_p;
    for (int j = col; j < n; ++j) a(col, j) *= inv_p;
  }
  return true;
}

}  // namespace

std::optional<DenseMatrix> invert(const DenseMatrix& a, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("invert: tol must be > 0");
  DenseMatrix rhs = DenseMatrix::identity(a.order());
  if (!eliminate(a, rhs, tol)) return std::nullopt;
  return rhs;
}

std::optional<std::vector<double>> solve(const DenseMatrix& a, const std::vector<double>& rhs,
                                         double tol) {
  auto inv = invert(a, tol);
  if (!inv) return std::nullopt;
  return matvec(*inv, rhs);
}

}  // namespace nivfunc
