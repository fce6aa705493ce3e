#include "elastica/linalg.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> solve_dense(DenseMatrix m, std::vector<double> rhs) {
  const int n = m.n;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < n; ++k) {
    int pivot_row = k;
    double best = std::abs(m.at(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(m.at(i, k)) > best) {
        best = std::abs(m.at(i, k));
        pivot_row = i;
      }
    }
    if (best < 1e-300) throw SingularMatrixError("dense solve: zero pivot column", k);
    if (pivot_row != k) {
      for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(pivot_row, j));
      std::swap(rhs[k], rhs[pivot_row]);
    }
    const double inv = 1.0 / m.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double factor = m.at(i, k) * inv;
      if (factor == 0.0) continue;
      m.at(i, k) = 0.0;
      for (int j = k + 1; j < n; ++j) m.at(i, j) -= factor * m.at(k, j);
      rhs[i] -= factor * rhs[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int j = i + 1; j < n; ++j) s -= m.at(i, j) * x[j];
    x[i] = s / m.at(i, i);
  }
  return x;
}

std::vector<double> BandedPlusLowRank::apply(const std::vector<double>& x) const {
  std::vector<double> y = banded.multiply(x);
  for (size_t k = 0; k < u.size(); ++k) {
    const double vx = dot(v[k], x);
    for (int i = 0; i < size(); ++i) y[i] += u[k][i] * vx;
  }
  return y;
}

DenseMatrix BandedPlusLowRank::to_dense() const {
  const int n = size();
  DenseMatrix m(n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = banded.diag[i];
    if (i + 1 < n) {
      m.at(i, i + 1) = banded.upper[i];
      m.at(i + 1, i) = banded.lower[i];
    }
  }
  for (size_t k = 0; k < u.size(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) += u[k][i] * v[k][j];
  return m;
}

std::vector<double> BandedPlusLowRank::solve(const std::vector<double>& rhs,
                                             bool* positive_definite) const {
  if (positive_definite) *positive_definite = false;
  if (pure_banded()) return solve_tridiagonal(banded, rhs, positive_definite);

  const int n = size();
  const int k = static_cast<int>(u.size());
  try {
    bool pd = false;
    std::vector<double> z = solve_tridiagonal(banded, rhs, &pd);
    std::vector<std::vector<double>> w(k);
    for (int j = 0; j < k; ++j) w[j] = solve_tridiagonal(banded, u[j]);
    // Capacitance system (I + V^T T^{-1} U) y = V^T z.
    DenseMatrix cap(k);
    std::vector<double> cap_rhs(k);
    for (int i = 0; i < k; ++i) {
      cap_rhs[i] = dot(v[i], z);
      for (int j = 0; j < k; ++j) cap.at(i, j) = (i == j ? 1.0 : 0.0) + dot(v[i], w[j]);
    }
    const std::vector<double> y = solve_dense(cap, cap_rhs);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) z[i] -= w[j][i] * y[j];
    // Verify against the full operator; indefinite banded parts can make the
    // Woodbury route inaccurate even when no pivot trips.
    const std::vector<double> res = apply(z);
    double res_norm = 0.0, rhs_norm = inf_norm(rhs), x_norm = inf_norm(z);
    for (int i = 0; i < n; ++i) res_norm = std::max(res_norm, std::abs(res[i] - rhs[i]));
    if (!(res_norm <= 1e-8 * (banded.inf_norm() * x_norm + rhs_norm + 1.0)))
      throw SingularMatrixError("bordered solve residual too large", -1);
    if (positive_definite) *positive_definite = pd;
    return z;
  } catch (const SingularMatrixError&) {
    return solve_dense(to_dense(), rhs);
  }
}

}  // namespace elastica
