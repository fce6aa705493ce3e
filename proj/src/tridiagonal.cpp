#include "elastica/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

double TridiagonalMatrix::inf_norm() const {
  const int n = size();
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(lower[i - 1]);
    if (i + 1 < n) row += std::abs(upper[i]);
    norm = std::max(norm, row);
  }
  return norm;
}

std::vector<double> TridiagonalMatrix::multiply(const std::vector<double>& x) const {
  const int n = size();
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    y[i] = diag[i] * x[i];
    if (i > 0) y[i] += lower[i - 1] * x[i - 1];
    if (i + 1 < n) y[i] += upper[i] * x[i + 1];
  }
  return y;
}

double TridiagonalMatrix::max_relative_asymmetry() const {
  const double norm = inf_norm();
  if (norm == 0.0) return 0.0;
  double worst = 0.0;
  for (size_t i = 0; i < lower.size(); ++i)
    worst = std::max(worst, std::abs(lower[i] - upper[i]));
  return worst / norm;
}

std::vector<double> solve_tridiagonal(const TridiagonalMatrix& m, const std::vector<double>& rhs) {
  return solve_tridiagonal(m, rhs, nullptr);
}

std::vector<double> solve_tridiagonal(const TridiagonalMatrix& m, const std::vector<double>& rhs,
                                      bool* positive_definite) {
  const int n = m.size();
  if (static_cast<int>(rhs.size()) != n) throw ConfigError("rhs length does not match matrix");
  const double norm = m.inf_norm();
  const double pivot_floor = 1e-14 * norm;
  bool pd = true;

  std::vector<double> c(n, 0.0);  // eliminated superdiagonal
  std::vector<double> d(n, 0.0);  // eliminated rhs
  double pivot = m.diag[0];
  if (pivot <= 0.0) pd = false;
  if (std::abs(pivot) <= pivot_floor) {
    throw SingularMatrixError("singular pivot at row 0 (|" + std::to_string(pivot) +
                                  "| <= " + std::to_string(pivot_floor) + ")",
                              0);
  }
  c[0] = (n > 1) ? m.upper[0] / pivot : 0.0;
  d[0] = rhs[0] / pivot;
  for (int i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.lower[i - 1] * c[i - 1];
    if (pivot <= 0.0) pd = false;
    if (std::abs(pivot) <= pivot_floor) {
      throw SingularMatrixError("singular pivot at row " + std::to_string(i), i);
    }
    if (i + 1 < n) c[i] = m.upper[i] / pivot;
    d[i] = (rhs[i] - m.lower[i - 1] * d[i - 1]) / pivot;
  }

  std::vector<double> x(n, 0.0);
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];

  // Residual contract; elimination without pivoting turns instability into
  // an explicit error instead of a quietly wrong answer.
  double x_norm = 0.0, r_norm = 0.0, res_norm = 0.0;
  const std::vector<double> mx = m.multiply(x);
  for (int i = 0; i < n; ++i) {
    x_norm = std::max(x_norm, std::abs(x[i]));
    r_norm = std::max(r_norm, std::abs(rhs[i]));
    res_norm = std::max(res_norm, std::abs(mx[i] - rhs[i]));
  }
  if (!(res_norm <= 1e-10 * (norm * x_norm + r_norm))) {
    throw SingularMatrixError("tridiagonal solve residual " + std::to_string(res_norm) +
                                  " exceeds the stability bound",
                              -1);
  }
  if (positive_definite) *positive_definite = pd;
  return x;
}

}  // namespace elastica
