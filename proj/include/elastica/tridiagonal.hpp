#pragma once

#include <vector>

namespace elastica {

/// Symmetric-structure tridiagonal matrix stored by diagonals.
/// lower[i] = M(i+1, i), diag[i] = M(i, i), upper[i] = M(i, i+1).
struct TridiagonalMatrix {
  explicit TridiagonalMatrix(int n)
      : lower(n > 0 ? n - 1 : 0, 0.0), diag(n, 0.0), upper(n > 0 ? n - 1 : 0, 0.0) {}

  int size() const { return static_cast<int>(diag.size()); }

  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  double inf_norm() const;
  std::vector<double> multiply(const std::vector<double>& x) const;
  /// max |lower[i] - upper[i]| / inf_norm, zero for an exactly symmetric matrix.
  double max_relative_asymmetry() const;
};

/// Thomas elimination without pivoting. Pivots with magnitude below
/// 1e-14 * inf_norm raise SingularMatrixError; the returned solution is
/// checked against the residual bound
///   ||Mx - r||_inf <= 1e-10 (||M||_inf ||x||_inf + ||r||_inf).
std::vector<double> solve_tridiagonal(const TridiagonalMatrix& m, const std::vector<double>& rhs);

/// Same elimination, also reporting whether all pivots were positive (for a
/// symmetric matrix this is the positive-definiteness test of the LDL^T
/// factorization).
std::vector<double> solve_tridiagonal(const TridiagonalMatrix& m, const std::vector<double>& rhs,
                                      bool* positive_definite);

}  // namespace elastica
