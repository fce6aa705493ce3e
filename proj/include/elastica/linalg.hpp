#pragma once

#include <vector>

#include "elastica/tridiagonal.hpp"

namespace elastica {

double inf_norm(const std::vector<double>& v);
double dot(const std::vector<double>& a, const std::vector<double>& b);

/// Row-major dense matrix, used only for the bordered/constrained solves.
struct DenseMatrix {
  explicit DenseMatrix(int n) : n(n), a(static_cast<size_t>(n) * n, 0.0) {}
  int n;
  std::vector<double> a;
  double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

/// LU with partial pivoting; throws SingularMatrixError on breakdown.
std::vector<double> solve_dense(DenseMatrix m, std::vector<double> rhs);

/// Linear operator T + sum_k u_k v_k^T with banded T and a short list of
/// rank-one couplings (the bordered structure produced by point constraints).
struct BandedPlusLowRank {
  TridiagonalMatrix banded;
  std::vector<std::vector<double>> u;
  std::vector<std::vector<double>> v;

  explicit BandedPlusLowRank(TridiagonalMatrix t) : banded(std::move(t)) {}

  int size() const { return banded.size(); }
  bool pure_banded() const { return u.empty(); }
  std::vector<double> apply(const std::vector<double>& x) const;
  DenseMatrix to_dense() const;

  /// Woodbury solve through the banded factorization; falls back to a dense
  /// partial-pivot LU if either factorization breaks down. When
  /// positive_definite is given it reports the sign information of the
  /// banded pivots (dense fallback reports false).
  std::vector<double> solve(const std::vector<double>& rhs,
                            bool* positive_definite = nullptr) const;
};

}  // namespace elastica
