#pragma once

#include <span>

#include "sinr/types.hpp"

namespace sinr {

/// Dominant-eigenpair result for a nonnegative matrix. When `converged`,
/// ||X v - lambda_star v||_inf <= eigen_residual * max(1, lambda_star),
/// v >= 0 and sum(v) = 1.
struct PerronResult {
  double lambda_star = 0.0;
  Vector vector;
  int iterations = 0;
  bool converged = false;
};

/// Column-bump operator: returns X with y added to every column in `cols`
/// (0-based). X itself is untouched.
template <class DerivedX, class DerivedY>
Matrix psi(const Eigen::MatrixBase<DerivedX>& X,
           const Eigen::MatrixBase<DerivedY>& y, std::span<const int> cols) {
  Matrix Z = X;
  if (y.size() != Z.rows()) throw ValidationError("psi: vector length mismatch");
  for (int j : cols) {
    if (j < 0 || j >= Z.cols()) throw ValidationError("psi: column index out of range");
    Z.col(j) += y;
  }
  return Z;
}

template <class DerivedX, class DerivedY>
Matrix psi(const Eigen::MatrixBase<DerivedX>& X,
           const Eigen::MatrixBase<DerivedY>& y, const IndexSet& cols) {
  return psi(X, y, std::span<const int>(cols));
}

/// LU (partial pivoting) determinant; 0 for singular input.
double determinant(const Eigen::Ref<const Matrix>& X);

/// Solves X p = b by partially pivoted LU. Throws SingularMatrixError when a
/// pivot falls below singular_pivot * ||X||_inf.
Vector solve_linear(const Eigen::Ref<const Matrix>& X,
                    const Eigen::Ref<const Vector>& b,
                    const Tolerances& tol = {});

/// Spectral radius of a nonnegative square matrix with its Perron vector.
/// Power iteration on X + shift*I (shift = power_shift * max entry, which
/// breaks periodic cycling) with a Rayleigh-quotient eigenvalue estimate;
/// for matrices up to 3x3 that fail to converge, the radius is recovered as
/// the largest real root of the characteristic polynomial by bracketing.
PerronResult spectral_radius(const Eigen::Ref<const Matrix>& X,
                             const Tolerances& tol = {});

}  // namespace sinr
