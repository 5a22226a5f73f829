#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace sinr {

// Dense types used throughout. Everything is double precision at the API
// boundary; the scalar-templated aliases keep kernels expression-friendly.
template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatX<double>;
using Vector = VecX<double>;
using Index = Eigen::Index;

// 0-based column/user index sets (files and reports use 1-based indices).
using IndexSet = std::vector<int>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid inputs: malformed spec files, broken type invariants, bad arguments.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Linear systems with no usable pivot, or gamma at/beyond the spectral bound.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// An iterative kernel ran out its sweep budget without meeting tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Every numeric knob in one place so tests can tighten or relax them.
struct Tolerances {
  // spectral_radius: power iteration on X + shift*max|x_ij|*I, stopping when
  // the Rayleigh estimate moves less than power_rel relatively between sweeps.
  double power_shift = 1e-12;
  double power_rel = 1e-13;
  int power_max_sweeps = 100000;
  double eigen_residual = 1e-10;  // ||Xv - lambda*v||_inf <= this * max(1, lambda)

  // solve_linear: pivot |u_kk| < singular_pivot * ||X||_inf is singular.
  double singular_pivot = 1e-14;

  // recover_power refuses gamma above (1 - gamma_guard) / lambda*(diag(mu)A).
  double gamma_guard = 1e-12;

  // Feasibility slack: p >= -feas_slack and sum slack >= -feas_slack * bound.
  double feas_slack = 1e-10;

  // Bisection stops at bracket width <= bisect_abs * max(1, gamma).
  double bisect_abs = 1e-12;

  // Constraints within tie_rel of the minimum are reported as ties.
  double tie_rel = 1e-12;

  // Grid search is flagged too coarse when > grid_coarse_rel off bisection.
  double grid_coarse_rel = 0.05;

  // CLI `verify` gate on |closed - bisect| / bisect.
  double verify_rel_gap = 1e-7;
};

}  // namespace sinr
