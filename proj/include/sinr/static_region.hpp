#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sinr/model.hpp"
#include "sinr/types.hpp"

namespace sinr {

/// One solved direction of a boundary sweep. rate_i = log2(1 + sinr_i).
/// `theta` is the sampling angle for 2-user angle sweeps (NaN otherwise).
/// A failed point keeps its direction and carries the error text instead of
/// being dropped.
struct BoundaryPoint {
  Direction mu;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double gamma_star = 0.0;
  Vector sinr;
  Vector rate;
  std::string binding;
  std::optional<std::string> error;
};

/// Max balanced SINR with only p >= 0: gamma* = 1 / lambda*(diag(mu) A).
/// Returns +infinity when lambda* = 0 (no limiting interference).
double unconstrained_max_sinr(const NormalizedGain& A, const Direction& d,
                              const Tolerances& tol = {});

/// Max balanced SINR under one subset-sum power constraint:
/// gamma* = 1 / lambda*(psi(diag(mu) A, eta / bound, omega)).
/// Requires mu strictly positive; axis points of the region are obtained by
/// solving the reduced system on the support of mu instead.
double constrained_max_sinr(const ChannelModel& ch, const Direction& d,
                            const PowerConstraint& c,
                            const Tolerances& tol = {});

/// Min over per-constraint solutions, with power recovered at the optimum.
/// An empty constraint list falls back to the unconstrained bound (whose
/// supremum is not attained by any finite power vector, so `power` is empty).
SolveReport multi_constrained_max_sinr(const ChannelModel& ch,
                                       const Direction& d,
                                       const std::vector<PowerConstraint>& cs,
                                       const Tolerances& tol = {});

/// Balanced power vector at SINR level gamma: solves
/// (I - gamma diag(mu) A) p = gamma eta. Refuses gamma at or beyond
/// (1 - gamma_guard) / lambda*(diag(mu) A), where the system turns singular.
Vector recover_power(const ChannelModel& ch, const Direction& d, double gamma,
                     const Tolerances& tol = {});

/// 2-user boundary sweep over mu(theta) = (cos theta, sin theta) at `count`
/// uniform interior angles theta_k = (pi/2) k / (count + 1), k = 1..count.
std::vector<BoundaryPoint> sweep_boundary(const ChannelModel& ch,
                                          const std::vector<PowerConstraint>& cs,
                                          int count,
                                          const Tolerances& tol = {});

/// General-n sweep over caller-supplied strictly positive directions.
std::vector<BoundaryPoint> sweep_boundary(const ChannelModel& ch,
                                          const std::vector<PowerConstraint>& cs,
                                          const std::vector<Direction>& dirs,
                                          const Tolerances& tol = {});

namespace detail {
/// Shared min-rule over precomputed per-constraint values; fills binding,
/// binding_index and ties (first argmin wins, ties within tie_rel listed).
void pick_binding(const std::vector<double>& values, const Tolerances& tol,
                  SolveReport& report);
}  // namespace detail

}  // namespace sinr
