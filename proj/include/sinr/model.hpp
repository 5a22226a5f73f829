#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sinr/types.hpp"

namespace sinr {

/// Physical n-link interference channel: link power gains G (g_ij is the
/// attenuation from transmitter j to receiver i) and receiver noise variances.
struct ChannelModel {
  int n = 0;
  Matrix G;
  Vector sigma2;

  /// Throws ValidationError unless n >= 1, G is n-by-n with nonnegative
  /// entries and strictly positive diagonal, and sigma2 > 0 elementwise.
  void validate() const;
};

/// Cross gains divided by each link's direct gain; zero diagonal.
struct NormalizedGain {
  Matrix A;

  void validate() const;
};

/// Weight vector defining a ray in SINR space. Stored un-normalized; the
/// solved SINR vector mu * gamma* is invariant under positive rescaling.
struct Direction {
  Vector mu;

  void validate() const;
  bool strictly_positive() const;
  Vector normalized() const;  // mu scaled to unit Euclidean length
};

/// One power constraint: sum of p_i over `users` bounded by `bound`.
/// Users are stored 0-based internally; files and reports are 1-based.
struct PowerConstraint {
  IndexSet users;
  double bound = 0.0;

  void validate(int n) const;
  std::string label() const;  // e.g. "{1,3}<=2.5", 1-based users
};

/// Finite-state channel: gain matrix drawn from `states` with probabilities
/// rho; noise variances are common to all states.
struct TimeVaryingChannel {
  std::vector<ChannelModel> states;
  Vector rho;

  int state_count() const { return static_cast<int>(states.size()); }
  int user_count() const { return states.empty() ? 0 : states.front().n; }
  void validate() const;
};

/// Solver output. `power` has length n for static solves and l*n for
/// time-varying ones (state-major, user j of state i at j + i*n); in the
/// latter case `average_power` carries the rho-weighted per-user averages.
struct SolveReport {
  double gamma_star = 0.0;
  bool unbounded = false;
  Vector power;
  Vector sinr;
  std::string binding = "unconstrained";  // "c<k>" (1-based) or "unconstrained"
  int binding_index = -1;                 // 0-based into the constraint list
  std::vector<int> ties;                  // all argmin constraints, 0-based
  Vector average_power;                   // time-varying solves only
};

/// a_ij = g_ij / g_ii off the diagonal, a_ii = 0.
NormalizedGain normalize(const ChannelModel& ch);

/// eta_i = mu_i * sigma_i^2 / g_ii.
Vector eta(const ChannelModel& ch, const Direction& d);

}  // namespace sinr
