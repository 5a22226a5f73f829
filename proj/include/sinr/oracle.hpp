#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sinr/model.hpp"
#include "sinr/time_varying.hpp"
#include "sinr/types.hpp"

namespace sinr {

/// Outcome of a feasibility probe at a fixed gamma. `feasible` iff the
/// balanced power system solved, came out (numerically) nonnegative, and
/// every constraint holds within slack.
struct FeasibilityVerdict {
  bool feasible = false;
  std::optional<Vector> witness_power;
  struct Violation {
    std::string constraint;  // "c<k>", "p>=0", or "singular system"
    double slack = 0.0;      // negative when violated
  };
  std::vector<Violation> violated;
};

/// Grid-search result; `too_coarse` is set when the grid value strays more
/// than grid_coarse_rel from the bisection reference.
struct GridSearchResult {
  double gamma_star = 0.0;
  double bisect_reference = 0.0;
  bool too_coarse = false;
};

/// Solves (I - gamma diag(mu) A) p = gamma eta (the balanced power point)
/// and checks p >= -feas_slack plus every subset-sum constraint with slack
/// >= -feas_slack * bound. A singular system yields an infeasible verdict
/// with reason, never an exception.
FeasibilityVerdict check_feasible(const ChannelModel& ch, const Direction& d,
                                  const std::vector<PowerConstraint>& cs,
                                  double gamma, const Tolerances& tol = {});

/// Expanded-system variant; constraints bound the rho-weighted average
/// sum_i rho_i sum_{j in omega} p_{j+i*n}.
FeasibilityVerdict check_feasible(const ExpandedSystem& sys,
                                  const std::vector<PowerConstraint>& cs,
                                  double gamma, const Tolerances& tol = {});

/// Closed-form-free maximizer: doubles an upper bracket from 1 until
/// infeasible (cap 2^60, beyond which the problem is reported unbounded via
/// +infinity), then bisects to width bisect_abs * max(1, gamma).
double bisect_max_sinr(const ChannelModel& ch, const Direction& d,
                       const std::vector<PowerConstraint>& cs,
                       const Tolerances& tol = {});
double bisect_max_sinr(const ExpandedSystem& sys,
                       const std::vector<PowerConstraint>& cs,
                       const Tolerances& tol = {});

/// Second-opinion oracle that does not assume SINR balancing: exhaustive
/// search over the per-user power boxes [0, min bound over constraints
/// containing the user], `resolution` steps per axis, keeping the best
/// min_i gamma_i / mu_i among constraint-satisfying grid points. Only for
/// n <= 3; every user must appear in some constraint to bound its box.
GridSearchResult grid_search_max_sinr(const ChannelModel& ch,
                                      const std::vector<PowerConstraint>& cs,
                                      const Direction& d, int resolution,
                                      const Tolerances& tol = {});

}  // namespace sinr
