#pragma once

#include <vector>

#include "sinr/model.hpp"
#include "sinr/types.hpp"

namespace sinr {

/// l*n-user expansion of a finite-state channel. State i owns rows/columns
/// j + i*n (0-based); A_exp is exactly block diagonal because links of
/// different states never interfere.
struct ExpandedSystem {
  int l = 0;
  int n = 0;
  Matrix A_exp;    // ln x ln, block i = A_i
  Vector eta_exp;  // eta[j + i*n] = mu_j sigma_j^2 / g^(i)_jj
  Vector mu_exp;   // ones(l) kron mu
  Vector rho;      // state probabilities, carried for average-power sums
  Vector g_direct; // g^(i)_jj at j + i*n, for per-state SINR reporting
};

ExpandedSystem expand(const TimeVaryingChannel& tv, const Direction& d);

/// Columns {j + i*n : j in omega} of the expanded system, state i (0-based).
IndexSet expanded_columns(const IndexSet& omega, int n, int state);

/// Max balanced SINR over all states under one average-power constraint:
/// gamma* = 1 / lambda*( diag(mu_exp) A_exp
///                       + sum_i psi(0, rho_i eta_exp / bound, cols_i) ).
/// The report's `power` is the expanded l*n vector at gamma*, `sinr` holds
/// per-(state,user) achieved SINRs and `average_power` the rho-weighted
/// per-user averages.
SolveReport tv_constrained_max_sinr(const TimeVaryingChannel& tv,
                                    const Direction& d,
                                    const PowerConstraint& c,
                                    const Tolerances& tol = {});

/// Min over per-constraint time-varying solutions (empty list falls back to
/// the unconstrained bound of the expanded system).
SolveReport tv_multi(const TimeVaryingChannel& tv, const Direction& d,
                     const std::vector<PowerConstraint>& cs,
                     const Tolerances& tol = {});

}  // namespace sinr
