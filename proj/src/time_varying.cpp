#include "sinr/time_varying.hpp"

#include <cmath>
#include <limits>

#include "sinr/linalg.hpp"
#include "sinr/static_region.hpp"

namespace sinr {

namespace {

PerronResult radius_or_throw(const Matrix& M, const Tolerances& tol) {
  PerronResult pf = spectral_radius(M, tol);
  if (!pf.converged)
    throw ConvergenceError("spectral radius did not converge after " +
                           std::to_string(pf.iterations) + " sweeps");
  return pf;
}

// Per-(state, user) SINRs of the expanded power vector, state-major.
Vector achieved_sinr(const TimeVaryingChannel& tv, const Vector& p) {
  const int n = tv.user_count();
  Vector out(tv.state_count() * n);
  for (int i = 0; i < tv.state_count(); ++i) {
    const ChannelModel& ch = tv.states[i];
    for (int j = 0; j < n; ++j) {
      double interference = ch.sigma2(j);
      for (int k = 0; k < n; ++k)
        if (k != j) interference += ch.G(j, k) * p(k + i * n);
      out(j + i * n) = ch.G(j, j) * p(j + i * n) / interference;
    }
  }
  return out;
}

// Solves the expanded balanced system at gamma and fills the power-related
// report fields.
void fill_power(const ExpandedSystem& sys, const TimeVaryingChannel& tv,
                double gamma, const Tolerances& tol, SolveReport& report) {
  const Index ln = sys.A_exp.rows();
  const Matrix F =
      Matrix::Identity(ln, ln) - gamma * Matrix(sys.mu_exp.asDiagonal() * sys.A_exp);
  Vector p = solve_linear(F, (gamma * sys.eta_exp).eval(), tol);
  if (p.minCoeff() < -tol.feas_slack)
    throw SingularMatrixError("tv solve: negative power recovered");
  report.power = p.cwiseMax(0.0);
  report.sinr = achieved_sinr(tv, report.power);
  report.average_power = Vector::Zero(sys.n);
  for (int i = 0; i < sys.l; ++i)
    for (int j = 0; j < sys.n; ++j)
      report.average_power(j) += sys.rho(i) * report.power(j + i * sys.n);
}

}  // namespace

IndexSet expanded_columns(const IndexSet& omega, int n, int state) {
  IndexSet cols;
  cols.reserve(omega.size());
  for (int j : omega) cols.push_back(j + state * n);
  return cols;
}

ExpandedSystem expand(const TimeVaryingChannel& tv, const Direction& d) {
  tv.validate();
  d.validate();
  const int n = tv.user_count();
  const int l = tv.state_count();
  if (d.mu.size() != n) throw ValidationError("mu: length must match channel");
  if (!d.strictly_positive())
    throw ValidationError("mu: time-varying solver requires strictly positive weights");

  ExpandedSystem sys;
  sys.l = l;
  sys.n = n;
  sys.rho = tv.rho;
  sys.A_exp = Matrix::Zero(l * n, l * n);
  sys.eta_exp = Vector(l * n);
  sys.mu_exp = d.mu.replicate(l, 1);
  sys.g_direct = Vector(l * n);
  for (int i = 0; i < l; ++i) {
    const ChannelModel& ch = tv.states[i];
    sys.A_exp.block(i * n, i * n, n, n) = normalize(ch).A;
    for (int j = 0; j < n; ++j) {
      sys.eta_exp(j + i * n) = d.mu(j) * ch.sigma2(j) / ch.G(j, j);
      sys.g_direct(j + i * n) = ch.G(j, j);
    }
  }
  return sys;
}

SolveReport tv_constrained_max_sinr(const TimeVaryingChannel& tv, const Direction& d,
                                    const PowerConstraint& c, const Tolerances& tol) {
  const ExpandedSystem sys = expand(tv, d);
  c.validate(sys.n);

  Matrix M = sys.mu_exp.asDiagonal() * sys.A_exp;
  for (int i = 0; i < sys.l; ++i)
    M = psi(M, ((sys.rho(i) / c.bound) * sys.eta_exp).eval(),
            expanded_columns(c.users, sys.n, i));
  const PerronResult pf = radius_or_throw(M, tol);

  SolveReport report;
  report.gamma_star = 1.0 / pf.lambda_star;
  report.binding = "c1";
  report.binding_index = 0;
  report.ties = {0};
  fill_power(sys, tv, report.gamma_star, tol, report);
  return report;
}

SolveReport tv_multi(const TimeVaryingChannel& tv, const Direction& d,
                     const std::vector<PowerConstraint>& cs, const Tolerances& tol) {
  const ExpandedSystem sys = expand(tv, d);

  SolveReport report;
  if (cs.empty()) {
    const PerronResult pf =
        radius_or_throw(sys.mu_exp.asDiagonal() * sys.A_exp, tol);
    report.unbounded = pf.lambda_star == 0.0;
    report.gamma_star = report.unbounded
                            ? std::numeric_limits<double>::infinity()
                            : 1.0 / pf.lambda_star;
    if (!report.unbounded) report.sinr = sys.mu_exp * report.gamma_star;
    return report;
  }

  std::vector<double> values;
  values.reserve(cs.size());
  for (const auto& c : cs)
    values.push_back(tv_constrained_max_sinr(tv, d, c, tol).gamma_star);
  detail::pick_binding(values, tol, report);
  fill_power(sys, tv, report.gamma_star, tol, report);
  return report;
}

}  // namespace sinr
