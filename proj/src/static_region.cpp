#include "sinr/static_region.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sinr/linalg.hpp"

namespace sinr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PerronResult radius_or_throw(const Matrix& M, const Tolerances& tol) {
  PerronResult pf = spectral_radius(M, tol);
  if (!pf.converged)
    throw ConvergenceError("spectral radius did not converge after " +
                           std::to_string(pf.iterations) + " sweeps");
  return pf;
}

// Achieved SINRs from the raw gains, gamma_i = g_ii p_i / (sigma_i^2 + sum g_ij p_j).
Vector achieved_sinr(const ChannelModel& ch, const Vector& p) {
  Vector out(ch.n);
  for (int i = 0; i < ch.n; ++i) {
    double interference = ch.sigma2(i);
    for (int j = 0; j < ch.n; ++j)
      if (j != i) interference += ch.G(i, j) * p(j);
    out(i) = ch.G(i, i) * p(i) / interference;
  }
  return out;
}

void require_strictly_positive(const Direction& d) {
  if (!d.strictly_positive())
    throw ValidationError(
        "mu: solver requires strictly positive weights; for axis points solve "
        "the reduced system restricted to the support of mu");
}

}  // namespace

namespace detail {

void pick_binding(const std::vector<double>& values, const Tolerances& tol,
                  SolveReport& report) {
  int arg = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] < values[arg]) arg = static_cast<int>(k);
  report.gamma_star = values[arg];  // the exact minimum
  report.ties.clear();
  for (std::size_t k = 0; k < values.size(); ++k)
    if (values[k] - values[arg] <= tol.tie_rel * values[arg])
      report.ties.push_back(static_cast<int>(k));
  // among ties the first in input order is reported as binding
  report.binding_index = report.ties.front();
  report.binding = "c" + std::to_string(report.binding_index + 1);
}

}  // namespace detail

double unconstrained_max_sinr(const NormalizedGain& A, const Direction& d,
                              const Tolerances& tol) {
  A.validate();
  d.validate();
  if (d.mu.size() != A.A.rows())
    throw ValidationError("mu: length must match the gain matrix");
  const Matrix M = d.mu.asDiagonal() * A.A;
  const PerronResult pf = radius_or_throw(M, tol);
  return pf.lambda_star == 0.0 ? kInf : 1.0 / pf.lambda_star;
}

double constrained_max_sinr(const ChannelModel& ch, const Direction& d,
                            const PowerConstraint& c, const Tolerances& tol) {
  ch.validate();
  d.validate();
  c.validate(ch.n);
  if (d.mu.size() != ch.n) throw ValidationError("mu: length must match channel");
  require_strictly_positive(d);
  const NormalizedGain A = normalize(ch);
  const Vector e = eta(ch, d);
  const Matrix M =
      psi((d.mu.asDiagonal() * A.A).eval(), (e / c.bound).eval(), c.users);
  const PerronResult pf = radius_or_throw(M, tol);
  return 1.0 / pf.lambda_star;  // > 0: the bumped columns put eta_i/bound on the diagonal
}

Vector recover_power(const ChannelModel& ch, const Direction& d, double gamma,
                     const Tolerances& tol) {
  ch.validate();
  d.validate();
  if (d.mu.size() != ch.n) throw ValidationError("mu: length must match channel");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw ValidationError("gamma: must be finite and >= 0");
  const NormalizedGain A = normalize(ch);
  const Matrix M = d.mu.asDiagonal() * A.A;
  const PerronResult pf = radius_or_throw(M, tol);
  if (pf.lambda_star > 0.0 && gamma > (1.0 - tol.gamma_guard) / pf.lambda_star)
    throw SingularMatrixError(
        "recover_power: gamma is at or beyond the unconstrained spectral bound; "
        "the balanced system is singular there");
  const Matrix F = Matrix::Identity(ch.n, ch.n) - gamma * M;
  Vector p = solve_linear(F, (gamma * eta(ch, d)).eval(), tol);
  if (p.minCoeff() < -tol.feas_slack)
    throw SingularMatrixError("recover_power: negative power recovered");
  return p.cwiseMax(0.0);
}

SolveReport multi_constrained_max_sinr(const ChannelModel& ch, const Direction& d,
                                       const std::vector<PowerConstraint>& cs,
                                       const Tolerances& tol) {
  ch.validate();
  d.validate();
  if (d.mu.size() != ch.n) throw ValidationError("mu: length must match channel");

  SolveReport report;
  if (cs.empty()) {
    // Unconstrained bound; the supremum is approached with unbounded powers,
    // so no finite witness power is reported.
    const double g = unconstrained_max_sinr(normalize(ch), d, tol);
    report.gamma_star = g;
    report.unbounded = std::isinf(g);
    if (!report.unbounded) report.sinr = d.mu * g;
    return report;
  }

  require_strictly_positive(d);
  std::vector<double> values;
  values.reserve(cs.size());
  for (const auto& c : cs) values.push_back(constrained_max_sinr(ch, d, c, tol));
  detail::pick_binding(values, tol, report);
  report.power = recover_power(ch, d, report.gamma_star, tol);
  report.sinr = achieved_sinr(ch, report.power);
  return report;
}

std::vector<BoundaryPoint> sweep_boundary(const ChannelModel& ch,
                                          const std::vector<PowerConstraint>& cs,
                                          const std::vector<Direction>& dirs,
                                          const Tolerances& tol) {
  ch.validate();
  std::vector<BoundaryPoint> points;
  points.reserve(dirs.size());
  for (const auto& d : dirs) {
    BoundaryPoint pt;
    pt.mu = d;
    try {
      const SolveReport rep = multi_constrained_max_sinr(ch, d, cs, tol);
      pt.gamma_star = rep.gamma_star;
      pt.sinr = d.mu * rep.gamma_star;
      pt.rate = (pt.sinr.array() + 1.0).log() / std::log(2.0);
      pt.binding = rep.binding;
    } catch (const Error& e) {
      pt.error = e.what();
    }
    points.push_back(std::move(pt));
  }
  return points;
}

std::vector<BoundaryPoint> sweep_boundary(const ChannelModel& ch,
                                          const std::vector<PowerConstraint>& cs,
                                          int count, const Tolerances& tol) {
  ch.validate();
  if (ch.n != 2)
    throw ValidationError("sweep: angle sampling needs a 2-user channel; pass "
                          "explicit directions instead");
  if (count < 2) throw ValidationError("sweep: need at least 2 points");
  std::vector<Direction> dirs;
  std::vector<double> thetas;
  dirs.reserve(count);
  for (int k = 1; k <= count; ++k) {
    const double theta = (std::numbers::pi / 2.0) * k / (count + 1);
    thetas.push_back(theta);
    dirs.push_back(Direction{(Vector(2) << std::cos(theta), std::sin(theta)).finished()});
  }
  auto points = sweep_boundary(ch, cs, dirs, tol);
  for (std::size_t i = 0; i < points.size(); ++i) points[i].theta = thetas[i];
  return points;
}

}  // namespace sinr
