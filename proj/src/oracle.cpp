#include "sinr/oracle.hpp"

#include <cmath>
#include <limits>

namespace sinr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBracketCap = 1152921504606846976.0;  // 2^60

// Balanced equality system plus linear constraint functionals: constraint k
// holds when weights[k] . p <= bounds[k]. Covers both the static case
// (indicator weights) and the expanded average-power case (rho weights).
struct BalancedSystem {
  Matrix M;  // diag(mu) A, possibly expanded
  Vector eta;
  std::vector<Vector> weights;
  std::vector<double> bounds;
};

BalancedSystem make_system(const ChannelModel& ch, const Direction& d,
                           const std::vector<PowerConstraint>& cs) {
  ch.validate();
  d.validate();
  if (d.mu.size() != ch.n) throw ValidationError("mu: length must match channel");
  BalancedSystem s;
  s.M = d.mu.asDiagonal() * normalize(ch).A;
  s.eta = eta(ch, d);
  for (const auto& c : cs) {
    c.validate(ch.n);
    Vector w = Vector::Zero(ch.n);
    for (int u : c.users) w(u) = 1.0;
    s.weights.push_back(std::move(w));
    s.bounds.push_back(c.bound);
  }
  return s;
}

BalancedSystem make_system(const ExpandedSystem& sys,
                           const std::vector<PowerConstraint>& cs) {
  BalancedSystem s;
  s.M = sys.mu_exp.asDiagonal() * sys.A_exp;
  s.eta = sys.eta_exp;
  for (const auto& c : cs) {
    c.validate(sys.n);
    Vector w = Vector::Zero(sys.l * sys.n);
    for (int i = 0; i < sys.l; ++i)
      for (int u : c.users) w(u + i * sys.n) = sys.rho(i);
    s.weights.push_back(std::move(w));
    s.bounds.push_back(c.bound);
  }
  return s;
}

FeasibilityVerdict check_core(const BalancedSystem& s, double gamma,
                              const Tolerances& tol) {
  if (!(gamma >= 0.0)) throw ValidationError("gamma: must be >= 0");
  FeasibilityVerdict verdict;
  const Index n = s.M.rows();

  Vector p;
  if (gamma == 0.0) {
    p = Vector::Zero(n);
  } else {
    // Plain LU with a residual acceptance test rather than a pivot-size
    // heuristic: near the feasibility boundary gamma grows until F is badly
    // scaled yet perfectly regular, and only genuinely singular systems may
    // be reported infeasible.
    const Matrix F = Matrix::Identity(n, n) - gamma * s.M;
    const Vector rhs = gamma * s.eta;
    p = Eigen::PartialPivLU<Matrix>(F).solve(rhs);
    const double residual_gate =
        1e-9 * (F.cwiseAbs().rowwise().sum().maxCoeff() *
                    p.lpNorm<Eigen::Infinity>() +
                rhs.lpNorm<Eigen::Infinity>());
    if (!p.allFinite() ||
        (F * p - rhs).lpNorm<Eigen::Infinity>() > residual_gate) {
      verdict.violated.push_back({"singular system", -kInf});
      return verdict;
    }
  }

  const double pmin = p.minCoeff();
  if (pmin < -tol.feas_slack) verdict.violated.push_back({"p>=0", pmin});
  for (std::size_t k = 0; k < s.weights.size(); ++k) {
    const double slack = s.bounds[k] - s.weights[k].dot(p);
    if (slack < -tol.feas_slack * s.bounds[k])
      verdict.violated.push_back({"c" + std::to_string(k + 1), slack});
  }
  if (verdict.violated.empty()) {
    verdict.feasible = true;
    verdict.witness_power = p.cwiseMax(0.0);
  }
  return verdict;
}

double bisect_core(const BalancedSystem& s, const Tolerances& tol) {
  if ((s.eta.array() <= 0.0).any())
    throw ValidationError("mu: bisection oracle requires strictly positive weights");

  // Exact-sum predicate: the reporting slack of check_feasible would bias the
  // located boundary by feas_slack relative.
  Tolerances exact = tol;
  exact.feas_slack = 0.0;
  auto feasible = [&](double g) { return check_core(s, g, exact).feasible; };

  double lo = 0.0, hi = 1.0;
  while (feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kBracketCap) return kInf;  // unbounded within the bracket cap
  }
  while (hi - lo > tol.bisect_abs * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FeasibilityVerdict check_feasible(const ChannelModel& ch, const Direction& d,
                                  const std::vector<PowerConstraint>& cs,
                                  double gamma, const Tolerances& tol) {
  return check_core(make_system(ch, d, cs), gamma, tol);
}

FeasibilityVerdict check_feasible(const ExpandedSystem& sys,
                                  const std::vector<PowerConstraint>& cs,
                                  double gamma, const Tolerances& tol) {
  return check_core(make_system(sys, cs), gamma, tol);
}

double bisect_max_sinr(const ChannelModel& ch, const Direction& d,
                       const std::vector<PowerConstraint>& cs,
                       const Tolerances& tol) {
  return bisect_core(make_system(ch, d, cs), tol);
}

double bisect_max_sinr(const ExpandedSystem& sys,
                       const std::vector<PowerConstraint>& cs,
                       const Tolerances& tol) {
  return bisect_core(make_system(sys, cs), tol);
}

GridSearchResult grid_search_max_sinr(const ChannelModel& ch,
                                      const std::vector<PowerConstraint>& cs,
                                      const Direction& d, int resolution,
                                      const Tolerances& tol) {
  ch.validate();
  d.validate();
  if (ch.n > 3) throw ValidationError("grid search: only supported for n <= 3");
  if (d.mu.size() != ch.n) throw ValidationError("mu: length must match channel");
  if (!d.strictly_positive())
    throw ValidationError("mu: grid search requires strictly positive weights");
  if (resolution < 1) throw ValidationError("grid search: resolution must be >= 1");

  // Box bound per user from the constraints that contain it.
  Vector box(ch.n);
  for (int i = 0; i < ch.n; ++i) {
    double b = kInf;
    for (const auto& c : cs) {
      c.validate(ch.n);
      for (int u : c.users)
        if (u == i) b = std::min(b, c.bound);
    }
    if (!std::isfinite(b))
      throw ValidationError("grid search: user " + std::to_string(i + 1) +
                            " appears in no constraint, power box underivable");
    box(i) = b;
  }

  // min_i gamma_i / mu_i straight from the physical model.
  auto objective = [&](const Vector& p) {
    double best = kInf;
    for (int i = 0; i < ch.n; ++i) {
      double interference = ch.sigma2(i);
      for (int j = 0; j < ch.n; ++j)
        if (j != i) interference += ch.G(i, j) * p(j);
      best = std::min(best, ch.G(i, i) * p(i) / (interference * d.mu(i)));
    }
    return best;
  };

  double best = 0.0;
  std::vector<int> idx(ch.n, 0);
  Vector p = Vector::Zero(ch.n);
  while (true) {
    for (int i = 0; i < ch.n; ++i) p(i) = box(i) * idx[i] / resolution;
    bool ok = true;
    for (const auto& c : cs) {
      double sum = 0.0;
      for (int u : c.users) sum += p(u);
      if (sum > c.bound * (1.0 + 1e-12)) {
        ok = false;
        break;
      }
    }
    if (ok) best = std::max(best, objective(p));

    int axis = 0;
    while (axis < ch.n && ++idx[axis] > resolution) idx[axis++] = 0;
    if (axis == ch.n) break;
  }

  GridSearchResult result;
  result.gamma_star = best;
  result.bisect_reference = bisect_max_sinr(ch, d, cs, tol);
  result.too_coarse =
      std::abs(result.gamma_star - result.bisect_reference) >
      tol.grid_coarse_rel * result.bisect_reference;
  return result;
}

}  // namespace sinr
