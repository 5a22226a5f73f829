#include "sinr/linalg.hpp"

#include <cmath>

namespace sinr {

namespace {

void require_square_finite(const Eigen::Ref<const Matrix>& X, const char* who) {
  if (X.rows() != X.cols() || X.rows() < 1)
    throw ValidationError(std::string(who) + ": matrix must be square and nonempty");
  if (!X.allFinite())
    throw ValidationError(std::string(who) + ": entries must be finite");
}

// det(lambda I - X) for n <= 3, monic.
struct CharPoly {
  int degree = 0;
  double c2 = 0.0, c1 = 0.0, c0 = 0.0;  // lambda^3 - c2 l^2 + c1 l - c0 (n=3)

  static CharPoly of(const Eigen::Ref<const Matrix>& X) {
    CharPoly p;
    p.degree = static_cast<int>(X.rows());
    if (p.degree == 1) {
      p.c0 = X(0, 0);  // lambda - c0
    } else if (p.degree == 2) {
      p.c1 = X.trace();  // lambda^2 - c1 l + c0
      p.c0 = X(0, 0) * X(1, 1) - X(0, 1) * X(1, 0);
    } else {
      p.c2 = X.trace();
      p.c1 = X(0, 0) * X(1, 1) - X(0, 1) * X(1, 0) +
             X(0, 0) * X(2, 2) - X(0, 2) * X(2, 0) +
             X(1, 1) * X(2, 2) - X(1, 2) * X(2, 1);
      p.c0 = X(0, 0) * (X(1, 1) * X(2, 2) - X(1, 2) * X(2, 1)) -
             X(0, 1) * (X(1, 0) * X(2, 2) - X(1, 2) * X(2, 0)) +
             X(0, 2) * (X(1, 0) * X(2, 1) - X(1, 1) * X(2, 0));
    }
    return p;
  }

  double eval(double x) const {
    if (degree == 1) return x - c0;
    if (degree == 2) return (x - c1) * x + c0;
    return ((x - c2) * x + c1) * x - c0;
  }

  double deriv(double x) const {
    if (degree == 1) return 1.0;
    if (degree == 2) return 2.0 * x - c1;
    return (3.0 * x - 2.0 * c2) * x + c1;
  }
};

double bisect_root(const CharPoly& p, double lo, double hi) {
  // p(lo) <= 0 <= p(hi), p monotone increasing on [lo, hi]
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (p.eval(mid) < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {  // Newton polish, skipped near double roots
    const double d = p.deriv(x);
    if (d == 0.0) break;
    const double step = p.eval(x) / d;
    if (!std::isfinite(step) || std::abs(step) > 1e-6 * std::max(1.0, std::abs(x)))
      break;
    x -= step;
  }
  return x;
}

// Largest real root of the characteristic polynomial of a nonnegative matrix
// (= its spectral radius). Brackets over the monotone pieces delimited by the
// critical points, so clustered roots cannot be skipped.
double char_poly_radius(const Eigen::Ref<const Matrix>& X) {
  const CharPoly p = CharPoly::of(X);
  const double hi = X.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;  // > all roots
  if (p.degree == 1) return std::max(p.c0, 0.0);
  if (p.degree == 2) {
    // trace^2 - 4 det = (x11-x22)^2 + 4 x12 x21 >= 0 for nonnegative input
    const double disc = std::max(p.c1 * p.c1 - 4.0 * p.c0, 0.0);
    return std::max(0.5 * (p.c1 + std::sqrt(disc)), 0.0);
  }
  // cubic: p' = 3x^2 - 2 c2 x + c1
  const double dd = p.c2 * p.c2 - 3.0 * p.c1;
  if (dd > 0.0) {
    const double croot = std::sqrt(dd);
    const double c_hi = (p.c2 + croot) / 3.0;
    const double c_lo = (p.c2 - croot) / 3.0;
    if (p.eval(c_hi) < 0.0) return std::max(bisect_root(p, c_hi, hi), 0.0);
    if (p.eval(c_hi) == 0.0) return std::max(c_hi, 0.0);
    // no root beyond c_lo; the largest lives on the increasing piece below it
    return std::max(bisect_root(p, -hi, c_lo), 0.0);
  }
  // monotone cubic, single real root
  return std::max(bisect_root(p, -hi, hi), 0.0);
}

// Perron vector candidate from the null space of X - lambda I, n <= 3.
Vector null_vector(const Eigen::Ref<const Matrix>& X, double lambda) {
  const Index n = X.rows();
  if (n == 1) return Vector::Ones(1);
  Matrix B = X - lambda * Matrix::Identity(n, n);
  Vector v;
  if (n == 2) {
    const Vector a = (Vector(2) << B(0, 1), -B(0, 0)).finished();
    const Vector b = (Vector(2) << -B(1, 1), B(1, 0)).finished();
    v = a.norm() >= b.norm() ? a : b;
  } else {
    v = Vector::Zero(3);
    for (int r1 = 0; r1 < 3; ++r1)
      for (int r2 = r1 + 1; r2 < 3; ++r2) {
        const Eigen::Vector3d a = B.row(r1).transpose();
        const Eigen::Vector3d b = B.row(r2).transpose();
        const Eigen::Vector3d c = a.cross(b);
        if (c.norm() > v.norm()) v = c;
      }
  }
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if (v.norm() <= 1e-12 * scale) return Vector::Constant(n, 1.0 / double(n));
  if (v.sum() < 0.0) v = -v;
  v = v.cwiseMax(0.0);
  const double s = v.sum();
  return s > 0.0 ? Vector(v / s) : Vector::Constant(n, 1.0 / double(n));
}

}  // namespace

double determinant(const Eigen::Ref<const Matrix>& X) {
  require_square_finite(X, "determinant");
  return Eigen::PartialPivLU<Matrix>(X).determinant();
}

Vector solve_linear(const Eigen::Ref<const Matrix>& X,
                    const Eigen::Ref<const Vector>& b, const Tolerances& tol) {
  require_square_finite(X, "solve");
  if (b.size() != X.rows())
    throw ValidationError("solve: right-hand side length mismatch");
  const double xnorm = X.cwiseAbs().rowwise().sum().maxCoeff();
  Eigen::PartialPivLU<Matrix> lu(X);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (xnorm == 0.0 || min_pivot < tol.singular_pivot * xnorm)
    throw SingularMatrixError("solve: matrix is singular to working precision");
  return lu.solve(b);
}

namespace {

struct IterOutcome {
  double lambda = 0.0;
  Vector v;
  int sweeps = 0;
  bool ok = false;
};

// The spectral radius of a nonnegative matrix is zero exactly when its
// support digraph is acyclic (the matrix is permutation-similar to a strictly
// triangular one). Kahn-style elimination of zero-column vertices.
bool support_is_acyclic(const Eigen::Ref<const Matrix>& X) {
  const Index n = X.rows();
  std::vector<bool> removed(n, false);
  for (Index pass = 0; pass < n; ++pass) {
    Index victim = -1;
    for (Index j = 0; j < n && victim < 0; ++j) {
      if (removed[j]) continue;
      bool zero_column = true;
      for (Index i = 0; i < n && zero_column; ++i)
        if (!removed[i] && X(i, j) != 0.0) zero_column = false;
      if (zero_column) victim = j;
    }
    if (victim < 0) return false;  // every remaining vertex sits on a cycle
    removed[victim] = true;
  }
  return true;
}

// Null vector for the acyclic case: uniform over the (original) zero columns,
// which exist for any acyclic support; X v = 0 exactly.
Vector nilpotent_null_vector(const Eigen::Ref<const Matrix>& X) {
  const Index n = X.rows();
  Vector v = Vector::Zero(n);
  for (Index j = 0; j < n; ++j)
    if (X.col(j).maxCoeff() == 0.0) v(j) = 1.0;
  return v / v.sum();
}

// Power sweeps on X + shift*I with a Rayleigh-quotient estimate. The final
// eigenvalue is the Rayleigh quotient on X itself, so a large shift costs no
// precision. With stall_exit, a persistent 2-cycle in the estimates (equal-
// modulus eigenvalue pair that the shift cannot separate in useful time)
// aborts early instead of burning the whole sweep budget.
IterOutcome power_sweeps(const Eigen::Ref<const Matrix>& X, double shift,
                         bool stall_exit, const Tolerances& tol) {
  const Index n = X.rows();
  IterOutcome out;
  Vector v = Vector::Constant(n, 1.0 / double(n));
  double prev1 = 0.0, prev2 = 0.0;
  for (int sweep = 1; sweep <= tol.power_max_sweeps; ++sweep) {
    out.sweeps = sweep;
    const Vector w = X * v + shift * v;
    const double rayleigh = v.dot(w) / v.squaredNorm();  // estimate for X + shift I
    const double diff1 = std::abs(rayleigh - prev1);
    const double diff2 = std::abs(rayleigh - prev2);
    prev2 = prev1;
    prev1 = rayleigh;
    v = w / w.sum();  // w > 0 (positive diagonal), so v >= 0 with unit 1-norm
    const double scale = std::max(rayleigh, shift);
    if (sweep >= 2 && diff1 <= tol.power_rel * scale) {
      const double lam = std::max(v.dot(X * v) / v.squaredNorm(), 0.0);
      if ((X * v - lam * v).lpNorm<Eigen::Infinity>() <=
          tol.eigen_residual * std::max(1.0, lam)) {
        out.lambda = lam;
        out.v = v;
        out.ok = true;
        return out;
      }
    }
    if (stall_exit && sweep >= 16 && diff2 <= tol.power_rel * scale &&
        diff1 > 1e3 * tol.power_rel * scale) {
      out.lambda = std::max(prev1 - shift, 0.0);
      out.v = v;
      return out;  // 2-cycle; hand over to a fallback
    }
  }
  out.lambda = std::max(prev1 - shift, 0.0);
  out.v = v;
  return out;
}

}  // namespace

PerronResult spectral_radius(const Eigen::Ref<const Matrix>& X,
                             const Tolerances& tol) {
  require_square_finite(X, "spectral_radius");
  if ((X.array() < 0.0).any())
    throw ValidationError("spectral_radius: matrix must be nonnegative");

  const Index n = X.rows();
  PerronResult res;
  const double xmax = X.maxCoeff();
  if (xmax == 0.0) {
    res.lambda_star = 0.0;
    res.vector = Vector::Constant(n, 1.0 / double(n));
    res.converged = true;
    return res;
  }
  if (support_is_acyclic(X)) {
    // nilpotent up to permutation; iteration would stall at the shift level
    res.lambda_star = 0.0;
    res.vector = nilpotent_null_vector(X);
    res.converged = true;
    return res;
  }

  const IterOutcome tiny = power_sweeps(X, tol.power_shift * xmax, true, tol);
  res.iterations = tiny.sweeps;
  if (tiny.ok) {
    res.lambda_star = tiny.lambda;
    res.vector = tiny.v;
    res.converged = true;
    return res;
  }

  if (n <= 3) {
    // characteristic-polynomial bracketing, exact for periodic structure
    res.lambda_star = char_poly_radius(X);
    res.vector = null_vector(X, res.lambda_star);
    const double resid =
        (X * res.vector - res.lambda_star * res.vector).lpNorm<Eigen::Infinity>();
    res.converged = resid <= tol.eigen_residual * std::max(1.0, res.lambda_star);
    return res;
  }

  // A shift on the scale of the entries separates equal-modulus pairs at a
  // usable rate; the Rayleigh quotient on X keeps full relative precision.
  const IterOutcome big = power_sweeps(X, xmax, false, tol);
  res.iterations += big.sweeps;
  if (big.ok) {
    res.lambda_star = big.lambda;
    res.vector = big.v;
    res.converged = true;
    return res;
  }
  res.lambda_star = big.lambda;
  res.vector = big.v.size() > 0 ? big.v : Vector::Constant(n, 1.0 / double(n));
  res.converged = false;
  return res;
}

}  // namespace sinr
