#pragma once

// Test-only oracles, deliberately independent of the library's solution
// paths: cofactor determinants, Faddeev-LeVerrier characteristic
// polynomials with exhaustive real-root scans, and seeded instance
// generators.

#include <cmath>
#include <random>
#include <vector>

#include "sinr/linalg.hpp"
#include "sinr/model.hpp"
#include "sinr/types.hpp"

namespace testutil {

using sinr::ChannelModel;
using sinr::Direction;
using sinr::Index;
using sinr::Matrix;
using sinr::PowerConstraint;
using sinr::Vector;

inline bool close_rel(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs);
}

// ---- determinant by recursive cofactor expansion (O(n!)) ----

inline double cofactor_det(const Matrix& X) {
  const Index n = X.rows();
  if (n == 1) return X(0, 0);
  double det = 0.0;
  double sign = 1.0;
  for (Index j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (Index r = 1; r < n; ++r) {
      Index cc = 0;
      for (Index c = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = X(r, c);
    }
    det += sign * X(0, j) * cofactor_det(minor);
    sign = -sign;
  }
  return det;
}

// ---- characteristic polynomial (monic) via Faddeev-LeVerrier ----
// Returns a with p(x) = x^n + a[n-1] x^(n-1) + ... + a[0].

inline std::vector<double> char_poly(const Matrix& X) {
  const Index n = X.rows();
  std::vector<double> a(n, 0.0);
  Matrix N = X;
  a[n - 1] = -N.trace();
  for (Index k = 2; k <= n; ++k) {
    N = X * (N + a[n - k + 1] * Matrix::Identity(n, n));
    a[n - k] = -N.trace() / double(k);
  }
  return a;
}

inline double eval_monic(const std::vector<double>& a, double x) {
  double v = 1.0;
  for (Index k = static_cast<Index>(a.size()) - 1; k >= 0; --k) v = v * x + a[k];
  return v;
}

// Largest real root by downward scan and bisection; for a nonnegative matrix
// this is its spectral radius. `hi` must exceed every root.
inline double largest_real_root_scan(const std::vector<double>& a, double hi,
                                     int steps = 200000) {
  const double step = hi / steps;
  double x_prev = hi;
  for (int k = 1; k <= steps; ++k) {
    const double x = hi - k * step;
    if (eval_monic(a, x) <= 0.0) {
      double lo = x, up = x_prev;
      for (int it = 0; it < 200 && up - lo > 1e-15 * std::max(1.0, up); ++it) {
        const double mid = 0.5 * (lo + up);
        (eval_monic(a, mid) <= 0.0 ? lo : up) = mid;
      }
      return 0.5 * (lo + up);
    }
    x_prev = x;
  }
  return 0.0;  // no sign change: spectral radius 0 (nilpotent)
}

inline double spectral_radius_oracle(const Matrix& X) {
  const double hi = X.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  return largest_real_root_scan(char_poly(X), hi);
}

// ---- seeded instance generators ----

inline Matrix random_matrix(std::mt19937_64& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix X(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) X(i, j) = u(rng);
  return X;
}

// Log-uniform gain matrix: direct gains near 1, cross gains decades below.
inline ChannelModel random_channel(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> diag_exp(-0.3, 0.3);
  std::uniform_real_distribution<double> cross_exp(-2.0, 0.0);
  std::uniform_real_distribution<double> noise(0.05, 0.2);
  ChannelModel ch;
  ch.n = n;
  ch.G = Matrix(n, n);
  ch.sigma2 = Vector(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      ch.G(i, j) = std::pow(10.0, i == j ? diag_exp(rng) : cross_exp(rng));
    ch.sigma2(i) = noise(rng);
  }
  return ch;
}

inline Direction random_direction(std::mt19937_64& rng, int n, double lo = 0.2,
                                  double hi = 1.8) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector mu(n);
  for (int i = 0; i < n; ++i) mu(i) = u(rng);
  return Direction{mu};
}

inline PowerConstraint random_constraint(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> bound(0.5, 3.0);
  PowerConstraint c;
  while (c.users.empty())
    for (int i = 0; i < n; ++i)
      if (coin(rng)) c.users.push_back(i);
  c.bound = bound(rng);
  return c;
}

// ---- smallest positive root of u_Omega by dense sign scan + bisection ----
// u(gamma) = bound * det(F) - sum_{i in Omega} det(H^(i)), with
// F = I - gamma diag(mu) A and H^(i) = F with column i replaced by gamma*eta.

inline double u_omega(const ChannelModel& ch, const Direction& d,
                      const PowerConstraint& c, double gamma) {
  const Matrix A = sinr::normalize(ch).A;
  const Vector e = sinr::eta(ch, d);
  const Index n = ch.n;
  const Matrix F =
      Matrix::Identity(n, n) - gamma * Matrix(d.mu.asDiagonal() * A);
  double u = c.bound * sinr::determinant(F);
  for (int i : c.users) {
    Matrix H = F;
    H.col(i) = gamma * e;
    u -= sinr::determinant(H);
  }
  return u;
}

inline double smallest_positive_root_u(const ChannelModel& ch, const Direction& d,
                                       const PowerConstraint& c, double hi,
                                       int steps = 4000) {
  double g_prev = 0.0;  // u(0) = bound * det(I) > 0
  for (int k = 1; k <= steps; ++k) {
    const double g = hi * k / steps;
    const double u = u_omega(ch, d, c, g);
    if (u <= 0.0) {
      double lo = g_prev, up = g;
      for (int it = 0; it < 200 && up - lo > 1e-15 * std::max(1.0, up); ++it) {
        const double mid = 0.5 * (lo + up);
        (u_omega(ch, d, c, mid) > 0.0 ? lo : up) = mid;
      }
      return 0.5 * (lo + up);
    }
    g_prev = g;
  }
  return -1.0;  // no root found in (0, hi]
}

}  // namespace testutil
