#include "sinr/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace sinr {

namespace {

std::string dim_string(Index rows, Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

}  // namespace

void ChannelModel::validate() const {
  if (n < 1) throw ValidationError("gains: user count must be >= 1");
  if (G.rows() != n || G.cols() != n)
    throw ValidationError("gains: expected " + dim_string(n, n) + " matrix, got " +
                          dim_string(G.rows(), G.cols()));
  if (!G.allFinite()) throw ValidationError("gains: entries must be finite");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (G(i, j) < 0.0)
        throw ValidationError("gains[" + std::to_string(i) + "][" + std::to_string(j) +
                              "]: link gain must be >= 0");
    }
    if (G(i, i) <= 0.0)
      throw ValidationError("gains[" + std::to_string(i) + "][" + std::to_string(i) +
                            "]: diagonal gain must be > 0");
  }
  if (sigma2.size() != n)
    throw ValidationError("noise: expected length " + std::to_string(n) + ", got " +
                          std::to_string(sigma2.size()));
  for (int i = 0; i < n; ++i) {
    if (!(sigma2(i) > 0.0) || !std::isfinite(sigma2(i)))
      throw ValidationError("noise[" + std::to_string(i) +
                            "]: noise variance must be > 0");
  }
}

void NormalizedGain::validate() const {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw ValidationError("normalized gain: matrix must be square and nonempty");
  if (!A.allFinite()) throw ValidationError("normalized gain: entries must be finite");
  if ((A.array() < 0.0).any())
    throw ValidationError("normalized gain: entries must be >= 0");
  if (A.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw ValidationError("normalized gain: diagonal must be zero");
}

void Direction::validate() const {
  if (mu.size() < 1) throw ValidationError("mu: must be nonempty");
  if (!mu.allFinite()) throw ValidationError("mu: entries must be finite");
  if ((mu.array() < 0.0).any()) throw ValidationError("mu: entries must be >= 0");
  if (mu.maxCoeff() <= 0.0)
    throw ValidationError("mu: at least one entry must be > 0");
}

bool Direction::strictly_positive() const {
  return mu.size() > 0 && mu.minCoeff() > 0.0;
}

Vector Direction::normalized() const {
  validate();
  return mu / mu.norm();
}

void PowerConstraint::validate(int n) const {
  if (users.empty()) throw ValidationError("constraint users: must be nonempty");
  std::set<int> seen;
  for (std::size_t k = 0; k < users.size(); ++k) {
    const int u = users[k];
    if (u < 0 || u >= n)
      throw ValidationError("constraint users[" + std::to_string(k) + "]: index " +
                            std::to_string(u + 1) + " out of range 1.." +
                            std::to_string(n));
    if (!seen.insert(u).second)
      throw ValidationError("constraint users[" + std::to_string(k) + "]: duplicate index " +
                            std::to_string(u + 1));
  }
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw ValidationError("constraint bound: must be > 0");
}

std::string PowerConstraint::label() const {
  IndexSet sorted = users;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k) os << ",";
    os << sorted[k] + 1;
  }
  os << "}";
  return os.str();
}

void TimeVaryingChannel::validate() const {
  if (states.empty()) throw ValidationError("states: must contain at least one state");
  const int n = states.front().n;
  const Index m = states.front().sigma2.size();
  for (std::size_t i = 0; i < states.size(); ++i) {
    try {
      states[i].validate();
    } catch (const ValidationError& e) {
      throw ValidationError("states[" + std::to_string(i) + "]." + e.what());
    }
    if (states[i].n != n || states[i].sigma2.size() != m)
      throw ValidationError("states[" + std::to_string(i) +
                            "].gains: dimension mismatch (expected " +
                            dim_string(n, n) + ")");
  }
  if (rho.size() != static_cast<Index>(states.size()))
    throw ValidationError("states: prob entries must match state count");
  for (Index i = 0; i < rho.size(); ++i) {
    if (!(rho(i) > 0.0) || !std::isfinite(rho(i)))
      throw ValidationError("states[" + std::to_string(i) + "].prob: must be > 0");
  }
  if (std::abs(rho.sum() - 1.0) > 1e-12)
    throw ValidationError("states: probabilities must sum to 1 (got " +
                          std::to_string(rho.sum()) + ")");
}

NormalizedGain normalize(const ChannelModel& ch) {
  ch.validate();
  NormalizedGain out;
  out.A = Matrix::Zero(ch.n, ch.n);
  for (int i = 0; i < ch.n; ++i)
    for (int j = 0; j < ch.n; ++j)
      if (i != j) out.A(i, j) = ch.G(i, j) / ch.G(i, i);
  return out;
}

Vector eta(const ChannelModel& ch, const Direction& d) {
  ch.validate();
  d.validate();
  if (d.mu.size() != ch.n)
    throw ValidationError("mu: expected length " + std::to_string(ch.n) + ", got " +
                          std::to_string(d.mu.size()));
  return d.mu.array() * ch.sigma2.array() / ch.G.diagonal().array();
}

}  // namespace sinr
