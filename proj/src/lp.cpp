/*
 * Copyright (c) 2026, The randconc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "randconc/lp.hpp"

#include <optional>

#include "randconc/error.hpp"

namespace randconc::lp {

namespace {

// Dense phase-one tableau for  A x + s = d,  x, s >= 0, minimizing sum(s).
// Columns [0, n) are the point weights, [n, n + m) the artificials.
class PhaseOne {
 public:
  PhaseOne(const std::vector<std::vector<Rational>>& points, const std::vector<Rational>& target)
      : m_(target.size()), n_(points.size()), cols_(n_ + m_) {
    rows_.assign(m_, std::vector<Rational>(cols_));
    rhs_ = target;
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = points[j][i];
      rows_[i][n_ + i] = Rational(1);
      basis_[i] = n_ + i;
    }
    // Reduced costs c_j - c_B B^-1 A_j with c = 1 on artificials.
    reduced_.assign(cols_, Rational());
    objective_ = Rational();
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) reduced_[j] -= rows_[i][j];
      objective_ += rhs_[i];
    }
  }

  void solve() {
    while (auto entering = choose_entering()) {
      auto leaving = choose_leaving(*entering);
      // Phase one is bounded below by zero, so a ratio row always exists.
      if (!leaving) throw InvariantViolation("phase-one simplex reported unbounded");
      pivot(*leaving, *entering);
    }
  }

  bool feasible() const { return objective_.is_zero(); }

  std::vector<Rational> weights() const {
    std::vector<Rational> w(n_);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) w[basis_[i]] = rhs_[i];
    return w;
  }

  // Dual prices of the coordinate rows: y_i = c_art - reduced(art_i).
  std::vector<Rational> duals() const {
    std::vector<Rational> y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = Rational(1) - reduced_[n_ + i];
    return y;
  }

 private:
  std::optional<std::size_t> choose_entering() const {
    for (std::size_t j = 0; j < cols_; ++j)
      if (reduced_[j].sign() < 0) return j;
    return std::nullopt;
  }

  std::optional<std::size_t> choose_leaving(std::size_t col) const {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (std::size_t i = 0; i < m_; ++i) {
      if (rows_[i][col].sign() <= 0) continue;
      Rational ratio = rhs_[i] / rows_[i][col];
      if (!best || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational piv = rows_[r][c];
    for (auto& x : rows_[r]) x /= piv;
    rhs_[r] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || rows_[i][c].is_zero()) continue;
      const Rational factor = rows_[i][c];
      for (std::size_t j = 0; j < cols_; ++j)
        if (!rows_[r][j].is_zero()) rows_[i][j] -= factor * rows_[r][j];
      rhs_[i] -= factor * rhs_[r];
    }
    if (!reduced_[c].is_zero()) {
      const Rational factor = reduced_[c];
      for (std::size_t j = 0; j < cols_; ++j)
        if (!rows_[r][j].is_zero()) reduced_[j] -= factor * rows_[r][j];
      objective_ += factor * rhs_[r];
    }
    basis_[r] = c;
  }

  std::size_t m_, n_, cols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<Rational> reduced_;
  std::vector<std::size_t> basis_;
  Rational objective_;
};

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

HullResult convex_hull_membership(const std::vector<std::vector<Rational>>& points,
                                  const std::vector<Rational>& target) {
  if (points.empty()) throw InvalidArgument("hull membership needs at least one point");
  for (const auto& p : points)
    if (p.size() != target.size()) throw InvalidArgument("hull membership: dimension mismatch");
  for (const auto& t : target)
    if (t.sign() < 0) throw InvalidArgument("hull membership: target must be nonnegative");

  PhaseOne lp(points, target);
  lp.solve();

  HullResult result;
  if (lp.feasible()) {
    result.member = true;
    result.weights = lp.weights();
    std::vector<Rational> mix(target.size());
    Rational total;
    for (std::size_t j = 0; j < points.size(); ++j) {
      total += result.weights[j];
      for (std::size_t i = 0; i < target.size(); ++i) mix[i] += result.weights[j] * points[j][i];
    }
    if (mix != target || total != Rational(1))
      throw InvariantViolation("hull membership: weights do not reproduce the target");
    return result;
  }
  result.separator = lp.duals();
  if (dot(result.separator, target).sign() <= 0)
    throw InvariantViolation("hull membership: certificate does not separate the target");
  for (const auto& p : points)
    if (dot(result.separator, p).sign() > 0)
      throw InvariantViolation("hull membership: certificate does not bound a point");
  return result;
}

}  // namespace randconc::lp
