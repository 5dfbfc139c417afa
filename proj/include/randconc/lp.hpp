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

#ifndef RANDCONC_LP_HPP
#define RANDCONC_LP_HPP

#include <vector>

#include "randconc/rational.hpp"

namespace randconc::lp {

/// Outcome of asking whether `target` is a convex combination of the given
/// points (all points and the target are probability vectors over the same
/// coordinates).
struct HullResult {
  bool member = false;
  /// One weight per point, nonnegative, summing to one, when member.
  std::vector<Rational> weights;
  /// Farkas certificate when not a member: separator . target > 0 and
  /// separator . point <= 0 for every point.
  std::vector<Rational> separator;
};

/// Decides membership with a phase-one simplex over exact rationals (Bland's
/// rule, so it always terminates). Because every point and the target sum
/// to one, the convexity row is implied by the coordinate rows and is not
/// added explicitly. `points` is indexed [point][coordinate].
HullResult convex_hull_membership(const std::vector<std::vector<Rational>>& points,
                                  const std::vector<Rational>& target);

}  // namespace randconc::lp

#endif  // RANDCONC_LP_HPP
