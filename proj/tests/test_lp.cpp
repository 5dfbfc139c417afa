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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "randconc/error.hpp"
#include "randconc/lp.hpp"

using namespace randconc;
using lp::convex_hull_membership;

namespace {

using Vec = std::vector<Rational>;

Rational dot(const Vec& a, const Vec& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Checks the certificate the way a reader would, independently of the solver.
void check_result(const std::vector<Vec>& points, const Vec& target, bool expect_member) {
  auto r = convex_hull_membership(points, target);
  REQUIRE(r.member == expect_member);
  if (r.member) {
    Vec mix(target.size());
    Rational total;
    for (std::size_t j = 0; j < points.size(); ++j) {
      CHECK(r.weights[j].sign() >= 0);
      total += r.weights[j];
      for (std::size_t i = 0; i < target.size(); ++i) mix[i] += r.weights[j] * points[j][i];
    }
    CHECK(total == Rational(1));
    CHECK(mix == target);
  } else {
    CHECK(dot(r.separator, target) > Rational(0));
    for (const auto& p : points) CHECK(dot(r.separator, p) <= Rational(0));
  }
}

}  // namespace

TEST_CASE("vertices and midpoints are members") {
  std::vector<Vec> pts = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  check_result(pts, {Rational(1), Rational(0)}, true);
  check_result(pts, {Rational(1, 2), Rational(1, 2)}, true);
  check_result(pts, {Rational(1, 3), Rational(2, 3)}, true);
}

TEST_CASE("points outside the hull get a separator") {
  std::vector<Vec> pts = {{Rational(1, 2), Rational(1, 2), Rational(0)}, {Rational(1), Rational(0), Rational(0)}};
  check_result(pts, {Rational(0), Rational(1), Rational(0)}, false);
  check_result(pts, {Rational(0), Rational(0), Rational(1)}, false);
  check_result(pts, {Rational(3, 4), Rational(1, 4), Rational(0)}, true);
}

TEST_CASE("duplicates and degenerate hulls") {
  Vec p = {Rational(1, 3), Rational(1, 3), Rational(1, 3)};
  check_result({p, p, p}, p, true);
  check_result({p}, {Rational(1, 3), Rational(2, 3), Rational(0)}, false);
  std::vector<Vec> square = {{Rational(1), Rational(0), Rational(0), Rational(0)},
                             {Rational(0), Rational(1), Rational(0), Rational(0)},
                             {Rational(0), Rational(0), Rational(1), Rational(0)},
                             {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}};
  check_result(square, {Rational(1, 8), Rational(1, 8), Rational(5, 8), Rational(1, 8)}, true);
  check_result(square, {Rational(0), Rational(0), Rational(1, 2), Rational(1, 2)}, false);
}

TEST_CASE("bad input") {
  CHECK_THROWS_AS(convex_hull_membership({}, {Rational(1)}), InvalidArgument);
  CHECK_THROWS_AS(convex_hull_membership({{Rational(1)}}, {Rational(1), Rational(0)}), InvalidArgument);
}
