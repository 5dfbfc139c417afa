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

#include "randconc/coupling.hpp"
#include "randconc/error.hpp"
#include "randconc/models.hpp"

using namespace randconc;
using C = Coupled<int, int>;

namespace {

Predicate<int, int> eq() { return {"eq", [](const int& a, const int& b) { return a == b; }}; }
Predicate<int, int> le() { return {"le", [](const int& a, const int& b) { return a <= b; }}; }
Rational id(const int& x) { return Rational(x); }

}  // namespace

TEST_CASE("ret") {
  C c = couple_ret(3, 3, eq());
  CHECK(check_witness(c.goal, c.witness).pass);
  CHECK_THROWS_AS(couple_ret(3, 4, eq()), CouplingRuleError);
}

TEST_CASE("pchoice and bind") {
  C c = couple_pchoice(couple_ret(1, 1, eq()), Rational(1, 4), couple_ret(0, 0, eq()));
  CHECK(check_witness(c.goal, c.witness).pass);
  CHECK_THROWS_AS(couple_pchoice(couple_ret(1, 1, eq()), Rational(1, 4), couple_ret(0, 1, le())), CouplingRuleError);
  std::function<IndexedValuation<int>(const int&)> f = [](const int& x) {
    return pchoice(ret(x + 1), Rational(1, 2), ret(x));
  };
  std::function<ProcessSet<int>(const int&)> g = [](const int& y) {
    return ProcessSet<int>{pchoice(ret(y + 1), Rational(1, 2), ret(y)), ret(y + 5)};
  };
  std::function<C(const int&, const int&)> k = [&](const int& x, const int& y) {
    return couple_equiv(couple_pchoice(couple_ret(x + 1, y + 1, eq()), Rational(1, 2), couple_ret(x, y, eq())), f(x),
                        g(y));
  };
  C b = couple_bind<int, int, int, int>(c, f, g, k, eq());
  CHECK(check_witness(b.goal, b.witness).pass);
  auto s = sandwich_from_coupling<int, int>(b, id, id);
  CHECK(s.mid == Rational(3, 4));
  CHECK(s.lo <= s.mid);
  CHECK(s.mid <= s.hi);
  std::function<C(const int&, const int&)> wrong = [](const int& x, const int& y) {
    return couple_pchoice(couple_ret(x + 1, y + 1, le()), Rational(1, 2), couple_ret(x, y, le()));
  };
  CHECK_THROWS_AS((couple_bind<int, int, int, int>(c, f, g, wrong, eq())), CouplingRuleError);
}

TEST_CASE("equiv and conseq") {
  C c = couple_ret(2, 2, eq());
  C e = couple_equiv(c, ret(2), ProcessSet<int>{ret(2), ret(7)});
  CHECK(check_witness(e.goal, e.witness).pass);
  CHECK_THROWS_AS(couple_equiv(c, ret(3), ProcessSet<int>{ret(2)}), CouplingRuleError);
  CHECK_THROWS_AS(couple_equiv(c, ret(2), ProcessSet<int>{ret(7)}), CouplingRuleError);
  C w = couple_conseq(c, le());
  CHECK(w.goal.predicate.name == "le");
  CHECK(check_witness(w.goal, w.witness).pass);
  Predicate<int, int> lt{"lt", [](const int& a, const int& b) { return a < b; }};
  CHECK_THROWS_AS(couple_conseq(c, lt), CouplingRuleError);
}

TEST_CASE("each witness clause") {
  C c = couple_pchoice(couple_ret(1, 1, eq()), Rational(1, 2), couple_ret(0, 0, eq()));
  auto bad_joint = c.witness;
  bad_joint.joint = pchoice(ret(std::pair(1, 1)), Rational(1, 3), ret(std::pair(0, 0)));
  CHECK(check_witness(c.goal, bad_joint).clause == CouplingClause::kLeftMarginal);
  auto bad_pick = c.witness;
  bad_pick.rhs_pick = pchoice(ret(1), Rational(1, 3), ret(0));
  CHECK(check_witness(c.goal, bad_pick).clause == CouplingClause::kRightMarginal);
  auto bad_pred = c.witness;
  bad_pred.joint = pchoice(ret(std::pair(1, 0)), Rational(1, 2), ret(std::pair(0, 1)));
  CHECK(check_witness(c.goal, bad_pred).clause == CouplingClause::kPredicate);
  auto outside = c.witness;
  outside.joint = pchoice(ret(std::pair(1, 1)), Rational(1, 2), ret(std::pair(0, 1)));
  outside.rhs_pick = ret(1);
  auto loose = c.goal;
  loose.predicate = le();
  CHECK(check_witness(loose, outside).clause == CouplingClause::kPickContained);
}

TEST_CASE("trivial coupling and sandwich rejection") {
  auto lhs = pchoice(ret(0), Rational(1, 2), ret(4));
  ProcessSet<int> rhs{ret(2), ret(3)};
  C t = couple_trivial(lhs, rhs);
  CHECK(check_witness(t.goal, t.witness).pass);
  // The product coupling does not certify equal values.
  CHECK_THROWS_AS((sandwich_from_coupling<int, int>(t, id, id)), CouplingRuleError);
  auto s = sandwich_from_coupling<int, int>(t, [](const int&) { return Rational(1); },
                                            [](const int&) { return Rational(1); });
  CHECK(s.lo == Rational(1));
  CHECK(s.hi == Rational(1));
}

TEST_CASE("counter coupling and mutations") {
  for (std::int64_t k = 0; k <= 4; ++k) {
    auto c = models::counter_coupling(k, 4);
    CHECK(check_witness(c.goal, c.witness).pass);
    for (auto m : {models::WitnessMutation::kMassPerturbation, models::WitnessMutation::kPairDeletion,
                   models::WitnessMutation::kPickCorruption}) {
      auto v = check_witness(c.goal, models::mutate_counter_witness(c.witness, m));
      CHECK_FALSE(v.pass);
      CHECK(v.clause == models::expected_clause(m));
    }
  }
  auto c = models::counter_coupling(3, 4);
  auto s = sandwich_from_coupling<bool, std::int64_t>(
      c, [](const bool& b) { return Rational(b ? 4 : 0); }, [](const std::int64_t& y) { return Rational(y); });
  CHECK(s.mid == Rational(1));
  CHECK(s.lo == Rational(1));
  CHECK(s.hi == Rational(1));
}
