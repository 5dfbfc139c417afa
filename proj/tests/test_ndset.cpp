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
#include "randconc/models.hpp"
#include "randconc/ndset.hpp"

using namespace randconc;
using IV = IndexedValuation<int>;
using PS = ProcessSet<int>;

namespace {

IV coin(int a, int b, Rational p = Rational(1, 2)) { return pchoice(ret(a), p, ret(b)); }
Rational id(const int& x) { return Rational(x); }

}  // namespace

TEST_CASE("ret and union") {
  PS r = ret_set(0);
  CHECK(r.size() == 1);
  CHECK(equiv(r.members()[0], ret(0)));
  CHECK(ex_min(id, ret_set(4)) == Rational(4));
  PS a{coin(0, 1), ret(2)};
  PS b{ret(3)};
  CHECK(equiv_set(union_set(a, a), a));
  CHECK(equiv_set(union_set(a, b), union_set(b, a)));
  CHECK(subset_set(a, union_set(a, b)));
  CHECK_FALSE(subset_set(union_set(a, b), a));
  CHECK_THROWS_AS(PS(std::vector<IV>{}), InvalidArgument);
}

TEST_CASE("pchoice over sets") {
  PS a{ret(0), ret(1), ret(2)};
  PS b{ret(5), ret(6)};
  CHECK(pchoice_set(a, Rational(1, 3), b).size() == 6);
  CHECK(equiv_set(pchoice_set(a, Rational(1), b), a));
  CHECK(equiv_set(pchoice_set(a, Rational(1, 4), union_set(b, PS{ret(9)})),
                  union_set(pchoice_set(a, Rational(1, 4), b), pchoice_set(a, Rational(1, 4), PS{ret(9)}))));
  CHECK_THROWS_AS(pchoice_set(a, Rational(2), b), InvalidArgument);
}

TEST_CASE("bind over sets selects per index") {
  // Two indices, each free to pick either member: 2 x 2 selections.
  PS a{coin(0, 1)};
  auto f = [](const int& x) { return PS{ret(x), ret(x + 10)}; };
  PS r = bind_set(a, f);
  CHECK(dedup(r).size() == 4);
  CHECK(ex_max(id, r) == Rational(21, 2));
  CHECK(ex_min(id, r) == Rational(1, 2));
  // Splitting laws.
  PS a1{ret(1)}, a2{coin(2, 3)};
  CHECK(equiv_set(bind_set(union_set(a1, a2), f), union_set(bind_set(a1, f), bind_set(a2, f))));
  CHECK(equiv_set(bind_set(pchoice_set(a1, Rational(1, 3), a2), f),
                  pchoice_set(bind_set(a1, f), Rational(1, 3), bind_set(a2, f))));
  CHECK(equiv_set(bind_set(ret_set(7), f), f(7)));
}

TEST_CASE("set equivalence and inclusion") {
  PS dup{ret(1), ret(1), coin(0, 1)};
  PS once{coin(1, 0), ret(1)};
  CHECK(equiv_set(dup, once));
  CHECK_FALSE(equiv_set(PS{ret(0)}, PS{ret(1)}));
  CHECK_FALSE(subset_set(PS{ret(1)}, PS{ret(0)}));
}

TEST_CASE("extrema") {
  CHECK(ex_max(id, PS{ret(0), ret(3)}) == Rational(3));
  CHECK(ex_min(id, PS{ret(0), ret(3)}) == Rational(0));
  auto spec = models::approx_n(2, 0, 2).materialize();
  CHECK(ex_min([](const std::int64_t& x) { return Rational(x); }, spec) == Rational(2));
  CHECK(ex_max([](const std::int64_t& x) { return Rational(x); }, spec) == Rational(2));
  CHECK(bounded_on_support([](const int& x) { return Rational(-x); }, PS{ret(-2), ret(5)}) == Rational(5));
}

TEST_CASE("subset_p") {
  IV i1 = ret(0), i2 = coin(1, 2);
  PS both{i1, i2};
  CHECK(subset_p(both, both));
  CHECK(subset_p(PS{pchoice(i1, Rational(1, 2), i2)}, both));
  CHECK(subset_p(PS{pchoice(i1, Rational(1, 5), i2)}, both));
  // Containment is about collapsed distributions, not members.
  CHECK_FALSE(subset_set(PS{pchoice(i1, Rational(1, 2), i2)}, both));
  auto r = decide_subset_p(PS{ret(1)}, both);
  CHECK_FALSE(r.holds);
  REQUIRE(r.failing_member.has_value());
  auto sep = [&](const int& v) {
    auto it = r.separator.find(v);
    return it == r.separator.end() ? Rational() : it->second;
  };
  CHECK(ex_max(sep, PS{ret(1)}) > ex_max(sep, both));
  // bind with a constant continuation lands inside the continuation.
  PS k{coin(3, 4), ret(5)};
  CHECK(subset_p(bind_set(both, [&](const int&) { return k; }), k));
}

TEST_CASE("mixing congruence is an ordering, not an equivalence") {
  // {a} <=p {a, b} but mixing each side with itself does not give mutual
  // inclusion, so only the ordering survives probabilistic choice.
  IV a = ret(0), b = ret(1);
  PS small{a}, big{a, b};
  REQUIRE(subset_p(small, big));
  PS lhs = pchoice_set(small, Rational(1, 2), small);
  PS rhs = pchoice_set(big, Rational(1, 2), big);
  CHECK(subset_p(lhs, rhs));
  CHECK_FALSE(subset_p(rhs, lhs));
}

TEST_CASE("lazy terms agree with their sets") {
  using S = SpecTerm<int>;
  auto t = S::bind<int>(S::choose({S::ret(0), S::ret(1)}), [](const int& x) {
    return S::pchoice(S::ret(x + 1), Rational(1, 3), S::choose({S::ret(0), S::ret(x * 5)}));
  });
  PS m = t.materialize();
  std::function<Rational(const int&)> f = [](const int& x) { return Rational(x * x); };
  CHECK(t.ex_min(f) == ex_min(f, m));
  CHECK(t.ex_max(f) == ex_max(f, m));
}
