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

#include <map>

#include "randconc/error.hpp"
#include "randconc/ival.hpp"
#include "randconc/rational.hpp"

using namespace randconc;
using IV = IndexedValuation<int>;

namespace {

// Independent collapse: sum the weight of equal values by hand.
std::map<int, Rational> collapse(const IV& a) {
  std::map<int, Rational> m;
  for (const auto& e : a.entries())
    if (e.prob.sign() > 0) m[e.value] += e.prob;
  return m;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(Rational::parse("3/6").str() == "1/2");
  CHECK(Rational::parse("-4").str() == "-4/1");
  CHECK_THROWS_AS(Rational::parse("2/-4"), InvalidArgument);
  CHECK_THROWS_AS(Rational::parse("1/0"), InvalidArgument);
  CHECK_THROWS_AS(Rational::parse("x"), InvalidArgument);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(7).is_integer());
  CHECK(Rational(7).to_int64() == 7);
}

TEST_CASE("ret") {
  auto a = ret(0);
  CHECK(a.size() == 1);
  CHECK(a.entries()[0].prob == Rational(1));
  CHECK(equiv(ret(5), ret(5)));
  CHECK_FALSE(equiv(ret(0), ret(1)));
}

TEST_CASE("pchoice") {
  auto a = pchoice(ret(1), Rational(1, 3), ret(0));
  CHECK(collapse(a) == std::map<int, Rational>{{0, Rational(2, 3)}, {1, Rational(1, 3)}});
  // Indices are tagged by side.
  CHECK(index_to_string(a.entries()[0].index) != index_to_string(a.entries()[1].index));
  CHECK(equiv(pchoice(ret(1), Rational(1, 3), ret(0)), pchoice(ret(0), Rational(2, 3), ret(1))));
  CHECK_THROWS_AS(pchoice(ret(1), Rational(3, 2), ret(0)), InvalidArgument);
  CHECK_THROWS_AS(pchoice(ret(1), Rational(-1, 2), ret(0)), InvalidArgument);
  // p = 1 keeps the right side structurally with probability zero.
  auto one = pchoice(ret(1), Rational(1), ret(0));
  CHECK(one.size() == 2);
  CHECK(one.support_size() == 1);
  CHECK(equiv(one, ret(1)));
}

TEST_CASE("self mixture is probabilistically but not structurally equal") {
  auto i = pchoice(ret(0), Rational(1, 4), ret(1));
  auto ii = pchoice(i, Rational(1, 2), i);
  CHECK_FALSE(equiv(ii, i));
  CHECK(prob_equiv(ii, i));
  CHECK(ii.support_size() == 4);
}

TEST_CASE("bind") {
  auto a = pchoice(ret(1), Rational(1, 2), ret(2));
  auto b = bind(a, [](const int& x) { return pchoice(ret(x * 10), Rational(1, 2), ret(0)); });
  CHECK(b.support_size() == 4);
  CHECK(collapse(b) == std::map<int, Rational>{{0, Rational(1, 2)}, {10, Rational(1, 4)}, {20, Rational(1, 4)}});
  CHECK(b.mass() == Rational(1));
  // Monad laws.
  auto f = [](const int& x) { return pchoice(ret(x), Rational(1, 3), ret(x + 1)); };
  CHECK(equiv(bind(ret(4), f), f(4)));
  CHECK(equiv(bind(a, [](const int& x) { return ret(x); }), a));
}

TEST_CASE("construction invariants") {
  using E = Entry<int>;
  CHECK_THROWS_AS(IV::from_entries({}), InvalidArgument);
  CHECK_THROWS_AS(IV::from_entries({E{{0}, 1, Rational(1, 2)}}), InvariantViolation);
  CHECK_THROWS_AS(IV::from_entries({E{{0}, 1, Rational(1, 2)}, E{{0}, 2, Rational(1, 2)}}), InvalidArgument);
  CHECK_THROWS_AS(IV::from_entries({E{{0}, 1, Rational(1, 2)}, E{{0, 1}, 2, Rational(1, 2)}}), InvalidArgument);
  CHECK_THROWS_AS(IV::from_entries({E{{0}, 1, Rational(3, 2)}, E{{1}, 2, Rational(-1, 2)}}), Error);
  CHECK_NOTHROW(IV::from_entries({E{{0, 0}, 1, Rational(1, 2)}, E{{0, 1}, 2, Rational(1, 2)}}));
}

TEST_CASE("equivalence ignores indices and zero entries") {
  using E = Entry<int>;
  auto a = IV::from_entries({E{{3}, 1, Rational(1, 2)}, E{{7}, 2, Rational(1, 2)}, E{{9}, 5, Rational(0)}});
  auto b = IV::from_entries({E{{0}, 2, Rational(1, 2)}, E{{1}, 1, Rational(1, 2)}});
  CHECK(equiv(a, b));
  CHECK(a.support() == std::vector<int>{1, 2});
  // Multiset, not set: two halves on one value differ from one whole.
  auto c = IV::from_weights({{1, Rational(1, 2)}, {1, Rational(1, 2)}});
  CHECK_FALSE(equiv(c, ret(1)));
  CHECK(prob_equiv(c, ret(1)));
}

TEST_CASE("expected value") {
  auto id = [](const int& x) { return Rational(x); };
  for (int k = 0; k <= 5; ++k) {
    auto a = pchoice(ret(k + 1), Rational(1, k + 1), ret(0));
    CHECK(expected_value(id, a) == Rational(1));
  }
  auto coin = pchoice(ret(1), Rational(1, 2), ret(0));
  CHECK(expected_value([](const int& x) { return Rational(x == 1 ? 1 : 0); }, coin) == Rational(1, 2));
  CHECK(expected_value(id, ret(5)) == Rational(5));
}

TEST_CASE("distribution and marginals") {
  auto a = pchoice(ret(2), Rational(1, 3), pchoice(ret(2), Rational(1, 2), ret(7)));
  auto d = to_distribution(a);
  CHECK(d.weights == collapse(a));
  auto j = fmap(a, [](const int& x) { return std::pair<int, int>(x, x % 2); });
  CHECK(equiv(first_marginal(j), a));
  CHECK(to_distribution(second_marginal(j)).weights ==
        std::map<int, Rational>{{0, Rational(2, 3)}, {1, Rational(1, 3)}});
}

TEST_CASE("index strings round trip") {
  Index i{0, 1, 17};
  CHECK(index_from_string(index_to_string(i)) == i);
  CHECK(index_from_string(index_to_string(Index{})) == Index{});
}
