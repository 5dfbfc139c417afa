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

#include <algorithm>

#include "randconc/lang.hpp"
#include "randconc/models.hpp"
#include "randconc/sched.hpp"

using namespace randconc;
using namespace randconc::models;
using lang::Config;

namespace {

sched::Objective read_value() { return sched::result_objective("read", sched::int_value); }

sched::ExtremalResult analyse(const CounterParams& p, std::size_t budget = 400) {
  return sched::extremal_expectation(Config::initial(counter_program(p)), budget, read_value());
}

Rational id(const std::int64_t& x) { return Rational(x); }

}  // namespace

TEST_CASE("single threaded counters are exact") {
  CounterParams p;
  p.kind = CounterKind::kUnbiased;
  p.max = 4;
  auto r = analyse(p);
  CHECK(r.lo == Rational(1));
  CHECK(r.hi == Rational(1));
  p.incrs_per_thread = 2;
  for (auto kind : {CounterKind::kUnbiased, CounterKind::kMorris, CounterKind::kDlm}) {
    p.kind = kind;
    p.bits = 2;
    auto e = analyse(p);
    CHECK(e.lo == Rational(2));
    CHECK(e.hi == Rational(2));
  }
}

TEST_CASE("concurrent unbiased counter stays unbiased") {
  CounterParams p;
  p.threads = 2;
  auto r = analyse(p);
  CHECK(r.lo == Rational(2));
  CHECK(r.hi == Rational(2));
}

TEST_CASE("concurrent dlm counter is biased") {
  CounterParams p;
  p.kind = CounterKind::kDlm;
  p.threads = 2;
  p.bits = 1;
  auto r = analyse(p);
  CHECK(r.lo == Rational(3, 2));
  CHECK(r.hi == Rational(5, 2));
}

TEST_CASE("approximate counter spec") {
  CHECK(approx_incr(3).ex_min(id) == approx_incr(3).ex_max(id));
  for (std::size_t n = 0; n <= 4; ++n) {
    CHECK(approx_n(n, 0, 3).ex_min(id) == Rational(static_cast<std::int64_t>(n)));
    CHECK(approx_n(n, 0, 3).ex_max(id) == Rational(static_cast<std::int64_t>(n)));
  }
  CHECK(approx_n(2, 0, 0).materialize().size() >= 1);
}

TEST_CASE("count true client") {
  auto c = Config::initial(count_true_client({true, false, true}, {true}, 4));
  auto r = sched::extremal_expectation(c, 2000, read_value());
  CHECK(r.lo == Rational(3));
  CHECK(r.hi == Rational(3));
}

namespace {

// Written from the cost formulas, independently of the model code.
std::int64_t oracle_cost(const KeyList& tl, const KeyList& bl, std::int64_t k) {
  std::int64_t below = 0, top = kIntMin;
  bool in_top = false;
  for (auto i : tl) {
    if (i < k) ++below, top = std::max(top, i);
    if (i == k) in_top = true;
  }
  if (in_top) return 1 + below;
  std::int64_t gap = 0;
  for (auto i : bl)
    if (top < i && i < k) ++gap;
  return 1 + below + 1 + gap;
}

// Sequential insertion sends each key to the top level with probability
// 1/2 independently, so the expectation is an average over subsets.
Rational oracle_expectation(const KeyList& l, std::int64_t k) {
  Rational sum;
  KeyList bl = l;
  std::sort(bl.begin(), bl.end());
  for (std::uint32_t mask = 0; mask < (1u << l.size()); ++mask) {
    KeyList tl;
    for (std::size_t i = 0; i < l.size(); ++i)
      if (mask & (1u << i)) tl.push_back(l[i]);
    sum += Rational(oracle_cost(tl, bl, k));
  }
  return sum / Rational(std::int64_t{1} << l.size());
}

auto cost_at(std::int64_t k) {
  return [k](const SkipState& s) { return Rational(skipcost(s.first, s.second, k)); };
}

}  // namespace

TEST_CASE("skip list cost") {
  CHECK(skipcost({}, {}, 4) == 2);
  CHECK(skipcost({5}, {5}, 5) == 1);
  CHECK(skipcost({}, {1, 2, 3}, 4) == 5);
  CHECK(skipcost_bound(0) == Rational(2));
  CHECK(skipcost_bound(1) == Rational(3));
  CHECK(skipcost_bound(2) == Rational(15, 4));
  for (std::size_t n = 0; n < 6; ++n) CHECK(skipcost_bound(n) < skipcost_bound(n + 1));
  for (const KeyList& l : {KeyList{}, KeyList{5}, KeyList{3, 1}, KeyList{4, 1, 3, 2}, KeyList{2, 6, 4, 1, 5}}) {
    auto spec = skiplist_spec(l, {}, {});
    for (std::int64_t k = 0; k <= 7; ++k) {
      CAPTURE(k);
      Rational want = oracle_expectation(l, k);
      CHECK(spec.ex_min(cost_at(k)) == want);
      CHECK(spec.ex_max(cost_at(k)) == want);
      std::size_t n = static_cast<std::size_t>(std::count_if(l.begin(), l.end(), [k](auto i) { return i < k; }));
      CHECK(want <= skipcost_bound(n));
    }
  }
  // Spec members are equal up to key order.
  CHECK(equiv_set(skiplist_spec({1, 3, 2}, {}, {}).materialize(), skiplist_spec({3, 2, 1}, {}, {}).materialize()));
}

TEST_CASE("skip list program matches the spec") {
  auto comparisons = sched::result_objective("comparisons",
                                             [](const lang::Expr& v) { return sched::int_value(v.kids()[1].kids()[1]); });
  auto found = sched::result_objective("found", [](const lang::Expr& v) {
    return Rational(v.kids()[1].kids()[0].boolean_value() ? 1 : 0);
  });
  auto empty = Config::initial(skiplist_program({{}}, 9));
  CHECK(sched::extremal_expectation(empty, 2000, comparisons).hi == Rational(2));
  CHECK(sched::extremal_expectation(empty, 2000, found).hi == Rational(0));
  // One key: found, with one or two comparisons at even odds.
  auto one = Config::initial(skiplist_program({{5}}, 5));
  CHECK(sched::extremal_expectation(one, 2000, found).lo == Rational(1));
  CHECK(sched::extremal_expectation(one, 2000, comparisons).hi == Rational(3, 2));

  for (std::int64_t k : {0, 2, 4}) {
    auto prog = skiplist_program({{3, 1}}, k);
    auto f = sched::result_objective("comparisons",
                                     [](const lang::Expr& v) { return sched::int_value(v.kids()[1].kids()[1]); });
    auto r = sched::extremal_expectation(Config::initial(prog), 2000, f);
    auto spec = skiplist_spec({3, 1}, {}, {});
    auto g = [k](const SkipState& s) { return Rational(skipcost(s.first, s.second, k)); };
    CHECK(r.lo == spec.ex_min(g));
    CHECK(r.hi == spec.ex_max(g));
  }
}
