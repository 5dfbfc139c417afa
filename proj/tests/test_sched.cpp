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

#include <fstream>
#include <sstream>

#include "randconc/error.hpp"
#include "randconc/lang.hpp"
#include "randconc/models.hpp"
#include "randconc/sched.hpp"

using namespace randconc;
using namespace randconc::lang;
using namespace randconc::sched;

#ifndef RANDCONC_PROGRAMS_DIR
#error "RANDCONC_PROGRAMS_DIR must be defined"
#endif

namespace {

Expr load(const std::string& name) {
  std::ifstream in(std::string(RANDCONC_PROGRAMS_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

Objective value() { return result_objective("value", int_value); }

}  // namespace

TEST_CASE("coin race extrema") {
  // The forked thread writes 1 or 2, main writes 10 or 0, then reads.
  // Max: main writes first and the worker overwrites only after main's 0
  // is seen; an adaptive scheduler gets 1/3 * 10 + 2/3 * 3/2.
  // Min: 2/3 * 0 + 1/3 * 3/2.
  auto c = Config::initial(load("coin.rc"));
  auto r = extremal_expectation(c, 60, value());
  CHECK(r.lo == Rational(1, 2));
  CHECK(r.hi == Rational(13, 3));
  CHECK(evaluate_policy(c, extract_policy(r, Extremum::kMin), 60, value()) == r.lo);
  CHECK(evaluate_policy(c, extract_policy(r, Extremum::kMax), 60, value()) == r.hi);
  CHECK(brute_force_extremum(c, 60, value(), Extremum::kMin).value == r.lo);
  CHECK(brute_force_extremum(c, 60, value(), Extremum::kMax).value == r.hi);
  auto rr = evaluate_policy(c, round_robin(), 60, value());
  CHECK(r.lo <= rr);
  CHECK(rr <= r.hi);
}

TEST_CASE("schedulers") {
  auto c = Config::initial(parse_program("(seq (fork (seq 1 1 1)) (seq 2 2 2))"));
  Trace t(c);
  auto rr = round_robin();
  std::vector<std::size_t> picks;
  for (int i = 0; i < 4; ++i) {
    picks.push_back(rr.decide(t));
    auto next = config_step(t.curr(), picks.back());
    t = t.extend(next.entries()[0].value);
  }
  CHECK(picks == std::vector<std::size_t>{0, 1, 0, 1});

  auto script = fixed_script({1, 0});
  Trace u(c);
  CHECK(script.decide(u) == 1);
  u = u.extend(c);
  CHECK(script.decide(u) == 0);
  u = u.extend(c);
  CHECK(script.decide(u) >= c.threads.size());

  auto a = seeded_random(5), b = seeded_random(5);
  Trace v(config_step(c, 0).entries()[0].value);
  CHECK(a.decide(v) == b.decide(v));
}

TEST_CASE("budget") {
  auto c = Config::initial(parse_program("((rec f (n) (if (= n 0) 0 (f (- n 1)))) 20)"));
  CHECK_THROWS_AS(extremal_expectation(c, 5, value()), BudgetExceeded);
  CHECK_THROWS_AS(evaluate_policy(c, round_robin(), 5, value()), BudgetExceeded);
  CHECK(extremal_expectation(c, 200, value()).hi == Rational(0));
  auto stuck = Config::initial(parse_program("(+ 1 true)"));
  CHECK_THROWS_AS(extremal_expectation(stuck, 5, value()), StuckProgram);
  auto spin = Config::initial(load("coin.rc"));
  CHECK_THROWS_AS(brute_force_extremum(spin, 60, value(), Extremum::kMax, 0, 10), BudgetExceeded);
}

TEST_CASE("cell objective grows with stutters") {
  models::CounterParams p;
  p.threads = 2;
  auto c = Config::initial(models::counter_program(p));
  auto cell = cell_objective("counter", models::kCounterCell);
  for (std::size_t n : {0, 3, 6, 9}) {
    auto memo = extremal_expectation(c, n, cell);
    CHECK(brute_force_extremum(c, n, cell, Extremum::kMin).value == memo.lo);
    CHECK(brute_force_extremum(c, n, cell, Extremum::kMax).value == memo.hi);
  }
}

TEST_CASE("monte carlo is reproducible and worker independent") {
  auto c = Config::initial(load("coin.rc"));
  auto a = monte_carlo(c, seeded_random(3), 60, value(), 4000, 11, 1);
  auto b = monte_carlo(c, seeded_random(3), 60, value(), 4000, 11, 4);
  CHECK(a.mean_exact_sum == b.mean_exact_sum);
  CHECK(a.variance == b.variance);
  CHECK(a.trials == 4000);
  auto exact = evaluate_policy(c, seeded_random(3), 60, value());
  CHECK(a.ci_lo <= exact.to_double());
  CHECK(exact.to_double() <= a.ci_hi);
}
