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

// Schedulers and exact adversarial analysis over the trace semantics.
//
// Extremal expectations are computed by backward induction memoized on
// (configuration, remaining budget). A scheduler may inspect the whole
// trace, but for a finite-horizon expected value the optimum is attained by
// a policy reading only the current configuration and the steps used, since
// the continuation value depends on nothing else. brute_force_extremum
// recomputes the same quantity over full history-dependent decision trees as
// an independent check of that argument.

#ifndef RANDCONC_SCHED_HPP
#define RANDCONC_SCHED_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randconc/lang.hpp"
#include "randconc/ndset.hpp"

namespace randconc::sched {

using lang::Config;
using lang::Expr;
using lang::SchedulerPolicy;
using lang::Trace;

/// Starting from thread (steps taken mod pool size), the first enabled
/// thread; with two busy threads this alternates 0,1,0,1.
SchedulerPolicy round_robin();

/// Plays the given thread indices in order, then stutters forever.
SchedulerPolicy fixed_script(std::vector<std::size_t> script);

/// Picks uniformly-hashed among enabled threads from (seed, step, config);
/// identical traces always get identical choices.
SchedulerPolicy seeded_random(std::uint64_t seed);

/// A function of the final configuration. Result objectives read thread 0
/// only, so analyses may stop as soon as it is a value.
struct Objective {
  std::string name;
  std::function<Rational(const Config&)> eval;
  bool result_only = true;
};

/// f applied to thread 0's value; throws StuckProgram when it is not one.
Objective result_objective(std::string name, std::function<Rational(const Expr&)> f);

/// Integer contents of a heap cell (0 when unallocated or not an integer);
/// defined on every configuration, so usable at any horizon.
Objective cell_objective(std::string name, std::size_t loc);

/// Integer value of thread 0.
Rational int_value(const Expr& v);

/// Exact E[f] over the n-step outcome of `sched`. Throws BudgetExceeded
/// when some positive-probability path has not terminated after n steps.
Rational evaluate_policy(const Config& start, const SchedulerPolicy& sched, std::size_t n, const Objective& f);

/// Decision made by an extremal policy in a (configuration, remaining budget)
/// state.
struct PolicyTable {
  std::map<std::pair<Config, std::size_t>, std::size_t> choice;
};

struct ExtremalResult {
  Rational lo;
  Rational hi;
  std::shared_ptr<const PolicyTable> policy_lo;
  std::shared_ptr<const PolicyTable> policy_hi;
  std::size_t explored_states = 0;
  std::size_t budget = 0;
};

/// min/max over all schedulers of E[f] after n steps; stutter choices are
/// never taken. Throws BudgetExceeded / StuckProgram when a result
/// objective meets a non-value thread 0 at the horizon or in a deadlock.
ExtremalResult extremal_expectation(const Config& start, std::size_t n, const Objective& f);

/// A policy replaying the recorded extremum; reads only curr(trace) and the
/// number of steps taken.
SchedulerPolicy extract_policy(const ExtremalResult& r, Extremum dir);

struct BruteForceResult {
  Rational value;
  std::size_t nodes = 0;
};

/// Un-memoized recursion over traces: every trace node chooses its thread
/// independently, which is exactly the space of history-dependent
/// schedulers. `max_stutters` additionally allows that many stutter
/// choices along any path. Throws BudgetExceeded past `node_cap` nodes.
BruteForceResult brute_force_extremum(const Config& start, std::size_t n, const Objective& f, Extremum dir,
                                      std::size_t max_stutters = 0, std::size_t node_cap = 1000000);

struct MonteCarloResult {
  Rational mean_exact_sum;  // sum of samples, exact
  double mean = 0;
  double variance = 0;  // unbiased sample variance
  double ci_lo = 0;     // mean -/+ 3 standard errors
  double ci_hi = 0;
  std::size_t trials = 0;
};

/// Samples `trials` executions with per-trial seeds derived from `seed`.
/// Randomized policies see the same trace, so results are reproducible.
MonteCarloResult monte_carlo(const Config& start, const SchedulerPolicy& sched, std::size_t n, const Objective& f,
                             std::size_t trials, std::uint64_t seed, std::size_t workers = 1);

struct SandwichReport {
  Rational spec_min;
  Rational lo;
  Rational hi;
  Rational spec_max;
  bool pass = false;
};

/// Checks spec_min <= lo <= hi <= spec_max for the program's scheduler range.
template <class T>
SandwichReport soundness_sandwich_check(const Config& start, const SpecTerm<T>& spec, const Objective& f,
                                        const std::function<Rational(const T&)>& g, std::size_t n) {
  SandwichReport r;
  r.spec_min = spec.ex_min(g);
  r.spec_max = spec.ex_max(g);
  auto ex = extremal_expectation(start, n, f);
  r.lo = ex.lo;
  r.hi = ex.hi;
  r.pass = r.spec_min <= r.lo && r.lo <= r.hi && r.hi <= r.spec_max;
  return r;
}

/// Worker count from RANDCONC_WORKERS, else 1.
std::size_t default_workers();

}  // namespace randconc::sched

#endif  // RANDCONC_SCHED_HPP
