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

#include "randconc/sched.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>
#include <unordered_map>

#include "randconc/error.hpp"

namespace randconc::sched {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::size_t> enabled_threads(const Config& c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.threads.size(); ++i)
    if (lang::enabled(c, i)) out.push_back(i);
  return out;
}

struct StateKey {
  Config config;
  std::size_t budget;
  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const { return k.config.hash() * 31 + k.budget; }
};

}  // namespace

SchedulerPolicy round_robin() {
  return {"round-robin", [](const Trace& t) -> std::size_t {
            const Config& c = t.curr();
            std::size_t n = c.threads.size();
            std::size_t start = (t.length() - 1) % n;
            for (std::size_t d = 0; d < n; ++d)
              if (lang::enabled(c, (start + d) % n)) return (start + d) % n;
            return start;
          }};
}

SchedulerPolicy fixed_script(std::vector<std::size_t> script) {
  return {"fixed-script", [script = std::move(script)](const Trace& t) -> std::size_t {
            std::size_t step = t.length() - 1;
            return step < script.size() ? script[step] : SIZE_MAX;
          }};
}

SchedulerPolicy seeded_random(std::uint64_t seed) {
  return {"seeded-random:" + std::to_string(seed), [seed](const Trace& t) -> std::size_t {
            auto en = enabled_threads(t.curr());
            if (en.empty()) return 0;
            std::uint64_t h = splitmix(seed ^ splitmix(t.length() ^ splitmix(t.curr().hash())));
            return en[h % en.size()];
          }};
}

Rational int_value(const Expr& v) {
  if (v.kind() != lang::Kind::kInt) throw StuckProgram("expected an integer result, got " + lang::unparse(v));
  return Rational(v.number());
}

Objective result_objective(std::string name, std::function<Rational(const Expr&)> f) {
  Objective o;
  o.name = std::move(name);
  o.result_only = true;
  o.eval = [f = std::move(f)](const Config& c) {
    if (!c.terminated()) throw StuckProgram("result thread is not a value: " + lang::unparse(c.threads.front()));
    return f(c.threads.front());
  };
  return o;
}

Objective cell_objective(std::string name, std::size_t loc) {
  Objective o;
  o.name = std::move(name);
  o.result_only = false;
  o.eval = [loc](const Config& c) {
    if (loc >= c.state.heap.size() || c.state.heap[loc].kind() != lang::Kind::kInt) return Rational(0);
    return Rational(c.state.heap[loc].number());
  };
  return o;
}

namespace {

Rational evaluate_rec(const Trace& t, const SchedulerPolicy& sched, std::size_t n, const Objective& f) {
  const Config& c = t.curr();
  if (f.result_only && c.terminated()) return f.eval(c);
  if (n == 0) {
    if (f.result_only) throw BudgetExceeded("execution did not terminate within the step budget");
    return f.eval(c);
  }
  auto step = lang::trace_step_ival(sched, t);
  Rational sum;
  for (const auto& e : step.entries())
    if (e.prob.sign() > 0) sum += e.prob * evaluate_rec(e.value, sched, n - 1, f);
  return sum;
}

class Induction {
 public:
  Induction(const Objective& f, Extremum dir) : f_(f), dir_(dir), table_(std::make_shared<PolicyTable>()) {}

  Rational value(const Config& c, std::size_t k) {
    if (f_.result_only && c.terminated()) return f_.eval(c);
    StateKey key{c, k};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Rational v = compute(c, k);
    memo_.emplace(std::move(key), v);
    return v;
  }

  std::size_t explored() const { return memo_.size(); }
  std::shared_ptr<const PolicyTable> table() const { return table_; }

 private:
  Rational compute(const Config& c, std::size_t k) {
    auto en = enabled_threads(c);
    if (en.empty()) {
      if (f_.result_only) throw StuckProgram("deadlock: no thread can step and the result thread is not a value");
      return f_.eval(c);
    }
    if (k == 0) {
      if (f_.result_only) throw BudgetExceeded("some scheduler does not terminate within the step budget");
      return f_.eval(c);
    }
    std::optional<Rational> best;
    std::size_t arg = en.front();
    for (std::size_t i : en) {
      Rational sum;
      for (const auto& [next, p] : lang::successors(c, i)) sum += p * value(next, k - 1);
      if (!best || (dir_ == Extremum::kMin ? sum < *best : sum > *best)) {
        best = std::move(sum);
        arg = i;
      }
    }
    table_->choice.emplace(std::make_pair(c, k), arg);
    return *best;
  }

  const Objective& f_;
  Extremum dir_;
  std::unordered_map<StateKey, Rational, StateKeyHash> memo_;
  std::shared_ptr<PolicyTable> table_;
};

}  // namespace

Rational evaluate_policy(const Config& start, const SchedulerPolicy& sched, std::size_t n, const Objective& f) {
  return evaluate_rec(Trace(start), sched, n, f);
}

ExtremalResult extremal_expectation(const Config& start, std::size_t n, const Objective& f) {
  Induction lo(f, Extremum::kMin);
  Induction hi(f, Extremum::kMax);
  ExtremalResult r;
  r.lo = lo.value(start, n);
  r.hi = hi.value(start, n);
  r.policy_lo = lo.table();
  r.policy_hi = hi.table();
  r.explored_states = lo.explored() + hi.explored();
  r.budget = n;
  return r;
}

SchedulerPolicy extract_policy(const ExtremalResult& r, Extremum dir) {
  auto table = dir == Extremum::kMin ? r.policy_lo : r.policy_hi;
  std::size_t budget = r.budget;
  return {dir == Extremum::kMin ? "extremal-min" : "extremal-max",
          [table, budget](const Trace& t) -> std::size_t {
            std::size_t used = t.length() - 1;
            if (used > budget) return 0;
            auto it = table->choice.find(std::make_pair(t.curr(), budget - used));
            return it == table->choice.end() ? 0 : it->second;
          }};
}

namespace {

class BruteForce {
 public:
  BruteForce(const Objective& f, Extremum dir, std::size_t cap) : f_(f), dir_(dir), cap_(cap) {}

  Rational value(const Trace& t, std::size_t k, std::size_t stutters) {
    if (++nodes_ > cap_) throw BudgetExceeded("brute-force enumeration exceeded its node cap");
    const Config& c = t.curr();
    if (f_.result_only && c.terminated()) return f_.eval(c);
    auto en = enabled_threads(c);
    if (en.empty()) {
      if (f_.result_only) throw StuckProgram("deadlock in brute-force enumeration");
      return f_.eval(c);
    }
    if (k == 0) {
      if (f_.result_only) throw BudgetExceeded("some scheduler does not terminate within the step budget");
      return f_.eval(c);
    }
    std::optional<Rational> best;
    auto consider = [&](Rational v) {
      if (!best || (dir_ == Extremum::kMin ? v < *best : v > *best)) best = std::move(v);
    };
    for (std::size_t i : en) {
      Rational sum;
      for (const auto& [next, p] : lang::successors(c, i)) sum += p * value(t.extend(next), k - 1, stutters);
      consider(std::move(sum));
    }
    if (stutters > 0) consider(value(t.extend(c), k - 1, stutters - 1));
    return *best;
  }

  std::size_t nodes() const { return nodes_; }

 private:
  const Objective& f_;
  Extremum dir_;
  std::size_t cap_;
  std::size_t nodes_ = 0;
};

}  // namespace

BruteForceResult brute_force_extremum(const Config& start, std::size_t n, const Objective& f, Extremum dir,
                                      std::size_t max_stutters, std::size_t node_cap) {
  BruteForce bf(f, dir, node_cap);
  BruteForceResult r;
  r.value = bf.value(Trace(start), n, max_stutters);
  r.nodes = bf.nodes();
  return r;
}

namespace {

// Per-worker memo of config_step; steps are pure, so trials can share them.
// Schedulers may read the whole trace, so their choices are never cached.
class StepCache {
 public:
  const IndexedValuation<Config>& step(const Config& c, std::size_t i) {
    if (memo_.size() > kLimit) memo_.clear();
    auto& row = memo_[c];
    auto it = row.find(i);
    if (it == row.end()) it = row.emplace(i, lang::config_step(c, i)).first;
    return it->second;
  }

 private:
  static constexpr std::size_t kLimit = 200000;
  std::unordered_map<Config, std::map<std::size_t, IndexedValuation<Config>>, lang::ConfigHash> memo_;
};

Rational sample_once(const Config& start, const SchedulerPolicy& sched, std::size_t n, const Objective& f,
                     std::mt19937_64& rng, StepCache& cache) {
  Trace t(start);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t step = 0;; ++step) {
    const Config& c = t.curr();
    if (f.result_only && c.terminated()) return f.eval(c);
    if (step == n) {
      if (f.result_only) throw BudgetExceeded("sampled execution did not terminate within the step budget");
      return f.eval(c);
    }
    const auto& entries = cache.step(c, sched.decide(t)).entries();
    double u = unit(rng);
    double acc = 0;
    std::size_t pick = entries.size() - 1;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].prob.sign() == 0) continue;
      acc += entries[i].prob.to_double();
      if (u < acc) {
        pick = i;
        break;
      }
    }
    while (entries[pick].prob.sign() == 0) --pick;
    t = t.extend(entries[pick].value);
  }
}

}  // namespace

MonteCarloResult monte_carlo(const Config& start, const SchedulerPolicy& sched, std::size_t n, const Objective& f,
                             std::size_t trials, std::uint64_t seed, std::size_t workers) {
  if (trials < 2) throw InvalidArgument("monte carlo needs at least two trials");
  std::vector<Rational> samples(trials);
  workers = std::max<std::size_t>(1, std::min(workers, trials));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](std::size_t w) {
    try {
      StepCache cache;
      for (std::size_t i = w; i < trials; i += workers) {
        std::mt19937_64 rng(splitmix(seed ^ splitmix(i)));
        samples[i] = sample_once(start, sched, n, f, rng, cache);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  MonteCarloResult r;
  r.trials = trials;
  for (const auto& s : samples) r.mean_exact_sum += s;
  r.mean = (r.mean_exact_sum / Rational(static_cast<std::int64_t>(trials))).to_double();
  double ss = 0;
  for (const auto& s : samples) {
    double d = s.to_double() - r.mean;
    ss += d * d;
  }
  r.variance = ss / static_cast<double>(trials - 1);
  double se = std::sqrt(r.variance / static_cast<double>(trials));
  r.ci_lo = r.mean - 3 * se;
  r.ci_hi = r.mean + 3 * se;
  return r;
}

std::size_t default_workers() {
  if (const char* w = std::getenv("RANDCONC_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(w, &end, 10);
    if (end != w && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

}  // namespace randconc::sched
