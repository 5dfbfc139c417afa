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

// A small ML-like concurrent language with biased coin flips.
//
// Expressions are immutable, hash-consed-style trees (structural hash cached
// per node) evaluated by substitution, call-by-value, left to right. Every
// non-value thread decomposes into exactly one evaluation context and redex.
// The only probabilistic redex is (flip n1 n2); every other redex has a
// single outcome. Threads that cannot reduce (free variables, type errors,
// out-of-range locations, a flip whose ratio is not a probability, a wait on
// an unset flag) are stuck; scheduling a stuck thread is a stutter.

#ifndef RANDCONC_LANG_HPP
#define RANDCONC_LANG_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "randconc/ival.hpp"

namespace randconc::lang {

enum class Kind : std::uint8_t {
  kUnit,
  kInt,
  kBool,
  kLoc,
  kVar,
  kRec,  // recursive function; a value
  kApp,
  kLet,
  kIf,
  kFlip,
  kAlloc,
  kLoad,
  kStore,
  kFaa,
  kCas,
  kMin,
  kFork,
  kPair,  // a value once both components are values
  kFst,
  kSnd,
  kBinOp,
  kNot,
  kWait,  // blocks until the location holds true
};

enum class BinOp : std::uint8_t { kAdd, kSub, kMul, kDiv, kMod, kLt, kLe, kEq, kShl };

std::string_view binop_symbol(BinOp op);

struct Node;

/// Handle to an immutable expression node.
class Expr {
 public:
  /// Default-constructs unit.
  Expr();

  static Expr unit();
  static Expr integer(std::int64_t n);
  static Expr boolean(bool b);
  static Expr loc(std::int64_t l);
  static Expr var(std::string name);
  /// (rec f (x) body); f = "_" gives an anonymous function.
  static Expr rec(std::string self, std::string param, Expr body);
  static Expr fun(std::string param, Expr body) { return rec("_", std::move(param), std::move(body)); }
  static Expr app(Expr f, Expr a);
  /// (let x e1 e2); x = "_" is sequencing.
  static Expr let(std::string name, Expr bound, Expr body);
  static Expr seq(Expr first, Expr second) { return let("_", std::move(first), std::move(second)); }
  static Expr if_(Expr c, Expr t, Expr e);
  static Expr flip(Expr n1, Expr n2);
  static Expr alloc(Expr init);
  static Expr load(Expr l);
  static Expr store(Expr l, Expr v);
  static Expr faa(Expr l, Expr k);
  static Expr cas(Expr l, Expr expected, Expr desired);
  static Expr min(Expr a, Expr b);
  static Expr fork(Expr body);
  static Expr pair(Expr a, Expr b);
  static Expr fst(Expr p);
  static Expr snd(Expr p);
  static Expr binop(BinOp op, Expr a, Expr b);
  static Expr not_(Expr b);
  static Expr wait(Expr l);

  Kind kind() const;
  bool is_value() const;
  std::int64_t number() const;  // kInt / kLoc
  bool boolean_value() const;   // kBool
  BinOp op() const;             // kBinOp
  const std::string& name() const;   // kVar name, kRec self, kLet binder
  const std::string& param() const;  // kRec parameter
  const std::vector<Expr>& kids() const;
  std::size_t hash() const;

  const Node* node() const { return node_.get(); }

  /// Builds a node, filling in the cached hash and flags.
  static Expr make(Node n);

  friend bool operator==(const Expr& a, const Expr& b);
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind = Kind::kUnit;
  BinOp op = BinOp::kAdd;
  std::int64_t number = 0;
  std::string name;
  std::string param;
  std::vector<Expr> kids;
  std::size_t hash = 0;
  bool is_value = false;
  bool has_vars = false;
};

/// Substitutes the closed value `v` for free occurrences of `x`.
Expr subst(const Expr& e, const std::string& x, const Expr& v);

/// Heap: cell l lives at index l; allocation appends, so the next location
/// is always heap.size() and every location below it is allocated.
struct State {
  std::vector<Expr> heap;
  std::int64_t next_loc() const { return static_cast<std::int64_t>(heap.size()); }
  friend bool operator==(const State&, const State&) = default;
  friend std::strong_ordering operator<=>(const State& a, const State& b);
};

struct Config {
  std::vector<Expr> threads;  // nonempty; thread 0 carries the result
  State state;

  static Config initial(Expr program);
  bool terminated() const { return threads.front().is_value(); }
  std::size_t hash() const;
  friend bool operator==(const Config&, const Config&) = default;
  friend std::strong_ordering operator<=>(const Config& a, const Config& b);
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const { return c.hash(); }
};

/// Result of one per-thread reduction.
struct ThreadResult {
  Expr expr;
  State state;
  std::vector<Expr> spawned;
};

struct Outcome {
  ThreadResult result;
  Rational prob;
};

/// All outcomes of reducing `e` in `s`, or nullopt when `e` is a value or
/// stuck. Probabilities sum to one.
std::optional<std::vector<Outcome>> reduce(const Expr& e, const State& s);

/// The per-thread step as an indexed valuation; the none-marker (nullopt
/// value) stands for "no transition".
IndexedValuation<std::optional<ThreadResult>> thread_step(const Expr& e, const State& s);

/// True when thread i exists, is not a value and has a transition.
bool enabled(const Config& c, std::size_t i);

/// Steps thread i; stutters (ret c) when it cannot.
IndexedValuation<Config> config_step(const Config& c, std::size_t i);

/// Positive-probability successors of stepping thread i, or empty when the
/// thread cannot step. Used by the exhaustive analyses.
std::vector<std::pair<Config, Rational>> successors(const Config& c, std::size_t i);

/// A partial execution: a nonempty, persistent list of configurations.
class Trace {
 public:
  explicit Trace(Config start);
  Trace extend(Config next) const;

  const Config& curr() const { return node_->config; }
  /// Number of configurations; steps taken = length() - 1.
  std::size_t length() const { return node_->length; }
  std::vector<Config> configs() const;

 private:
  struct TraceNode {
    Config config;
    std::shared_ptr<const TraceNode> prev;
    std::size_t length;
  };
  explicit Trace(std::shared_ptr<const TraceNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TraceNode> node_;
};

/// A scheduler: may inspect the whole trace. Out-of-range answers stutter.
struct SchedulerPolicy {
  std::string name;
  std::function<std::size_t(const Trace&)> decide;
};

/// Appends the outcome of the scheduled thread's step to the trace.
IndexedValuation<Trace> trace_step_ival(const SchedulerPolicy& sched, const Trace& t);

/// Steps n times and returns thread 0 of the final configuration.
IndexedValuation<Expr> trace_step_ival_n(const SchedulerPolicy& sched, const Trace& t, std::size_t n);

bool is_terminated_config(const Config& c);

/// Every positive-probability n-step extension under `sched` ends in a
/// terminated configuration (thread 0 never leaves a value, so checking at
/// exactly n steps covers every longer extension too).
bool terminates_within(const SchedulerPolicy& sched, const Trace& t, std::size_t n);

// Concrete syntax.

/// Parses one expression in the s-expression grammar (docs/grammar.md).
Expr parse_program(std::string_view text);

/// Single-line canonical form; parse_program(unparse(e)) == e.
std::string unparse(const Expr& e);

/// Multi-line form breaking lists wider than `width` columns; parses back to
/// the same tree.
std::string pretty(const Expr& e, std::size_t width = 80);

std::string to_string(const Config& c);

bool is_keyword(std::string_view word);

}  // namespace randconc::lang

template <>
struct std::hash<randconc::lang::Expr> {
  std::size_t operator()(const randconc::lang::Expr& e) const noexcept { return e.hash(); }
};

#endif  // RANDCONC_LANG_HPP
