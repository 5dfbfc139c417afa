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

// Nondeterministic P-couplings between an indexed valuation and a process
// set.
//
// A witness is explicit data: a joint valuation over pairs plus the chosen
// right-hand valuation. check_witness re-verifies the semantic conditions
// from scratch, so the rule constructors below never certify anything on
// their own authority.

#ifndef RANDCONC_COUPLING_HPP
#define RANDCONC_COUPLING_HPP

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "randconc/ndset.hpp"

namespace randconc {

template <class A, class B>
struct Predicate {
  std::string name;
  std::function<bool(const A&, const B&)> holds;
};

template <class A, class B>
Predicate<A, B> true_predicate() {
  return {"true", [](const A&, const B&) { return true; }};
}

template <class A, class B>
struct CouplingGoal {
  IndexedValuation<A> lhs;
  ProcessSet<B> rhs;
  Predicate<A, B> predicate;
};

template <class A, class B>
struct CouplingWitness {
  IndexedValuation<std::pair<A, B>> joint;
  IndexedValuation<B> rhs_pick;
  std::string predicate_name;
};

/// A goal together with a witness claimed to discharge it.
template <class A, class B>
struct Coupled {
  CouplingGoal<A, B> goal;
  CouplingWitness<A, B> witness;
};

enum class CouplingClause {
  kNone,
  kLeftMarginal,   // (i) first marginal of the joint vs the left valuation
  kRightMarginal,  // (ii) second marginal of the joint vs the chosen pick
  kPredicate,      // (iii) a support pair violates the predicate
  kPickContained,  // (iv) the pick is not below the right-hand set
};

const char* clause_name(CouplingClause c);

struct CouplingVerdict {
  bool pass = false;
  CouplingClause clause = CouplingClause::kNone;
  std::string detail;
  explicit operator bool() const { return pass; }
};

/// Thrown by rule constructors whose side conditions fail.
class CouplingRuleError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

namespace detail {

template <class T>
std::string show(const T& v) {
  if constexpr (requires(std::ostream& os) { os << v; }) {
    std::ostringstream os;
    os << v;
    return os.str();
  } else {
    return "<value>";
  }
}

template <class A, class B>
std::string show(const std::pair<A, B>& v) {
  return "(" + show(v.first) + ", " + show(v.second) + ")";
}

inline std::string show(bool b) { return b ? "true" : "false"; }

}  // namespace detail

template <std::totally_ordered A, std::totally_ordered B>
CouplingVerdict check_witness(const CouplingGoal<A, B>& goal, const CouplingWitness<A, B>& w) {
  auto fail = [](CouplingClause c, std::string d) { return CouplingVerdict{false, c, std::move(d)}; };

  auto left = to_distribution(first_marginal(w.joint));
  auto want_left = to_distribution(goal.lhs);
  if (!(left == want_left)) {
    for (const auto& [v, p] : want_left.weights) {
      auto it = left.weights.find(v);
      Rational got = it == left.weights.end() ? Rational() : it->second;
      if (got != p)
        return fail(CouplingClause::kLeftMarginal,
                    "left value " + detail::show(v) + " has joint mass " + got.str() + ", expected " + p.str());
    }
    for (const auto& [v, p] : left.weights)
      if (!want_left.weights.contains(v))
        return fail(CouplingClause::kLeftMarginal,
                    "joint puts mass " + p.str() + " on left value " + detail::show(v) + " outside the valuation");
  }

  auto right = to_distribution(second_marginal(w.joint));
  auto want_right = to_distribution(w.rhs_pick);
  if (!(right == want_right)) {
    for (const auto& [v, p] : want_right.weights) {
      auto it = right.weights.find(v);
      Rational got = it == right.weights.end() ? Rational() : it->second;
      if (got != p)
        return fail(CouplingClause::kRightMarginal,
                    "right value " + detail::show(v) + " has joint mass " + got.str() + ", pick has " + p.str());
    }
    for (const auto& [v, p] : right.weights)
      if (!want_right.weights.contains(v))
        return fail(CouplingClause::kRightMarginal,
                    "joint puts mass " + p.str() + " on right value " + detail::show(v) + " outside the pick");
  }

  for (const auto& e : w.joint.entries()) {
    if (e.prob.sign() <= 0) continue;
    if (!goal.predicate.holds(e.value.first, e.value.second))
      return fail(CouplingClause::kPredicate, "support pair " + detail::show(e.value) + " at index '" +
                                                  index_to_string(e.index) + "' violates " + goal.predicate.name);
  }

  auto contained = decide_subset_p(ProcessSet<B>{w.rhs_pick}, goal.rhs);
  if (!contained.holds) {
    std::string sep;
    for (const auto& [v, c] : contained.separator) sep += " f(" + detail::show(v) + ")=" + c.str();
    return fail(CouplingClause::kPickContained, "chosen valuation lies outside the hull of the right-hand set;"
                                                " separating function:" + sep);
  }
  return CouplingVerdict{true, CouplingClause::kNone, "ok"};
}

/// Ret: couples ret a with ret b when P(a, b).
template <class A, class B>
Coupled<A, B> couple_ret(A a, B b, Predicate<A, B> p) {
  if (!p.holds(a, b))
    throw CouplingRuleError("Ret: predicate " + p.name + " fails on (" + detail::show(a) + ", " + detail::show(b) +
                            ")");
  CouplingWitness<A, B> w{ret(std::pair<A, B>(a, b)), ret(b), p.name};
  CouplingGoal<A, B> g{ret(a), ret_set(b), std::move(p)};
  return {std::move(g), std::move(w)};
}

/// P-Choice: both sides take the left branch together or the right branch
/// together.
template <std::totally_ordered A, std::totally_ordered B>
Coupled<A, B> couple_pchoice(const Coupled<A, B>& left, const Rational& p, const Coupled<A, B>& right) {
  if (!p.is_probability()) throw CouplingRuleError("P-Choice: probability " + p.str() + " outside [0,1]");
  if (left.goal.predicate.name != right.goal.predicate.name)
    throw CouplingRuleError("P-Choice: premises use different predicates (" + left.goal.predicate.name + ", " +
                            right.goal.predicate.name + ")");
  CouplingGoal<A, B> g{pchoice(left.goal.lhs, p, right.goal.lhs), pchoice_set(left.goal.rhs, p, right.goal.rhs),
                       left.goal.predicate};
  CouplingWitness<A, B> w{pchoice(left.witness.joint, p, right.witness.joint),
                          pchoice(left.witness.rhs_pick, p, right.witness.rhs_pick), left.goal.predicate.name};
  return {std::move(g), std::move(w)};
}

/// Bind: sequences a coupling with continuations coupling f(x) to g(y) under
/// Q for every pair in the joint support.
///
/// The composite pick is bound over the joint (each support pair supplies
/// its continuation's pick), so the second marginal matches by
/// construction; mixing picks that share a right value stays inside the
/// hull of g(y), so the pick remains below the bound right-hand set.
template <std::totally_ordered A, std::totally_ordered B, std::totally_ordered A2, std::totally_ordered B2>
Coupled<A2, B2> couple_bind(const Coupled<A, B>& first, std::function<IndexedValuation<A2>(const A&)> f,
                            std::function<ProcessSet<B2>(const B&)> g,
                            std::function<Coupled<A2, B2>(const A&, const B&)> k, Predicate<A2, B2> q) {
  std::map<std::pair<A, B>, Coupled<A2, B2>> conts;
  for (const auto& e : first.witness.joint.entries()) {
    if (e.prob.sign() <= 0 || conts.contains(e.value)) continue;
    const auto& [x, y] = e.value;
    if (!first.goal.predicate.holds(x, y))
      throw CouplingRuleError("Bind: support pair " + detail::show(e.value) + " does not satisfy " +
                              first.goal.predicate.name);
    Coupled<A2, B2> c = k(x, y);
    if (c.goal.predicate.name != q.name)
      throw CouplingRuleError("Bind: continuation at " + detail::show(e.value) + " proves " + c.goal.predicate.name +
                              ", expected " + q.name);
    if (!equiv(c.goal.lhs, f(x)))
      throw CouplingRuleError("Bind: continuation at " + detail::show(e.value) + " couples a different left term");
    if (!equiv_set(c.goal.rhs, g(y)))
      throw CouplingRuleError("Bind: continuation at " + detail::show(e.value) + " couples a different right term");
    CouplingVerdict v = check_witness(c.goal, c.witness);
    if (!v) throw CouplingRuleError("Bind: continuation at " + detail::show(e.value) + " fails: " + v.detail);
    conts.emplace(e.value, std::move(c));
  }
  auto at = [&](const std::pair<A, B>& xy) -> const Coupled<A2, B2>& {
    auto it = conts.find(xy);
    if (it != conts.end()) return it->second;
    // Zero-weight joint entries are outside the support; any valid
    // continuation works, so reuse one.
    return conts.begin()->second;
  };
  CouplingWitness<A2, B2> w{bind(first.witness.joint, [&](const std::pair<A, B>& xy) { return at(xy).witness.joint; }),
                            bind(first.witness.joint,
                                 [&](const std::pair<A, B>& xy) { return at(xy).witness.rhs_pick; }),
                            q.name};
  CouplingGoal<A2, B2> goal{bind(first.goal.lhs, f), bind_set(first.goal.rhs, g), std::move(q)};
  return {std::move(goal), std::move(w)};
}

/// Equiv: replace the left valuation by a structurally equivalent one and
/// enlarge the right-hand set.
template <std::totally_ordered A, std::totally_ordered B>
Coupled<A, B> couple_equiv(const Coupled<A, B>& c, IndexedValuation<A> new_lhs, ProcessSet<B> new_rhs) {
  if (!equiv(c.goal.lhs, new_lhs)) throw CouplingRuleError("Equiv: new left valuation is not equivalent");
  if (!subset_set(c.goal.rhs, new_rhs)) throw CouplingRuleError("Equiv: right-hand set is not contained in the new one");
  return {CouplingGoal<A, B>{std::move(new_lhs), std::move(new_rhs), c.goal.predicate}, c.witness};
}

/// Conseq: weaken the predicate; the implication is checked on the joint
/// support.
template <class A, class B>
Coupled<A, B> couple_conseq(const Coupled<A, B>& c, Predicate<A, B> weaker) {
  for (const auto& e : c.witness.joint.entries()) {
    if (e.prob.sign() <= 0) continue;
    if (c.goal.predicate.holds(e.value.first, e.value.second) && !weaker.holds(e.value.first, e.value.second))
      throw CouplingRuleError("Conseq: " + c.goal.predicate.name + " does not imply " + weaker.name + " at " +
                              detail::show(e.value));
  }
  CouplingWitness<A, B> w = c.witness;
  w.predicate_name = weaker.name;
  return {CouplingGoal<A, B>{c.goal.lhs, c.goal.rhs, std::move(weaker)}, std::move(w)};
}

/// Trivial: the product coupling of the left valuation with the first
/// member of the right-hand set, under the always-true predicate.
template <class A, class B>
Coupled<A, B> couple_trivial(const IndexedValuation<A>& lhs, const ProcessSet<B>& rhs) {
  const auto& pick = rhs.members().front();
  auto joint = bind(lhs, [&](const A& x) { return fmap(pick, [&](const B& y) { return std::pair<A, B>(x, y); }); });
  auto p = true_predicate<A, B>();
  return {CouplingGoal<A, B>{lhs, rhs, p}, CouplingWitness<A, B>{std::move(joint), pick, p.name}};
}

struct Sandwich {
  Rational lo, mid, hi;
};

/// Bounds E[f; lhs] between the extrema of g on the right-hand set, given a
/// witness whose support satisfies f(x) = g(y). Throws if the witness does
/// not certify that equality predicate.
template <std::totally_ordered A, std::totally_ordered B>
Sandwich sandwich_from_coupling(const Coupled<A, B>& c, const std::function<Rational(const A&)>& f,
                                const std::function<Rational(const B&)>& g) {
  CouplingGoal<A, B> eq_goal{c.goal.lhs, c.goal.rhs,
                             Predicate<A, B>{"f(x) = g(y)", [&](const A& x, const B& y) { return f(x) == g(y); }}};
  CouplingVerdict v = check_witness(eq_goal, c.witness);
  if (!v) throw CouplingRuleError("sandwich: witness does not certify f(x) = g(y): " + v.detail);
  Sandwich s{ex_min(g, c.goal.rhs), expected_value(f, c.goal.lhs), ex_max(g, c.goal.rhs)};
  if (!(s.lo <= s.mid && s.mid <= s.hi))
    throw InvariantViolation("sandwich violated: " + s.lo.str() + " <= " + s.mid.str() + " <= " + s.hi.str());
  return s;
}

}  // namespace randconc

#endif  // RANDCONC_COUPLING_HPP
