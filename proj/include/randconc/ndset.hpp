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

// Nondeterministic sets of indexed valuations.
//
// A ProcessSet is a finite nonempty sequence of indexed valuations; each
// member is one way a scheduler might resolve the nondeterminism. The
// sequence may contain duplicates; equivalence and ordering work on the
// deduplicated canonical forms.
//
// bind resolves nondeterminism per index: for each member and each
// assignment of a member of f(value) to every index in the member's indicial
// support, the result contains the composed valuation. Selecting per value
// instead would identify two indices with equal values, which is exactly the
// identification indexed valuations exist to avoid.
//
// The probabilistic order subset_p(a, b) (every bounded f has
// max_a E[f] <= max_b E[f]) is decided as convex-hull membership. If each
// member's collapsed distribution is a convex combination of b's, linearity
// of expectation gives the bound for every f. Conversely, a distribution
// outside the hull is strictly separated by a hyperplane over the finite
// joint support (Farkas); that hyperplane is a bounded function whose
// expectation under the member exceeds its maximum over b.

#ifndef RANDCONC_NDSET_HPP
#define RANDCONC_NDSET_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "randconc/ival.hpp"
#include "randconc/lp.hpp"

namespace randconc {

template <class T>
class ProcessSet {
 public:
  using value_type = T;

  explicit ProcessSet(std::vector<IndexedValuation<T>> members) : members_(std::move(members)) {
    if (members_.empty()) throw InvalidArgument("process set must be nonempty");
  }
  ProcessSet(std::initializer_list<IndexedValuation<T>> members)
      : ProcessSet(std::vector<IndexedValuation<T>>(members)) {}

  const std::vector<IndexedValuation<T>>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<IndexedValuation<T>> members_;
};

template <class T>
ProcessSet<T> ret_set(T v) {
  return ProcessSet<T>{ret(std::move(v))};
}

template <class T>
ProcessSet<T> union_set(const ProcessSet<T>& a, const ProcessSet<T>& b) {
  std::vector<IndexedValuation<T>> m = a.members();
  m.insert(m.end(), b.members().begin(), b.members().end());
  return ProcessSet<T>(std::move(m));
}

template <class T>
ProcessSet<T> union_of(const std::vector<ProcessSet<T>>& parts) {
  if (parts.empty()) throw InvalidArgument("union of zero process sets");
  std::vector<IndexedValuation<T>> m;
  for (const auto& p : parts) m.insert(m.end(), p.members().begin(), p.members().end());
  return ProcessSet<T>(std::move(m));
}

template <class T>
ProcessSet<T> pchoice_set(const ProcessSet<T>& a, const Rational& p, const ProcessSet<T>& b) {
  require_probability(p);
  std::vector<IndexedValuation<T>> m;
  m.reserve(a.size() * b.size());
  for (const auto& x : a.members())
    for (const auto& y : b.members()) m.push_back(pchoice(x, p, y));
  return ProcessSet<T>(std::move(m));
}

/// Per-index selection bind. Zero-probability entries of the outer member
/// are dropped: they are outside the indicial support and have nothing to
/// select. The result can have |a| * prod |f(v_i)| members.
template <class A, class F>
auto bind_set(const ProcessSet<A>& a, F&& f) {
  using R = std::invoke_result_t<F&, const A&>;
  using B = typename R::value_type;
  std::vector<IndexedValuation<B>> out;
  for (const auto& member : a.members()) {
    std::vector<const Entry<A>*> supp;
    std::vector<R> options;
    for (const auto& e : member.entries()) {
      if (e.prob.sign() <= 0) continue;
      supp.push_back(&e);
      options.push_back(f(e.value));
    }
    std::vector<std::size_t> choice(supp.size(), 0);
    while (true) {
      std::vector<Entry<B>> entries;
      for (std::size_t k = 0; k < supp.size(); ++k) {
        const auto& chosen = options[k].members()[choice[k]];
        for (const auto& g : chosen.entries())
          entries.push_back(Entry<B>{concat(supp[k]->index, g.index), g.value, supp[k]->prob * g.prob});
      }
      out.push_back(IndexedValuation<B>::trusted(std::move(entries)));
      std::size_t k = 0;
      for (; k < supp.size(); ++k) {
        if (++choice[k] < options[k].size()) break;
        choice[k] = 0;
      }
      if (k == supp.size()) break;
    }
  }
  return ProcessSet<B>(std::move(out));
}

template <class A, class F>
auto fmap_set(const ProcessSet<A>& a, F&& f) {
  using B = std::decay_t<std::invoke_result_t<F&, const A&>>;
  std::vector<IndexedValuation<B>> out;
  out.reserve(a.size());
  for (const auto& m : a.members()) out.push_back(fmap(m, f));
  return ProcessSet<B>(std::move(out));
}

template <std::totally_ordered T>
using CanonicalForm = std::vector<std::pair<T, Rational>>;

template <std::totally_ordered T>
std::vector<CanonicalForm<T>> canonical_members(const ProcessSet<T>& s) {
  std::vector<CanonicalForm<T>> out;
  out.reserve(s.size());
  for (const auto& m : s.members()) out.push_back(canonical(m));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Every member of a is structurally equivalent to some member of b.
template <std::totally_ordered T>
bool subset_set(const ProcessSet<T>& a, const ProcessSet<T>& b) {
  auto ca = canonical_members(a);
  auto cb = canonical_members(b);
  return std::includes(cb.begin(), cb.end(), ca.begin(), ca.end());
}

template <std::totally_ordered T>
bool equiv_set(const ProcessSet<T>& a, const ProcessSet<T>& b) {
  return canonical_members(a) == canonical_members(b);
}

/// Keeps one representative per structural-equivalence class, in first-seen
/// order. Semantically a no-op; callers invoke it to control member blow-up.
template <std::totally_ordered T>
ProcessSet<T> dedup(const ProcessSet<T>& s) {
  std::vector<IndexedValuation<T>> out;
  std::vector<CanonicalForm<T>> seen;
  for (const auto& m : s.members()) {
    auto c = canonical(m);
    auto it = std::lower_bound(seen.begin(), seen.end(), c);
    if (it != seen.end() && *it == c) continue;
    seen.insert(it, std::move(c));
    out.push_back(m);
  }
  return ProcessSet<T>(std::move(out));
}

enum class Extremum { kMin, kMax };

template <class T, class F>
Rational ex_extremum(F&& f, const ProcessSet<T>& s, Extremum dir) {
  std::optional<Rational> best;
  for (const auto& m : s.members()) {
    Rational e = expected_value(f, m);
    if (!best || (dir == Extremum::kMin ? e < *best : e > *best)) best = std::move(e);
  }
  return *best;
}

template <class T, class F>
Rational ex_min(F&& f, const ProcessSet<T>& s) {
  return ex_extremum(std::forward<F>(f), s, Extremum::kMin);
}

template <class T, class F>
Rational ex_max(F&& f, const ProcessSet<T>& s) {
  return ex_extremum(std::forward<F>(f), s, Extremum::kMax);
}

/// Values reachable with positive probability in some member.
template <std::totally_ordered T>
std::vector<T> support_of(const ProcessSet<T>& s) {
  std::vector<T> out;
  for (const auto& m : s.members())
    for (const auto& e : m.entries())
      if (e.prob.sign() > 0) out.push_back(e.value);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// max |f(v)| over the support. Finite sets always have one, so the
/// optional is always engaged; it stays optional to mirror the notion of
/// "bounded on the support".
template <std::totally_ordered T, class F>
std::optional<Rational> bounded_on_support(F&& f, const ProcessSet<T>& s) {
  Rational c;
  for (const auto& v : support_of(s)) c = std::max(c, f(v).abs());
  return c;
}

template <std::totally_ordered T>
struct SubsetPResult {
  bool holds = false;
  /// Per member of the left set, weights over the right set's members.
  std::vector<std::vector<Rational>> weights;
  /// First left member outside the hull and a function separating it.
  std::optional<std::size_t> failing_member;
  std::map<T, Rational> separator;
};

/// Decides a subset_p b by exact hull membership of every member of a.
template <std::totally_ordered T>
SubsetPResult<T> decide_subset_p(const ProcessSet<T>& a, const ProcessSet<T>& b) {
  std::vector<T> coords = support_of(union_set(a, b));
  auto coord_of = [&](const T& v) {
    return static_cast<std::size_t>(std::lower_bound(coords.begin(), coords.end(), v) - coords.begin());
  };
  auto vectorize = [&](const IndexedValuation<T>& m) {
    std::vector<Rational> x(coords.size());
    for (const auto& e : m.entries())
      if (e.prob.sign() > 0) x[coord_of(e.value)] += e.prob;
    return x;
  };
  std::vector<std::vector<Rational>> points;
  points.reserve(b.size());
  for (const auto& m : b.members()) points.push_back(vectorize(m));

  SubsetPResult<T> result;
  result.holds = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto hull = lp::convex_hull_membership(points, vectorize(a.members()[i]));
    if (hull.member) {
      result.weights.push_back(std::move(hull.weights));
      continue;
    }
    result.holds = false;
    result.failing_member = i;
    for (std::size_t c = 0; c < coords.size(); ++c)
      if (!hull.separator[c].is_zero()) result.separator.emplace(coords[c], hull.separator[c]);
    result.weights.clear();
    break;
  }
  return result;
}

template <std::totally_ordered T>
bool subset_p(const ProcessSet<T>& a, const ProcessSet<T>& b) {
  return decide_subset_p(a, b).holds;
}

/// A nondeterministic computation kept as a term so that extrema can be
/// computed compositionally without enumerating every member.
///
/// Extrema distribute over the constructors: a union takes the better side,
/// a probabilistic choice mixes both sides' extrema (members pair
/// independently), and a bind reduces to the extremum of
/// v -> extremum(f, k(v)) over the outer term, because per-index selection
/// lets every index pick its own best continuation. materialize() builds
/// the explicit ProcessSet for cross-checking on small instances.
template <class T>
class SpecTerm {
 public:
  using value_type = T;
  using Objective = std::function<Rational(const T&)>;
  using ExtremumFn = std::function<Rational(const Objective&, Extremum)>;
  using MaterializeFn = std::function<ProcessSet<T>()>;

  SpecTerm(ExtremumFn ex, MaterializeFn mat) : ex_(std::move(ex)), mat_(std::move(mat)) {}

  static SpecTerm ret(T v) {
    return SpecTerm([v](const Objective& f, Extremum) { return f(v); }, [v] { return ret_set(v); });
  }

  static SpecTerm choose(const std::vector<SpecTerm>& alternatives) {
    if (alternatives.empty()) throw InvalidArgument("nondeterministic choice over no alternatives");
    return SpecTerm(
        [alternatives](const Objective& f, Extremum dir) {
          std::optional<Rational> best;
          for (const auto& alt : alternatives) {
            Rational e = alt.extremum(f, dir);
            if (!best || (dir == Extremum::kMin ? e < *best : e > *best)) best = std::move(e);
          }
          return *best;
        },
        [alternatives] {
          std::vector<ProcessSet<T>> parts;
          for (const auto& alt : alternatives) parts.push_back(alt.materialize());
          return union_of(parts);
        });
  }

  static SpecTerm pchoice(const SpecTerm& a, const Rational& p, const SpecTerm& b) {
    require_probability(p);
    return SpecTerm(
        [a, p, b](const Objective& f, Extremum dir) {
          return p * a.extremum(f, dir) + (Rational(1) - p) * b.extremum(f, dir);
        },
        [a, p, b] { return pchoice_set(a.materialize(), p, b.materialize()); });
  }

  template <class A>
  static SpecTerm bind(const SpecTerm<A>& outer, std::function<SpecTerm(const A&)> k) {
    return SpecTerm(
        [outer, k](const Objective& f, Extremum dir) {
          return outer.extremum([&](const A& v) { return k(v).extremum(f, dir); }, dir);
        },
        [outer, k] { return bind_set(outer.materialize(), [&](const A& v) { return k(v).materialize(); }); });
  }

  Rational extremum(const Objective& f, Extremum dir) const { return ex_(f, dir); }
  Rational ex_min(const Objective& f) const { return ex_(f, Extremum::kMin); }
  Rational ex_max(const Objective& f) const { return ex_(f, Extremum::kMax); }
  ProcessSet<T> materialize() const { return mat_(); }

 private:
  ExtremumFn ex_;
  MaterializeFn mat_;
};

}  // namespace randconc

#endif  // RANDCONC_NDSET_HPP
