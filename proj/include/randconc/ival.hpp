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

// Finite indexed valuations with exact rational weights.
//
// An indexed valuation is a finite family of (index, value, probability)
// triples whose probabilities sum to one. Unlike a distribution, two distinct
// indices may decode to the same value, and the structural equivalence only
// permits relabelling indices. Entries of probability zero are kept in the
// representation but lie outside the indicial support, so every semantic
// relation ignores them.
//
// Only finite index sets are supported. Indices are paths of small integers
// forming a prefix-free code; `ret` uses the empty path, probabilistic choice
// prefixes a 0/1 tag and bind concatenates the outer and inner paths, which
// keeps the code prefix-free and therefore the indices distinct.
//
// Structural equivalence is decided by comparing the multisets of
// (value, probability) pairs over the indicial support. For finite supports a
// relabelling bijection exists exactly when those multisets coincide: sort
// both sides and pair entries positionally for one direction, and a bijection
// preserving value and weight maps each pair to an equal pair for the other.

#ifndef RANDCONC_IVAL_HPP
#define RANDCONC_IVAL_HPP

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "randconc/error.hpp"
#include "randconc/rational.hpp"

namespace randconc {

using Index = std::vector<std::uint32_t>;

std::string index_to_string(const Index& idx);
Index index_from_string(const std::string& text);

template <class T>
struct Entry {
  Index index;
  T value;
  Rational prob;
};

template <class T>
class IndexedValuation {
 public:
  using value_type = T;

  /// Validates every invariant: nonempty, probabilities in [0,1] summing to
  /// exactly one, indices distinct and prefix-free.
  static IndexedValuation from_entries(std::vector<Entry<T>> entries) {
    IndexedValuation v(std::move(entries));
    v.validate_indices();
    v.check_mass();
    return v;
  }

  /// Builds a valuation over fresh indices 0..n-1.
  static IndexedValuation from_weights(std::vector<std::pair<T, Rational>> weighted) {
    std::vector<Entry<T>> entries;
    entries.reserve(weighted.size());
    std::uint32_t i = 0;
    for (auto& [v, p] : weighted) entries.push_back(Entry<T>{Index{i++}, std::move(v), std::move(p)});
    return from_entries(std::move(entries));
  }

  const std::vector<Entry<T>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Number of indices with strictly positive probability.
  std::size_t support_size() const {
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                  [](const Entry<T>& e) { return e.prob.sign() > 0; }));
  }

  /// Values reachable with positive probability, sorted and deduplicated.
  std::vector<T> support() const
    requires std::totally_ordered<T>
  {
    std::vector<T> out;
    for (const auto& e : entries_)
      if (e.prob.sign() > 0) out.push_back(e.value);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Sum of all weights; exactly one for every valid valuation.
  Rational mass() const {
    Rational s;
    for (const auto& e : entries_) s += e.prob;
    return s;
  }

  /// Unchecked constructor for internal combinators whose output is valid by
  /// construction; mass is still asserted.
  static IndexedValuation trusted(std::vector<Entry<T>> entries) {
    IndexedValuation v(std::move(entries));
    v.check_mass();
    return v;
  }

 private:
  explicit IndexedValuation(std::vector<Entry<T>> entries) : entries_(std::move(entries)) {}

  void check_mass() const {
    if (entries_.empty()) throw InvalidArgument("indexed valuation must have at least one entry");
    Rational s;
    for (const auto& e : entries_) {
      if (!e.prob.is_probability())
        throw InvalidArgument("entry probability " + e.prob.str() + " outside [0,1]");
      s += e.prob;
    }
    if (s != Rational(1)) throw InvariantViolation("indexed valuation mass is " + s.str() + ", not 1");
  }

  void validate_indices() const {
    std::vector<const Index*> sorted;
    sorted.reserve(entries_.size());
    for (const auto& e : entries_) sorted.push_back(&e.index);
    std::sort(sorted.begin(), sorted.end(), [](const Index* a, const Index* b) { return *a < *b; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      const Index& a = *sorted[i];
      const Index& b = *sorted[i + 1];
      if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin()))
        throw InvalidArgument("indices must be distinct and prefix-free ('" + index_to_string(a) + "' vs '" +
                              index_to_string(b) + "')");
    }
  }

  std::vector<Entry<T>> entries_;
};

template <class T>
struct Distribution {
  std::map<T, Rational> weights;
  friend bool operator==(const Distribution&, const Distribution&) = default;
};

template <class T>
IndexedValuation<T> ret(T v) {
  std::vector<Entry<T>> e;
  e.push_back(Entry<T>{Index{}, std::move(v), Rational(1)});
  return IndexedValuation<T>::trusted(std::move(e));
}

inline void require_probability(const Rational& p) {
  if (!p.is_probability()) throw InvalidArgument("probability " + p.str() + " outside [0,1]");
}

/// Left entries tagged 0 and scaled by p, right entries tagged 1 and scaled
/// by 1-p.
template <class T>
IndexedValuation<T> pchoice(const IndexedValuation<T>& a, const Rational& p, const IndexedValuation<T>& b) {
  require_probability(p);
  const Rational q = Rational(1) - p;
  std::vector<Entry<T>> out;
  out.reserve(a.size() + b.size());
  auto tagged = [](std::uint32_t tag, const Index& i) {
    Index r;
    r.reserve(i.size() + 1);
    r.push_back(tag);
    r.insert(r.end(), i.begin(), i.end());
    return r;
  };
  for (const auto& e : a.entries()) out.push_back(Entry<T>{tagged(0, e.index), e.value, e.prob * p});
  for (const auto& e : b.entries()) out.push_back(Entry<T>{tagged(1, e.index), e.value, e.prob * q});
  return IndexedValuation<T>::trusted(std::move(out));
}

inline Index concat(const Index& a, const Index& b) {
  Index r;
  r.reserve(a.size() + b.size());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

/// Dependent-pair bind: index (i, j), weight p_a(i) * p_f(j), value from f
/// at j.
template <class A, class F>
auto bind(const IndexedValuation<A>& a, F&& f) {
  using R = std::invoke_result_t<F&, const A&>;
  using B = typename R::value_type;
  std::vector<Entry<B>> out;
  for (const auto& e : a.entries()) {
    R inner = f(e.value);
    for (const auto& g : inner.entries())
      out.push_back(Entry<B>{concat(e.index, g.index), g.value, e.prob * g.prob});
  }
  return IndexedValuation<B>::trusted(std::move(out));
}

/// bind(a, ret . f) without the intermediate valuations.
template <class A, class F>
auto fmap(const IndexedValuation<A>& a, F&& f) {
  using B = std::decay_t<std::invoke_result_t<F&, const A&>>;
  std::vector<Entry<B>> out;
  out.reserve(a.size());
  for (const auto& e : a.entries()) out.push_back(Entry<B>{e.index, f(e.value), e.prob});
  return IndexedValuation<B>::trusted(std::move(out));
}

/// Sorted (value, prob) pairs over the indicial support; equal exactly for
/// structurally equivalent valuations.
template <std::totally_ordered T>
std::vector<std::pair<T, Rational>> canonical(const IndexedValuation<T>& a) {
  std::vector<std::pair<T, Rational>> out;
  out.reserve(a.size());
  for (const auto& e : a.entries())
    if (e.prob.sign() > 0) out.emplace_back(e.value, e.prob);
  std::sort(out.begin(), out.end());
  return out;
}

template <std::totally_ordered T>
bool equiv(const IndexedValuation<T>& a, const IndexedValuation<T>& b) {
  if (a.support_size() != b.support_size()) return false;
  return canonical(a) == canonical(b);
}

/// The collapse to an ordinary distribution (summing weights of equal
/// values); zero-weight values are absent.
template <std::totally_ordered T>
Distribution<T> to_distribution(const IndexedValuation<T>& a) {
  Distribution<T> d;
  for (const auto& e : a.entries())
    if (e.prob.sign() > 0) d.weights[e.value] += e.prob;
  return d;
}

/// Equality of expectations for every bounded function, decided as equality
/// of the collapsed distributions.
template <std::totally_ordered T>
bool prob_equiv(const IndexedValuation<T>& a, const IndexedValuation<T>& b) {
  return to_distribution(a) == to_distribution(b);
}

template <class T, class F>
Rational expected_value(F&& f, const IndexedValuation<T>& a) {
  Rational s;
  for (const auto& e : a.entries())
    if (e.prob.sign() > 0) s += f(e.value) * e.prob;
  return s;
}

/// Renames every index through `rename`; throws if the result is not a
/// valid index set.
template <class T, class F>
IndexedValuation<T> relabel(const IndexedValuation<T>& a, F&& rename) {
  std::vector<Entry<T>> out;
  out.reserve(a.size());
  for (const auto& e : a.entries()) out.push_back(Entry<T>{rename(e.index), e.value, e.prob});
  return IndexedValuation<T>::from_entries(std::move(out));
}

/// First and second projections of a valuation over pairs.
template <class A, class B>
IndexedValuation<A> first_marginal(const IndexedValuation<std::pair<A, B>>& j) {
  return fmap(j, [](const std::pair<A, B>& xy) { return xy.first; });
}

template <class A, class B>
IndexedValuation<B> second_marginal(const IndexedValuation<std::pair<A, B>>& j) {
  return fmap(j, [](const std::pair<A, B>& xy) { return xy.second; });
}

}  // namespace randconc

#endif  // RANDCONC_IVAL_HPP
