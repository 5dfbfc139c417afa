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

// The case studies: three approximate counters, their monadic
// specification, and a two-level lock-per-node skip list.
//
// Programs are built as ASTs from s-expression templates. A counter program
// allocates the counter, forks one worker per thread, waits on a per-worker
// done flag and then reads; the join-before-read shape is what the
// parallel-composition client needs.

#ifndef RANDCONC_MODELS_HPP
#define RANDCONC_MODELS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "randconc/coupling.hpp"
#include "randconc/lang.hpp"
#include "randconc/ndset.hpp"

namespace randconc::models {

using lang::Expr;

enum class CounterKind { kUnbiased, kMorris, kDlm };

struct CounterParams {
  CounterKind kind = CounterKind::kUnbiased;
  std::int64_t max = 2;            // unbiased counter cap
  unsigned bits = 3;               // random bits per DLM increment
  std::size_t threads = 1;
  std::size_t incrs_per_thread = 1;
  std::int64_t initial = 0;        // starting counter cell
};

const char* counter_name(CounterKind k);
CounterKind counter_kind_from_name(const std::string& name);

/// (fun (l) ...) implementing one increment.
Expr unbiased_incr(std::int64_t max);
Expr morris_incr();
Expr dlm_incr(unsigned bits);
/// The DLM retry loop (rec aux (l b) ...).
Expr dlm_incr_aux();

/// (fun (l) ...) implementing read: load for the unbiased counter, 2^k - 1
/// for the other two.
Expr unbiased_read();
Expr morris_read();

Expr counter_incr(const CounterParams& p);
Expr counter_read(const CounterParams& p);

/// Allocates the counter at location 0, forks the workers, joins, reads.
Expr counter_program(const CounterParams& p);

/// Location of the counter cell in counter_program.
constexpr std::size_t kCounterCell = 0;

/// Two workers run countTrue over lb1 and lb2 against one unbiased counter,
/// then the main thread joins both and reads.
Expr count_true_client(const std::vector<bool>& lb1, const std::vector<bool>& lb2, std::int64_t max);

/// Lists as nested pairs ending in unit.
Expr bool_list(const std::vector<bool>& bs);

// Monadic specification.

using Spec = SpecTerm<std::int64_t>;
using SpecPair = SpecTerm<std::pair<std::int64_t, std::int64_t>>;

Spec approx_incr(std::int64_t max);
Spec approx_n(std::size_t n, std::int64_t l, std::int64_t max);
SpecPair approx_n_prime(std::size_t n, std::int64_t t, std::int64_t l, std::int64_t max);

/// The increment step at counter value k coupled with approxIncr: the flip
/// (true with probability 1/(k+1)) against (k+1) or 0. Built by P-Choice of
/// two Ret couplings, then Equiv onto the materialized approxIncr(max).
using CounterCoupling = Coupled<bool, std::int64_t>;
CounterCoupling counter_coupling(std::int64_t k, std::int64_t max);

enum class WitnessMutation { kMassPerturbation, kPairDeletion, kPickCorruption };
const char* mutation_name(WitnessMutation m);

/// A broken copy of a counter witness. Mass moves 1/100 between the two
/// support pairs; deletion drops the true pair and gives its mass to the
/// false one; corruption shifts every pick value by one.
CouplingWitness<bool, std::int64_t> mutate_counter_witness(const CouplingWitness<bool, std::int64_t>& w,
                                                         WitnessMutation m);

/// The clause each mutation must trip.
CouplingClause expected_clause(WitnessMutation m);

// Skip list.

using KeyList = std::vector<std::int64_t>;
using SkipState = std::pair<KeyList, KeyList>;  // (sorted top, sorted bottom)

constexpr std::int64_t kIntMin = -1000000;
constexpr std::int64_t kIntMax = 1000000;

SpecTerm<SkipState> skiplist_spec(const KeyList& l, const KeyList& tl, const KeyList& bl);

std::int64_t topcost(const KeyList& tl, std::int64_t k);
std::int64_t rettop(const KeyList& tl, std::int64_t k);
std::int64_t botcost(const KeyList& tl, const KeyList& bl, std::int64_t k);
std::int64_t skipcost(const KeyList& tl, const KeyList& bl, std::int64_t k);

/// 1 + n/2 + 2(1 - 1/2^(n+1)).
Rational skipcost_bound(std::size_t n);

/// Let-binds the skip-list library (new, add, mem and helpers) around body.
Expr with_skiplist_library(const Expr& body, bool early_flip = false);

/// A program that creates a list, runs one adding worker per key group
/// (forked when there is more than one group), joins, and returns
/// (pair head (mem head query)) where mem yields (pair found comparisons).
Expr skiplist_program(const std::vector<KeyList>& groups, std::int64_t query, bool early_flip = false);

/// Walks the top and bottom lists from a head node value.
SkipState skiplist_contents(const lang::State& s, const Expr& head);

}  // namespace randconc::models

#endif  // RANDCONC_MODELS_HPP
