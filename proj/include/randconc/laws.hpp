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

// Seeded property suites for the algebraic laws of indexed valuations and
// process sets, and the randomized-function oracle for subset_p.
//
// Rules with premises are exercised on instances constructed to satisfy the
// premises (relabelings, unions with extra members, convex mixtures), so
// every case checks the conclusion rather than passing vacuously.

#ifndef RANDCONC_LAWS_HPP
#define RANDCONC_LAWS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace randconc::laws {

struct LawOutcome {
  std::string law;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string witness;  // first failing instance
};

struct SuiteReport {
  std::string suite;
  std::vector<LawOutcome> laws;
  bool passed() const;
};

/// equational, ordering, prob-equiv, subset-p, extrema, monad, ival,
/// coupling.
const std::vector<std::string>& suite_names();

/// Runs every law of `suite` on `cases` instances. Deterministic per seed.
SuiteReport run_suite(const std::string& suite, std::size_t cases, std::uint64_t seed);

struct FalsifierReport {
  std::size_t pairs = 0;
  std::size_t lp_yes = 0;
  std::size_t lp_no = 0;
  std::size_t agreements = 0;
  std::string first_disagreement;
  bool passed() const { return agreements == pairs; }
};

/// Compares the exact subset_p decision with random bounded functions: an
/// LP "yes" must survive `functions` random functions, and an LP "no" must
/// yield a separating function that actually violates the max-expectation
/// order.
FalsifierReport subset_p_falsifier(std::size_t pairs, std::size_t functions, std::uint64_t seed);

}  // namespace randconc::laws

#endif  // RANDCONC_LAWS_HPP
