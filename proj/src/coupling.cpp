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

#include "randconc/coupling.hpp"

namespace randconc {

const char* clause_name(CouplingClause c) {
  switch (c) {
    case CouplingClause::kNone:
      return "none";
    case CouplingClause::kLeftMarginal:
      return "left-marginal";
    case CouplingClause::kRightMarginal:
      return "right-marginal";
    case CouplingClause::kPredicate:
      return "predicate";
    case CouplingClause::kPickContained:
      return "pick-contained";
  }
  return "unknown";
}

}  // namespace randconc
