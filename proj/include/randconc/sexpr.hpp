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

#ifndef RANDCONC_SEXPR_HPP
#define RANDCONC_SEXPR_HPP

#include <string>
#include <string_view>
#include <vector>

namespace randconc {

/// Minimal s-expression tree: an atom or a parenthesized list. Comments run
/// from ';' to end of line.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_atom(std::string_view a) const { return !is_list && atom == a; }
  /// True for a list whose first item is the atom `head`.
  bool has_head(std::string_view head) const {
    return is_list && !items.empty() && items.front().is_atom(head);
  }
};

/// Reads every top-level form in `text`. Throws ParseError.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Reads exactly one top-level form.
SExpr read_sexpr(std::string_view text);

std::string to_string(const SExpr& s);

}  // namespace randconc

#endif  // RANDCONC_SEXPR_HPP
