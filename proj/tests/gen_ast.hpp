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

// Random expression trees for parser round-trip tests.

#ifndef RANDCONC_TESTS_GEN_AST_HPP
#define RANDCONC_TESTS_GEN_AST_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "randconc/lang.hpp"

namespace randconc::testing {

class AstGen {
 public:
  explicit AstGen(std::uint64_t seed) : rng_(seed) {}

  lang::Expr expr(int depth) {
    using lang::Expr;
    if (depth <= 0) return leaf();
    switch (pick(0, 24)) {
      case 0: return leaf();
      case 1: return Expr::rec(chance() ? "_" : name(), binder(), expr(depth - 1));
      case 2: return Expr::app(expr(depth - 1), expr(depth - 1));
      case 3: return Expr::let(binder(), expr(depth - 1), expr(depth - 1));
      case 4: return Expr::seq(expr(depth - 1), expr(depth - 1));
      case 5: return Expr::if_(expr(depth - 1), expr(depth - 1), expr(depth - 1));
      case 6: return Expr::flip(expr(depth - 1), expr(depth - 1));
      case 7: return Expr::alloc(expr(depth - 1));
      case 8: return Expr::load(expr(depth - 1));
      case 9: return Expr::store(expr(depth - 1), expr(depth - 1));
      case 10: return Expr::faa(expr(depth - 1), expr(depth - 1));
      case 11: return Expr::cas(expr(depth - 1), expr(depth - 1), expr(depth - 1));
      case 12: return Expr::min(expr(depth - 1), expr(depth - 1));
      case 13: return Expr::fork(expr(depth - 1));
      case 14: return Expr::pair(expr(depth - 1), expr(depth - 1));
      case 15: return Expr::fst(expr(depth - 1));
      case 16: return Expr::snd(expr(depth - 1));
      case 17: return Expr::not_(expr(depth - 1));
      case 18: return Expr::wait(expr(depth - 1));
      default: {
        static const lang::BinOp ops[] = {lang::BinOp::kAdd, lang::BinOp::kSub, lang::BinOp::kMul,
                                          lang::BinOp::kDiv, lang::BinOp::kMod, lang::BinOp::kLt,
                                          lang::BinOp::kLe,  lang::BinOp::kEq,  lang::BinOp::kShl};
        return Expr::binop(ops[pick(0, 8)], expr(depth - 1), expr(depth - 1));
      }
    }
  }

 private:
  lang::Expr leaf() {
    using lang::Expr;
    switch (pick(0, 5)) {
      case 0: return Expr::unit();
      case 1: return Expr::integer(pick(-1000, 1000));
      case 2: return Expr::boolean(chance());
      case 3: return Expr::loc(pick(0, 20));
      default: return Expr::var(name());
    }
  }

  std::string name() {
    static const std::vector<std::string> names = {"x", "y", "l", "acc", "f", "node", "k2", "go_on"};
    return names[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(names.size()) - 1))];
  }
  std::string binder() { return pick(0, 5) == 0 ? "_" : name(); }

  std::int64_t pick(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool chance() { return pick(0, 1) == 1; }

  std::mt19937_64 rng_;
};

}  // namespace randconc::testing

#endif  // RANDCONC_TESTS_GEN_AST_HPP
