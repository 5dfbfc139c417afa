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

#include <charconv>
#include <set>
#include <sstream>

#include "randconc/error.hpp"
#include "randconc/lang.hpp"
#include "randconc/sexpr.hpp"

namespace randconc::lang {

namespace {

const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k = {
      "fun", "rec",  "let", "seq",  "if",  "flip", "ref", "!",   ":=", "faa", "cas", "min", "fork", "pair", "fst",
      "snd", "not", "wait", "loc", "+",   "-",    "*",   "/",   "mod", "<",  "<=",  "=",   "shl", "true", "false", "_"};
  return k;
}

struct BinOpName {
  std::string_view symbol;
  BinOp op;
};

constexpr BinOpName kBinOps[] = {{"+", BinOp::kAdd}, {"-", BinOp::kSub},  {"*", BinOp::kMul},
                                 {"/", BinOp::kDiv}, {"mod", BinOp::kMod}, {"<", BinOp::kLt},
                                 {"<=", BinOp::kLe}, {"=", BinOp::kEq},   {"shl", BinOp::kShl}};

std::optional<std::int64_t> as_integer(std::string_view a) {
  if (a.empty()) return std::nullopt;
  std::size_t start = a[0] == '-' ? 1 : 0;
  if (start == a.size()) return std::nullopt;
  for (std::size_t i = start; i < a.size(); ++i)
    if (a[i] < '0' || a[i] > '9') return std::nullopt;
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
  if (ec != std::errc() || p != a.data() + a.size()) return std::nullopt;
  return v;
}

bool valid_identifier(std::string_view a) {
  if (a.empty() || is_keyword(a) || as_integer(a)) return false;
  if (a[0] >= '0' && a[0] <= '9') return false;
  return true;
}

[[noreturn]] void fail(const SExpr& s, const std::string& msg) { throw ParseError(msg, s.line, s.column); }

std::string identifier(const SExpr& s, bool allow_wildcard) {
  if (s.is_list) fail(s, "expected an identifier");
  if (allow_wildcard && s.atom == "_") return s.atom;
  if (!valid_identifier(s.atom)) fail(s, "'" + s.atom + "' is not a valid identifier");
  return s.atom;
}

std::vector<std::string> params(const SExpr& s) {
  if (!s.is_list) fail(s, "expected a parameter list");
  std::vector<std::string> out;
  if (s.items.empty()) return {"_"};
  for (const auto& p : s.items) out.push_back(identifier(p, true));
  return out;
}

Expr from_sexpr(const SExpr& s);

void arity(const SExpr& s, std::size_t n) {
  if (s.items.size() != n + 1)
    fail(s, "'" + s.items[0].atom + "' expects " + std::to_string(n) + " argument(s), got " +
                std::to_string(s.items.size() - 1));
}

Expr kid(const SExpr& s, std::size_t i) { return from_sexpr(s.items[i]); }

Expr curry(const std::string& self, const std::vector<std::string>& ps, Expr body) {
  for (std::size_t i = ps.size(); i-- > 1;) body = Expr::fun(ps[i], std::move(body));
  return Expr::rec(self, ps[0], std::move(body));
}

Expr from_sexpr(const SExpr& s) {
  if (!s.is_list) {
    if (auto n = as_integer(s.atom)) return Expr::integer(*n);
    if (s.atom == "true") return Expr::boolean(true);
    if (s.atom == "false") return Expr::boolean(false);
    return Expr::var(identifier(s, false));
  }
  if (s.items.empty()) return Expr::unit();
  const SExpr& head = s.items[0];
  if (!head.is_list && is_keyword(head.atom) && head.atom != "true" && head.atom != "false") {
    const std::string& h = head.atom;
    if (h == "fun") {
      arity(s, 2);
      return curry("_", params(s.items[1]), kid(s, 2));
    }
    if (h == "rec") {
      arity(s, 3);
      return curry(identifier(s.items[1], false), params(s.items[2]), kid(s, 3));
    }
    if (h == "let") {
      arity(s, 3);
      return Expr::let(identifier(s.items[1], true), kid(s, 2), kid(s, 3));
    }
    if (h == "seq") {
      if (s.items.size() < 3) fail(s, "'seq' expects at least 2 arguments");
      Expr e = kid(s, s.items.size() - 1);
      for (std::size_t i = s.items.size() - 1; i-- > 1;) e = Expr::seq(kid(s, i), std::move(e));
      return e;
    }
    if (h == "if") {
      arity(s, 3);
      return Expr::if_(kid(s, 1), kid(s, 2), kid(s, 3));
    }
    if (h == "loc") {
      arity(s, 1);
      auto n = s.items[1].is_list ? std::nullopt : as_integer(s.items[1].atom);
      if (!n || *n < 0) fail(s.items[1], "'loc' expects a nonnegative integer literal");
      return Expr::loc(*n);
    }
    if (h == "flip") return arity(s, 2), Expr::flip(kid(s, 1), kid(s, 2));
    if (h == "ref") return arity(s, 1), Expr::alloc(kid(s, 1));
    if (h == "!") return arity(s, 1), Expr::load(kid(s, 1));
    if (h == ":=") return arity(s, 2), Expr::store(kid(s, 1), kid(s, 2));
    if (h == "faa") return arity(s, 2), Expr::faa(kid(s, 1), kid(s, 2));
    if (h == "cas") return arity(s, 3), Expr::cas(kid(s, 1), kid(s, 2), kid(s, 3));
    if (h == "min") return arity(s, 2), Expr::min(kid(s, 1), kid(s, 2));
    if (h == "fork") return arity(s, 1), Expr::fork(kid(s, 1));
    if (h == "pair") return arity(s, 2), Expr::pair(kid(s, 1), kid(s, 2));
    if (h == "fst") return arity(s, 1), Expr::fst(kid(s, 1));
    if (h == "snd") return arity(s, 1), Expr::snd(kid(s, 1));
    if (h == "not") return arity(s, 1), Expr::not_(kid(s, 1));
    if (h == "wait") return arity(s, 1), Expr::wait(kid(s, 1));
    for (const auto& b : kBinOps)
      if (h == b.symbol) return arity(s, 2), Expr::binop(b.op, kid(s, 1), kid(s, 2));
    fail(head, "'" + h + "' cannot head an expression");
  }
  if (s.items.size() < 2) fail(s, "application needs at least one argument");
  Expr e = kid(s, 0);
  for (std::size_t i = 1; i < s.items.size(); ++i) e = Expr::app(std::move(e), kid(s, i));
  return e;
}

SExpr atom(std::string a) {
  SExpr s;
  s.atom = std::move(a);
  return s;
}

SExpr list(std::vector<SExpr> items) {
  SExpr s;
  s.is_list = true;
  s.items = std::move(items);
  return s;
}

SExpr to_sexpr(const Expr& e) {
  const auto& k = e.kids();
  auto form = [&](std::string head) {
    std::vector<SExpr> items{atom(std::move(head))};
    for (const auto& c : k) items.push_back(to_sexpr(c));
    return list(std::move(items));
  };
  switch (e.kind()) {
    case Kind::kUnit:
      return list({});
    case Kind::kInt:
      return atom(std::to_string(e.number()));
    case Kind::kBool:
      return atom(e.boolean_value() ? "true" : "false");
    case Kind::kLoc:
      return list({atom("loc"), atom(std::to_string(e.number()))});
    case Kind::kVar:
      return atom(e.name());
    case Kind::kRec: {
      std::vector<SExpr> ps{atom(e.param())};
      Expr body = k[0];
      while (body.kind() == Kind::kRec && body.name() == "_") {
        ps.push_back(atom(body.param()));
        body = body.kids()[0];
      }
      if (e.name() == "_") return list({atom("fun"), list(std::move(ps)), to_sexpr(body)});
      return list({atom("rec"), atom(e.name()), list(std::move(ps)), to_sexpr(body)});
    }
    case Kind::kApp: {
      std::vector<Expr> args;
      Expr f = e;
      while (f.kind() == Kind::kApp) {
        args.push_back(f.kids()[1]);
        f = f.kids()[0];
      }
      std::vector<SExpr> items{to_sexpr(f)};
      for (auto it = args.rbegin(); it != args.rend(); ++it) items.push_back(to_sexpr(*it));
      return list(std::move(items));
    }
    case Kind::kLet: {
      if (e.name() != "_") return list({atom("let"), atom(e.name()), to_sexpr(k[0]), to_sexpr(k[1])});
      std::vector<SExpr> items{atom("seq")};
      Expr cur = e;
      while (cur.kind() == Kind::kLet && cur.name() == "_") {
        items.push_back(to_sexpr(cur.kids()[0]));
        cur = cur.kids()[1];
      }
      items.push_back(to_sexpr(cur));
      return list(std::move(items));
    }
    case Kind::kIf:
      return form("if");
    case Kind::kFlip:
      return form("flip");
    case Kind::kAlloc:
      return form("ref");
    case Kind::kLoad:
      return form("!");
    case Kind::kStore:
      return form(":=");
    case Kind::kFaa:
      return form("faa");
    case Kind::kCas:
      return form("cas");
    case Kind::kMin:
      return form("min");
    case Kind::kFork:
      return form("fork");
    case Kind::kPair:
      return form("pair");
    case Kind::kFst:
      return form("fst");
    case Kind::kSnd:
      return form("snd");
    case Kind::kBinOp:
      return form(std::string(binop_symbol(e.op())));
    case Kind::kNot:
      return form("not");
    case Kind::kWait:
      return form("wait");
  }
  return list({});
}

void layout(const SExpr& s, std::size_t indent, std::size_t width, std::string& out) {
  std::string flat = to_string(s);
  if (!s.is_list || indent + flat.size() <= width || s.items.size() < 2) {
    out += flat;
    return;
  }
  // Keep the head and any binder operands on the first line.
  std::size_t inline_count = 1;
  const SExpr& head = s.items[0];
  if (head.is_atom("fun") || head.is_atom("let")) inline_count = 2;
  if (head.is_atom("rec")) inline_count = 3;
  inline_count = std::min(inline_count, s.items.size() - 1);
  out += '(';
  std::size_t col = indent + 1;
  for (std::size_t i = 0; i < inline_count; ++i) {
    if (i) {
      out += ' ';
      ++col;
    }
    std::string piece = to_string(s.items[i]);
    out += piece;
    col += piece.size();
  }
  for (std::size_t i = inline_count; i < s.items.size(); ++i) {
    out += '\n';
    out.append(indent + 2, ' ');
    layout(s.items[i], indent + 2, width, out);
  }
  out += ')';
}

}  // namespace

bool is_keyword(std::string_view word) { return keywords().count(word) > 0; }

Expr parse_program(std::string_view text) { return from_sexpr(read_sexpr(text)); }

std::string unparse(const Expr& e) { return to_string(to_sexpr(e)); }

std::string pretty(const Expr& e, std::size_t width) {
  std::string out;
  layout(to_sexpr(e), 0, width, out);
  return out;
}

std::string to_string(const Config& c) {
  std::ostringstream os;
  os << "threads:";
  for (std::size_t i = 0; i < c.threads.size(); ++i) os << "\n  [" << i << "] " << unparse(c.threads[i]);
  os << "\nheap:";
  for (std::size_t i = 0; i < c.state.heap.size(); ++i) os << "\n  " << i << " -> " << unparse(c.state.heap[i]);
  return os.str();
}

}  // namespace randconc::lang
