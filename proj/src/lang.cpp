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

#include "randconc/lang.hpp"

#include <algorithm>
#include <utility>

#include "randconc/error.hpp"

namespace randconc::lang {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const Node& unit_node() {
  static const Node n{};
  return n;
}

}  // namespace

std::string_view binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::kAdd:
      return "+";
    case BinOp::kSub:
      return "-";
    case BinOp::kMul:
      return "*";
    case BinOp::kDiv:
      return "/";
    case BinOp::kMod:
      return "mod";
    case BinOp::kLt:
      return "<";
    case BinOp::kLe:
      return "<=";
    case BinOp::kEq:
      return "=";
    case BinOp::kShl:
      return "shl";
  }
  return "?";
}

Expr Expr::make(Node n) {
  std::size_t h = mix(static_cast<std::size_t>(n.kind), static_cast<std::size_t>(n.op));
  h = mix(h, std::hash<std::int64_t>{}(n.number));
  h = mix(h, std::hash<std::string>{}(n.name));
  h = mix(h, std::hash<std::string>{}(n.param));
  bool vars = n.kind == Kind::kVar;
  for (const auto& k : n.kids) {
    h = mix(h, k.hash());
    vars = vars || k.node()->has_vars;
  }
  n.hash = h;
  n.has_vars = vars;
  switch (n.kind) {
    case Kind::kUnit:
    case Kind::kInt:
    case Kind::kBool:
    case Kind::kLoc:
    case Kind::kRec:
      n.is_value = true;
      break;
    case Kind::kPair:
      n.is_value = n.kids[0].is_value() && n.kids[1].is_value();
      break;
    default:
      n.is_value = false;
  }
  return Expr(std::make_shared<const Node>(std::move(n)));
}

namespace {

Node with_kids(Kind k, std::vector<Expr> kids) {
  Node n;
  n.kind = k;
  n.kids = std::move(kids);
  return n;
}

}  // namespace

Expr Expr::unit() {
  static const Expr u = make(Node{});
  return u;
}

Expr::Expr() : node_(unit().node_) {}

Expr Expr::integer(std::int64_t v) {
  Node n;
  n.kind = Kind::kInt;
  n.number = v;
  return make(std::move(n));
}

Expr Expr::boolean(bool b) {
  Node n;
  n.kind = Kind::kBool;
  n.number = b ? 1 : 0;
  return make(std::move(n));
}

Expr Expr::loc(std::int64_t l) {
  Node n;
  n.kind = Kind::kLoc;
  n.number = l;
  return make(std::move(n));
}

Expr Expr::var(std::string name) {
  Node n;
  n.kind = Kind::kVar;
  n.name = std::move(name);
  return make(std::move(n));
}

Expr Expr::rec(std::string self, std::string param, Expr body) {
  Node n = with_kids(Kind::kRec, {std::move(body)});
  n.name = std::move(self);
  n.param = std::move(param);
  return make(std::move(n));
}

Expr Expr::app(Expr f, Expr a) { return make(with_kids(Kind::kApp, {std::move(f), std::move(a)})); }

Expr Expr::let(std::string name, Expr bound, Expr body) {
  Node n = with_kids(Kind::kLet, {std::move(bound), std::move(body)});
  n.name = std::move(name);
  return make(std::move(n));
}

Expr Expr::if_(Expr c, Expr t, Expr e) {
  return make(with_kids(Kind::kIf, {std::move(c), std::move(t), std::move(e)}));
}
Expr Expr::flip(Expr n1, Expr n2) { return make(with_kids(Kind::kFlip, {std::move(n1), std::move(n2)})); }
Expr Expr::alloc(Expr init) { return make(with_kids(Kind::kAlloc, {std::move(init)})); }
Expr Expr::load(Expr l) { return make(with_kids(Kind::kLoad, {std::move(l)})); }
Expr Expr::store(Expr l, Expr v) { return make(with_kids(Kind::kStore, {std::move(l), std::move(v)})); }
Expr Expr::faa(Expr l, Expr k) { return make(with_kids(Kind::kFaa, {std::move(l), std::move(k)})); }
Expr Expr::cas(Expr l, Expr expected, Expr desired) {
  return make(with_kids(Kind::kCas, {std::move(l), std::move(expected), std::move(desired)}));
}
Expr Expr::min(Expr a, Expr b) { return make(with_kids(Kind::kMin, {std::move(a), std::move(b)})); }
Expr Expr::fork(Expr body) { return make(with_kids(Kind::kFork, {std::move(body)})); }
Expr Expr::pair(Expr a, Expr b) { return make(with_kids(Kind::kPair, {std::move(a), std::move(b)})); }
Expr Expr::fst(Expr p) { return make(with_kids(Kind::kFst, {std::move(p)})); }
Expr Expr::snd(Expr p) { return make(with_kids(Kind::kSnd, {std::move(p)})); }
Expr Expr::binop(BinOp op, Expr a, Expr b) {
  Node n = with_kids(Kind::kBinOp, {std::move(a), std::move(b)});
  n.op = op;
  return make(std::move(n));
}
Expr Expr::not_(Expr b) { return make(with_kids(Kind::kNot, {std::move(b)})); }
Expr Expr::wait(Expr l) { return make(with_kids(Kind::kWait, {std::move(l)})); }

Kind Expr::kind() const { return node_ ? node_->kind : Kind::kUnit; }
bool Expr::is_value() const { return node_ ? node_->is_value : true; }
std::int64_t Expr::number() const { return node_ ? node_->number : 0; }
bool Expr::boolean_value() const { return number() != 0; }
BinOp Expr::op() const { return node_ ? node_->op : BinOp::kAdd; }
const std::string& Expr::name() const { return (node_ ? *node_ : unit_node()).name; }
const std::string& Expr::param() const { return (node_ ? *node_ : unit_node()).param; }
const std::vector<Expr>& Expr::kids() const { return (node_ ? *node_ : unit_node()).kids; }
std::size_t Expr::hash() const { return node_ ? node_->hash : unit().hash(); }

bool operator==(const Expr& a, const Expr& b) { return std::is_eq(a <=> b); }

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  const Node& x = a.node_ ? *a.node_ : *Expr::unit().node_;
  const Node& y = b.node_ ? *b.node_ : *Expr::unit().node_;
  if (&x == &y) return std::strong_ordering::equal;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (auto c = x.number <=> y.number; c != 0) return c;
  if (auto c = x.op <=> y.op; c != 0) return c;
  if (auto c = x.name.compare(y.name); c != 0) return c <=> 0;
  if (auto c = x.param.compare(y.param); c != 0) return c <=> 0;
  if (auto c = x.kids.size() <=> y.kids.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (auto c = x.kids[i] <=> y.kids[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Expr subst(const Expr& e, const std::string& x, const Expr& v) {
  if (x == "_" || !e.node()->has_vars) return e;
  switch (e.kind()) {
    case Kind::kVar:
      return e.name() == x ? v : e;
    case Kind::kRec:
      if (e.name() == x || e.param() == x) return e;
      return Expr::rec(e.name(), e.param(), subst(e.kids()[0], x, v));
    case Kind::kLet: {
      Expr bound = subst(e.kids()[0], x, v);
      Expr body = e.name() == x ? e.kids()[1] : subst(e.kids()[1], x, v);
      return Expr::let(e.name(), std::move(bound), std::move(body));
    }
    default: {
      Node n = *e.node();
      for (auto& k : n.kids) k = subst(k, x, v);
      return Expr::make(std::move(n));
    }
  }
}

std::strong_ordering operator<=>(const State& a, const State& b) {
  if (auto c = a.heap.size() <=> b.heap.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.heap.size(); ++i)
    if (auto c = a.heap[i] <=> b.heap[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Config Config::initial(Expr program) { return Config{{std::move(program)}, State{}}; }

std::size_t Config::hash() const {
  std::size_t h = threads.size();
  for (const auto& t : threads) h = mix(h, t.hash());
  h = mix(h, state.heap.size());
  for (const auto& c : state.heap) h = mix(h, c.hash());
  return h;
}

std::strong_ordering operator<=>(const Config& a, const Config& b) {
  if (auto c = a.threads.size() <=> b.threads.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.threads.size(); ++i)
    if (auto c = a.threads[i] <=> b.threads[i]; c != 0) return c;
  return a.state <=> b.state;
}

namespace {

using Outcomes = std::vector<Outcome>;

Outcomes single(Expr e, State s, std::vector<Expr> spawned = {}) {
  Outcomes out;
  out.push_back(Outcome{ThreadResult{std::move(e), std::move(s), std::move(spawned)}, Rational(1)});
  return out;
}

std::optional<std::size_t> cell(const Expr& l, const State& s) {
  if (l.kind() != Kind::kLoc || l.number() < 0 || l.number() >= s.next_loc()) return std::nullopt;
  return static_cast<std::size_t>(l.number());
}

std::optional<Expr> arith(BinOp op, const Expr& a, const Expr& b) {
  if (op == BinOp::kEq) return Expr::boolean(a == b);
  if (a.kind() != Kind::kInt || b.kind() != Kind::kInt) return std::nullopt;
  std::int64_t x = a.number();
  std::int64_t y = b.number();
  std::int64_t r = 0;
  switch (op) {
    case BinOp::kAdd:
      if (__builtin_add_overflow(x, y, &r)) return std::nullopt;
      return Expr::integer(r);
    case BinOp::kSub:
      if (__builtin_sub_overflow(x, y, &r)) return std::nullopt;
      return Expr::integer(r);
    case BinOp::kMul:
      if (__builtin_mul_overflow(x, y, &r)) return std::nullopt;
      return Expr::integer(r);
    case BinOp::kDiv:
      if (y == 0 || (x == INT64_MIN && y == -1)) return std::nullopt;
      return Expr::integer(x / y);
    case BinOp::kMod:
      if (y == 0 || (x == INT64_MIN && y == -1)) return std::nullopt;
      return Expr::integer(x % y);
    case BinOp::kLt:
      return Expr::boolean(x < y);
    case BinOp::kLe:
      return Expr::boolean(x <= y);
    case BinOp::kShl:
      if (y < 0 || y > 62 || x < 0 || x > (INT64_MAX >> y)) return std::nullopt;
      return Expr::integer(x << y);
    case BinOp::kEq:
      break;
  }
  return std::nullopt;
}

// Head reduction of a redex whose evaluated positions are all values.
std::optional<Outcomes> head_step(const Expr& e, const State& s) {
  const auto& k = e.kids();
  switch (e.kind()) {
    case Kind::kApp: {
      const Expr& f = k[0];
      if (f.kind() != Kind::kRec) return std::nullopt;
      Expr body = subst(f.kids()[0], f.name(), f);
      return single(subst(body, f.param(), k[1]), s);
    }
    case Kind::kLet:
      return single(subst(k[1], e.name(), k[0]), s);
    case Kind::kIf:
      if (k[0].kind() != Kind::kBool) return std::nullopt;
      return single(k[0].boolean_value() ? k[1] : k[2], s);
    case Kind::kFlip: {
      if (k[0].kind() != Kind::kInt || k[1].kind() != Kind::kInt || k[1].number() == 0) return std::nullopt;
      Rational p(k[0].number(), k[1].number());
      if (!p.is_probability()) return std::nullopt;
      Outcomes out;
      out.push_back(Outcome{ThreadResult{Expr::boolean(true), s, {}}, p});
      out.push_back(Outcome{ThreadResult{Expr::boolean(false), s, {}}, Rational(1) - p});
      return out;
    }
    case Kind::kAlloc: {
      State t = s;
      Expr l = Expr::loc(t.next_loc());
      t.heap.push_back(k[0]);
      return single(l, std::move(t));
    }
    case Kind::kLoad: {
      auto c = cell(k[0], s);
      if (!c) return std::nullopt;
      return single(s.heap[*c], s);
    }
    case Kind::kStore: {
      auto c = cell(k[0], s);
      if (!c) return std::nullopt;
      State t = s;
      t.heap[*c] = k[1];
      return single(Expr::unit(), std::move(t));
    }
    case Kind::kFaa: {
      auto c = cell(k[0], s);
      if (!c || k[1].kind() != Kind::kInt || s.heap[*c].kind() != Kind::kInt) return std::nullopt;
      std::int64_t sum = 0;
      if (__builtin_add_overflow(s.heap[*c].number(), k[1].number(), &sum)) return std::nullopt;
      State t = s;
      t.heap[*c] = Expr::integer(sum);
      return single(s.heap[*c], std::move(t));
    }
    case Kind::kCas: {
      auto c = cell(k[0], s);
      if (!c) return std::nullopt;
      if (s.heap[*c] != k[1]) return single(Expr::boolean(false), s);
      State t = s;
      t.heap[*c] = k[2];
      return single(Expr::boolean(true), std::move(t));
    }
    case Kind::kMin:
      if (k[0].kind() != Kind::kInt || k[1].kind() != Kind::kInt) return std::nullopt;
      return single(Expr::integer(std::min(k[0].number(), k[1].number())), s);
    case Kind::kFork:
      return single(Expr::unit(), s, {k[0]});
    case Kind::kFst:
    case Kind::kSnd:
      if (k[0].kind() != Kind::kPair) return std::nullopt;
      return single(k[0].kids()[e.kind() == Kind::kFst ? 0 : 1], s);
    case Kind::kBinOp: {
      auto r = arith(e.op(), k[0], k[1]);
      if (!r) return std::nullopt;
      return single(*r, s);
    }
    case Kind::kNot:
      if (k[0].kind() != Kind::kBool) return std::nullopt;
      return single(Expr::boolean(!k[0].boolean_value()), s);
    case Kind::kWait: {
      auto c = cell(k[0], s);
      if (!c || s.heap[*c] != Expr::boolean(true)) return std::nullopt;
      return single(Expr::unit(), s);
    }
    default:
      return std::nullopt;
  }
}

// Number of leading children that are evaluation positions.
std::size_t evaluated_children(const Expr& e) {
  switch (e.kind()) {
    case Kind::kLet:
    case Kind::kIf:
      return 1;
    case Kind::kFork:
    case Kind::kRec:
      return 0;
    default:
      return e.kids().size();
  }
}

}  // namespace

std::optional<std::vector<Outcome>> reduce(const Expr& e, const State& s) {
  if (e.is_value() || e.kind() == Kind::kVar) return std::nullopt;
  std::size_t n = evaluated_children(e);
  const auto& kids = e.kids();
  for (std::size_t i = 0; i < n; ++i) {
    if (kids[i].is_value()) continue;
    auto inner = reduce(kids[i], s);
    if (!inner) return std::nullopt;
    for (auto& o : *inner) {
      Node rebuilt = *e.node();
      rebuilt.kids[i] = std::move(o.result.expr);
      o.result.expr = Expr::make(std::move(rebuilt));
    }
    return inner;
  }
  return head_step(e, s);
}

IndexedValuation<std::optional<ThreadResult>> thread_step(const Expr& e, const State& s) {
  using V = std::optional<ThreadResult>;
  auto outs = reduce(e, s);
  std::vector<Entry<V>> entries;
  if (!outs) {
    entries.push_back(Entry<V>{Index{0}, std::nullopt, Rational(1)});
  } else {
    std::uint32_t i = 0;
    for (auto& o : *outs) entries.push_back(Entry<V>{Index{i++}, std::move(o.result), std::move(o.prob)});
  }
  return IndexedValuation<V>::trusted(std::move(entries));
}

bool enabled(const Config& c, std::size_t i) {
  return i < c.threads.size() && !c.threads[i].is_value() && reduce(c.threads[i], c.state).has_value();
}

namespace {

Config apply(const Config& c, std::size_t i, ThreadResult r) {
  Config next;
  next.threads = c.threads;
  next.threads[i] = std::move(r.expr);
  for (auto& sp : r.spawned) next.threads.push_back(std::move(sp));
  next.state = std::move(r.state);
  return next;
}

}  // namespace

IndexedValuation<Config> config_step(const Config& c, std::size_t i) {
  std::optional<std::vector<Outcome>> outs;
  if (i < c.threads.size()) outs = reduce(c.threads[i], c.state);
  if (!outs) return ret(c);
  std::vector<Entry<Config>> entries;
  std::uint32_t k = 0;
  for (auto& o : *outs) entries.push_back(Entry<Config>{Index{k++}, apply(c, i, std::move(o.result)), std::move(o.prob)});
  return IndexedValuation<Config>::trusted(std::move(entries));
}

std::vector<std::pair<Config, Rational>> successors(const Config& c, std::size_t i) {
  std::vector<std::pair<Config, Rational>> out;
  if (i >= c.threads.size()) return out;
  auto outs = reduce(c.threads[i], c.state);
  if (!outs) return out;
  for (auto& o : *outs)
    if (o.prob.sign() > 0) out.emplace_back(apply(c, i, std::move(o.result)), std::move(o.prob));
  return out;
}

Trace::Trace(Config start)
    : node_(std::make_shared<const TraceNode>(TraceNode{std::move(start), nullptr, 1})) {}

Trace Trace::extend(Config next) const {
  return Trace(std::make_shared<const TraceNode>(TraceNode{std::move(next), node_, node_->length + 1}));
}

std::vector<Config> Trace::configs() const {
  std::vector<Config> out;
  for (const TraceNode* n = node_.get(); n; n = n->prev.get()) out.push_back(n->config);
  std::reverse(out.begin(), out.end());
  return out;
}

IndexedValuation<Trace> trace_step_ival(const SchedulerPolicy& sched, const Trace& t) {
  auto step = config_step(t.curr(), sched.decide(t));
  std::vector<Entry<Trace>> entries;
  for (const auto& e : step.entries()) entries.push_back(Entry<Trace>{e.index, t.extend(e.value), e.prob});
  return IndexedValuation<Trace>::trusted(std::move(entries));
}

IndexedValuation<Expr> trace_step_ival_n(const SchedulerPolicy& sched, const Trace& t, std::size_t n) {
  if (n == 0) return ret(t.curr().threads.front());
  auto step = trace_step_ival(sched, t);
  std::vector<Entry<Expr>> entries;
  for (const auto& e : step.entries()) {
    auto rest = trace_step_ival_n(sched, e.value, n - 1);
    for (const auto& r : rest.entries())
      entries.push_back(Entry<Expr>{concat(e.index, r.index), r.value, e.prob * r.prob});
  }
  return IndexedValuation<Expr>::trusted(std::move(entries));
}

bool is_terminated_config(const Config& c) { return c.terminated(); }

bool terminates_within(const SchedulerPolicy& sched, const Trace& t, std::size_t n) {
  if (t.curr().terminated()) return true;
  if (n == 0) return false;
  auto step = trace_step_ival(sched, t);
  for (const auto& e : step.entries())
    if (e.prob.sign() > 0 && !terminates_within(sched, e.value, n - 1)) return false;
  return true;
}

}  // namespace randconc::lang
