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

#include "randconc/models.hpp"

#include <algorithm>

#include "randconc/error.hpp"

namespace randconc::models {

namespace {

std::string num(std::int64_t v) { return std::to_string(v); }

// Replaces every occurrence of `key` in `text`.
std::string replace_all(std::string text, const std::string& key, const std::string& value) {
  for (std::size_t at = text.find(key); at != std::string::npos; at = text.find(key, at + value.size()))
    text.replace(at, key.size(), value);
  return text;
}

}  // namespace

const char* counter_name(CounterKind k) {
  switch (k) {
    case CounterKind::kUnbiased:
      return "unbiased-counter";
    case CounterKind::kMorris:
      return "morris-counter";
    case CounterKind::kDlm:
      return "dlm-counter";
  }
  return "?";
}

CounterKind counter_kind_from_name(const std::string& name) {
  for (auto k : {CounterKind::kUnbiased, CounterKind::kMorris, CounterKind::kDlm})
    if (name == counter_name(k)) return k;
  throw InvalidArgument("unknown counter model '" + name + "'");
}

Expr unbiased_incr(std::int64_t max) {
  if (max < 0) throw InvalidArgument("MAX must be nonnegative");
  return lang::parse_program(replace_all(
      "(fun (l) (let k (min (! l) MAX) (let b (flip 1 (+ k 1)) (if b (seq (faa l (+ k 1)) ()) ()))))", "MAX",
      num(max)));
}

Expr unbiased_read() { return lang::parse_program("(fun (l) (! l))"); }

Expr morris_incr() {
  return lang::parse_program("(fun (l) (let k (! l) (let b (flip 1 (shl 1 k)) (if b (:= l (+ k 1)) ()))))");
}

Expr morris_read() { return lang::parse_program("(fun (l) (let k (! l) (- (shl 1 k) 1)))"); }

Expr dlm_incr_aux() {
  return lang::parse_program(
      "(rec aux (l b) (let k (! l) (if (= (mod b (shl 1 k)) 0) (if (cas l k (+ k 1)) () (aux l b)) ())))");
}

Expr dlm_incr(unsigned bits) {
  if (bits == 0 || bits > 30) throw InvalidArgument("random bit count must be in 1..30");
  // randbits(B) as B fair flips weighting bit i by 2^i.
  std::string sum = "(if (flip 1 2) " + num(std::int64_t{1} << (bits - 1)) + " 0)";
  for (unsigned i = bits - 1; i-- > 0;)
    sum = "(+ (if (flip 1 2) " + num(std::int64_t{1} << i) + " 0) " + sum + ")";
  return lang::parse_program("(fun (l) (let b " + sum + " (" + lang::unparse(dlm_incr_aux()) + " l b)))");
}

Expr counter_incr(const CounterParams& p) {
  switch (p.kind) {
    case CounterKind::kUnbiased:
      return unbiased_incr(p.max);
    case CounterKind::kMorris:
      return morris_incr();
    case CounterKind::kDlm:
      return dlm_incr(p.bits);
  }
  return unbiased_incr(p.max);
}

Expr counter_read(const CounterParams& p) {
  return p.kind == CounterKind::kUnbiased ? unbiased_read() : morris_read();
}

namespace {

// Forks one worker per body, each raising its own done flag, then joins
// them and evaluates `tail`. Flags are bound to d0, d1, ...
std::string fork_join(const std::vector<std::string>& bodies, const std::string& tail) {
  std::string seq = "(seq";
  for (std::size_t i = 0; i < bodies.size(); ++i)
    seq += " (fork (seq " + bodies[i] + " (:= d" + num(static_cast<std::int64_t>(i)) + " true)))";
  for (std::size_t i = 0; i < bodies.size(); ++i) seq += " (wait d" + num(static_cast<std::int64_t>(i)) + ")";
  seq += " " + tail + ")";
  std::string out = seq;
  for (std::size_t i = bodies.size(); i-- > 0;)
    out = "(let d" + num(static_cast<std::int64_t>(i)) + " (ref false) " + out + ")";
  return out;
}

}  // namespace

Expr counter_program(const CounterParams& p) {
  if (p.threads == 0) throw InvalidArgument("a counter program needs at least one thread");
  std::vector<std::string> bodies;
  for (std::size_t t = 0; t < p.threads; ++t) {
    std::string body = "()";
    if (p.incrs_per_thread > 0) {
      body = "(seq";
      for (std::size_t i = 0; i < p.incrs_per_thread; ++i) body += " (incr l)";
      body += " ())";
    }
    bodies.push_back(body);
  }
  std::string text = "(let incr " + lang::unparse(counter_incr(p)) + " (let read " + lang::unparse(counter_read(p)) +
                     " (let l (ref " + num(p.initial) + ") " + fork_join(bodies, "(read l)") + ")))";
  return lang::parse_program(text);
}

Expr bool_list(const std::vector<bool>& bs) {
  Expr out = Expr::unit();
  for (auto it = bs.rbegin(); it != bs.rend(); ++it) out = Expr::pair(Expr::boolean(*it), out);
  return out;
}

Expr count_true_client(const std::vector<bool>& lb1, const std::vector<bool>& lb2, std::int64_t max) {
  std::string text =
      "(let incr INCR (let read (fun (l) (! l))"
      " (let fold (rec fold (f lst acc) (if (= lst ()) acc (fold f (snd lst) (f acc (fst lst)))))"
      " (let count_true (fun (c lb) (fold (fun (_ b) (if b (incr c) ())) lb ()))"
      " (let c (ref 0) JOIN)))))";
  text = replace_all(text, "INCR", lang::unparse(unbiased_incr(max)));
  text = replace_all(text, "JOIN",
              fork_join({"(count_true c " + lang::unparse(bool_list(lb1)) + ")",
                         "(count_true c " + lang::unparse(bool_list(lb2)) + ")"},
                        "(read c)"));
  return lang::parse_program(text);
}

Spec approx_incr(std::int64_t max) {
  if (max < 0) throw InvalidArgument("MAX must be nonnegative");
  std::vector<Spec> picks;
  for (std::int64_t k = 0; k <= max; ++k) picks.push_back(Spec::ret(k));
  return Spec::bind<std::int64_t>(Spec::choose(picks), [](const std::int64_t& k) {
    return Spec::pchoice(Spec::ret(k + 1), Rational(1, k + 1), Spec::ret(0));
  });
}

Spec approx_n(std::size_t n, std::int64_t l, std::int64_t max) {
  if (n == 0) return Spec::ret(l);
  return Spec::bind<std::int64_t>(approx_incr(max),
                                  [n, l, max](const std::int64_t& k) { return approx_n(n - 1, l + k, max); });
}

SpecPair approx_n_prime(std::size_t n, std::int64_t t, std::int64_t l, std::int64_t max) {
  auto here = SpecPair::ret({t, l});
  if (n == 0) return here;
  auto step = SpecPair::bind<std::int64_t>(
      approx_incr(max), [n, t, l, max](const std::int64_t& k) { return approx_n_prime(n - 1, t + 1, l + k, max); });
  return SpecPair::choose({here, step});
}

CounterCoupling counter_coupling(std::int64_t k, std::int64_t max) {
  if (k < 0 || k > max) throw InvalidArgument("counter coupling needs 0 <= k <= MAX");
  Predicate<bool, std::int64_t> p{"(x = true and y = k+1) or (x = false and y = 0)",
                                  [k](const bool& x, const std::int64_t& y) { return x ? y == k + 1 : y == 0; }};
  auto flip = couple_pchoice(couple_ret(true, k + 1, p), Rational(1, k + 1), couple_ret(false, std::int64_t{0}, p));
  return couple_equiv(flip, flip.goal.lhs, approx_incr(max).materialize());
}

const char* mutation_name(WitnessMutation m) {
  switch (m) {
    case WitnessMutation::kMassPerturbation: return "mass-perturbation";
    case WitnessMutation::kPairDeletion: return "pair-deletion";
    case WitnessMutation::kPickCorruption: return "pick-corruption";
  }
  return "?";
}

CouplingWitness<bool, std::int64_t> mutate_counter_witness(const CouplingWitness<bool, std::int64_t>& w,
                                                         WitnessMutation m) {
  using Joint = IndexedValuation<std::pair<bool, std::int64_t>>;
  auto out = w;
  auto entries = w.joint.entries();
  auto find = [&](bool x) {
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (entries[i].value.first == x) return i;
    throw InvalidArgument("counter witness lacks a pair");
  };
  std::size_t t = find(true), f = find(false);
  switch (m) {
    case WitnessMutation::kMassPerturbation: {
      Rational d(1, 100);
      if (entries[t].prob < d) std::swap(t, f);
      entries[t].prob -= d;
      entries[f].prob += d;
      out.joint = Joint::trusted(std::move(entries));
      break;
    }
    case WitnessMutation::kPairDeletion: {
      entries[f].prob += entries[t].prob;
      entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(t));
      out.joint = Joint::trusted(std::move(entries));
      break;
    }
    case WitnessMutation::kPickCorruption:
      out.rhs_pick = fmap(w.rhs_pick, [](const std::int64_t& y) { return y + 1; });
      break;
  }
  return out;
}

CouplingClause expected_clause(WitnessMutation m) {
  return m == WitnessMutation::kPickCorruption ? CouplingClause::kRightMarginal : CouplingClause::kLeftMarginal;
}

SpecTerm<SkipState> skiplist_spec(const KeyList& l, const KeyList& tl, const KeyList& bl) {
  using S = SpecTerm<SkipState>;
  if (l.empty()) {
    KeyList t = tl;
    KeyList b = bl;
    std::sort(t.begin(), t.end());
    std::sort(b.begin(), b.end());
    return S::ret({t, b});
  }
  KeyList keys = l;
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<SpecTerm<std::int64_t>> picks;
  for (auto k : keys) picks.push_back(SpecTerm<std::int64_t>::ret(k));
  return S::bind<std::int64_t>(SpecTerm<std::int64_t>::choose(picks), [l, tl, bl](const std::int64_t& k) {
    KeyList rest;
    for (auto i : l)
      if (i != k) rest.push_back(i);
    KeyList with_k = tl;
    with_k.insert(with_k.begin(), k);
    KeyList bl2 = bl;
    bl2.insert(bl2.begin(), k);
    auto top = SpecTerm<KeyList>::pchoice(SpecTerm<KeyList>::ret(tl), Rational(1, 2), SpecTerm<KeyList>::ret(with_k));
    return S::bind<KeyList>(top, [rest, bl2](const KeyList& tl2) { return skiplist_spec(rest, tl2, bl2); });
  });
}

std::int64_t topcost(const KeyList& tl, std::int64_t k) {
  return 1 + std::count_if(tl.begin(), tl.end(), [k](std::int64_t i) { return kIntMin < i && i < k; });
}

std::int64_t rettop(const KeyList& tl, std::int64_t k) {
  std::int64_t best = kIntMin;
  for (auto i : tl)
    if (i < k) best = std::max(best, i);
  return best;
}

std::int64_t botcost(const KeyList& tl, const KeyList& bl, std::int64_t k) {
  std::int64_t r = rettop(tl, k);
  return 1 + std::count_if(bl.begin(), bl.end(), [r, k](std::int64_t i) { return r < i && i < k; });
}

std::int64_t skipcost(const KeyList& tl, const KeyList& bl, std::int64_t k) {
  if (std::find(tl.begin(), tl.end(), k) != tl.end()) return topcost(tl, k);
  return topcost(tl, k) + botcost(tl, bl, k);
}

Rational skipcost_bound(std::size_t n) {
  return Rational(1) + Rational(static_cast<std::int64_t>(n), 2) +
         Rational(2) * (Rational(1) - Rational(1) / pow2(static_cast<unsigned>(n + 1)));
}

namespace {

const char* kLibrary =
    "(let acquire (rec acquire (lk) (if (cas lk false true) () (acquire lk)))"
    " (let release (fun (lk) (:= lk false))"
    " (let nextl (fun (n) (fst (snd n)))"
    " (let lockl (fun (n) (fst (snd (snd n))))"
    " (let down (fun (n) (snd (snd (snd n))))"
    " (let find (rec find (n k) (let m (! (nextl n)) (if (< (fst m) k) (find m k) n)))"
    " (let lockpred (rec lockpred (n k) (let p (find n k) (seq (acquire (lockl p))"
    "    (if (< (fst (! (nextl p))) k) (seq (release (lockl p)) (lockpred p k)) p))))"
    " (let search (rec search (n k c) (let m (! (nextl n))"
    "    (if (< (fst m) k) (search m k (+ c 1)) (pair n (pair (= (fst m) k) (+ c 1))))))"
    " (let mem (fun (h k) (let r (search h k 0) (if (fst (snd r)) (snd r)"
    "    (snd (search (down (fst r)) k (snd (snd r)))))))"
    " (let new (fun (_) (let bt (pair INTMAX (pair (ref ()) (pair (ref false) ())))"
    "    (let bh (pair INTMIN (pair (ref bt) (pair (ref false) ())))"
    "    (let tt (pair INTMAX (pair (ref ()) (pair (ref false) bt)))"
    "    (pair INTMIN (pair (ref tt) (pair (ref false) bh)))))))"
    " (let add ADD"
    " BODY)))))))))))";

// Both locks held; FLIP decides top insertion.
const char* kLockedInsert =
    "(let pt (lockpred h k) (let pb (lockpred (down pt) k) (let sb (! (nextl pb))"
    " (seq (if (= (fst sb) k) ()"
    "   (let b FLIP (let nb (pair k (pair (ref sb) (pair (ref false) ())))"
    "     (seq (:= (nextl pb) nb)"
    "       (if b (let st (! (nextl pt)) (:= (nextl pt) (pair k (pair (ref st) (pair (ref false) nb))))) ())))))"
    "   (release (lockl pb)) (release (lockl pt))))))";

const char* kBottomOnlyInsert =
    "(let pb (lockpred (down (find h k)) k) (let sb (! (nextl pb))"
    " (seq (if (= (fst sb) k) () (:= (nextl pb) (pair k (pair (ref sb) (pair (ref false) ())))))"
    "   (release (lockl pb)))))";

}  // namespace

Expr with_skiplist_library(const Expr& body, bool early_flip) {
  std::string add;
  if (early_flip) {
    add = "(fun (h k) (let early (flip 1 2) (if early " + replace_all(kLockedInsert, "FLIP", "early") + " " +
          kBottomOnlyInsert + ")))";
  } else {
    add = "(fun (h k) " + replace_all(kLockedInsert, "FLIP", "(flip 1 2)") + ")";
  }
  std::string text = kLibrary;
  text = replace_all(text, "INTMIN", num(kIntMin));
  text = replace_all(text, "INTMAX", num(kIntMax));
  text = replace_all(text, "ADD", add);
  text = replace_all(text, "BODY", lang::unparse(body));
  return lang::parse_program(text);
}

Expr skiplist_program(const std::vector<KeyList>& groups, std::int64_t query, bool early_flip) {
  auto check = [](std::int64_t k) {
    if (k <= kIntMin || k >= kIntMax) throw InvalidArgument("skip-list keys must lie strictly between the sentinels");
  };
  check(query);
  auto adds = [&](const KeyList& keys) {
    if (keys.empty()) return std::string("()");
    std::string s = "(seq";
    for (auto k : keys) {
      check(k);
      s += " (add h " + num(k) + ")";
    }
    return s + " ())";
  };
  std::string tail = "(pair h (mem h " + num(query) + "))";
  std::string inner;
  if (groups.size() <= 1) {
    inner = groups.empty() ? tail : "(seq " + adds(groups.front()) + " " + tail + ")";
  } else {
    std::vector<std::string> bodies;
    for (const auto& g : groups) bodies.push_back(adds(g));
    inner = fork_join(bodies, tail);
  }
  return with_skiplist_library(lang::parse_program("(let h (new ()) " + inner + ")"), early_flip);
}

namespace {

const Expr& field(const Expr& node, int which) {
  // node = (key, (next, (lock, down)))
  auto bad = [] { return InvalidArgument("value is not a skip-list node"); };
  if (node.kind() != lang::Kind::kPair) throw bad();
  if (which == 0) return node.kids()[0];
  const Expr& r1 = node.kids()[1];
  if (r1.kind() != lang::Kind::kPair) throw bad();
  if (which == 1) return r1.kids()[0];
  const Expr& r2 = r1.kids()[1];
  if (r2.kind() != lang::Kind::kPair) throw bad();
  return which == 2 ? r2.kids()[0] : r2.kids()[1];
}

KeyList walk(const lang::State& s, Expr node) {
  KeyList keys;
  for (std::size_t guard = 0; guard <= s.heap.size(); ++guard) {
    const Expr& next = field(node, 1);
    if (next.kind() != lang::Kind::kLoc || next.number() < 0 ||
        static_cast<std::size_t>(next.number()) >= s.heap.size())
      throw InvalidArgument("dangling skip-list pointer");
    Expr m = s.heap[static_cast<std::size_t>(next.number())];
    std::int64_t k = field(m, 0).number();
    if (k == kIntMax) return keys;
    keys.push_back(k);
    node = m;
  }
  throw InvalidArgument("skip-list walk did not reach the tail sentinel");
}

}  // namespace

SkipState skiplist_contents(const lang::State& s, const Expr& head) {
  return {walk(s, head), walk(s, field(head, 3))};
}

}  // namespace randconc::models
