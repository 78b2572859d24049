#pragma once

// Random program generation, precision mutation, and executable checks for the
// gradual guarantees. Everything here is deterministic in the supplied seed.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gdtl/evidence.hpp"
#include "gdtl/pretty.hpp"
#include "gdtl/typecheck.hpp"

namespace gdtl::harness {

using Rng = std::mt19937_64;

namespace detail_h {

inline int pick(Rng& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}
inline bool chance(Rng& rng, int pct) { return pick(rng, 100) < pct; }

inline void childTerms(const TermPtr& t, std::vector<TermPtr>& out) {
  if (auto* l = std::get_if<TLam>(&t->node)) {
    out.push_back(l->body);
  } else if (auto* a = std::get_if<TApp>(&t->node)) {
    out.push_back(a->fn);
    out.push_back(a->arg);
  } else if (auto* p = std::get_if<TPi>(&t->node)) {
    out.push_back(p->dom);
    out.push_back(p->cod);
  } else if (auto* s = std::get_if<TAscribe>(&t->node)) {
    out.push_back(s->body);
    out.push_back(s->type);
  } else if (auto* c = std::get_if<TCtor>(&t->node)) {
    for (const auto& x : c->args) out.push_back(x);
  }
}

inline long countNodes(const TermPtr& t) {
  long n = 1;
  std::vector<TermPtr> kids;
  childTerms(t, kids);
  for (const auto& k : kids) n += countNodes(k);
  return n;
}

// Rebuild `t` with preorder node `k` replaced by ?. `k` counts down as the
// traversal passes each node.
inline TermPtr replaceNodeGo(const TermPtr& t, long& k) {
  if (k == 0) {
    --k;
    return tUnknown();
  }
  --k;
  if (auto* l = std::get_if<TLam>(&t->node)) return tLam(l->hint, replaceNodeGo(l->body, k));
  if (auto* a = std::get_if<TApp>(&t->node)) {
    TermPtr f = replaceNodeGo(a->fn, k);
    return tApp(std::move(f), replaceNodeGo(a->arg, k));
  }
  if (auto* p = std::get_if<TPi>(&t->node)) {
    TermPtr d = replaceNodeGo(p->dom, k);
    return tPi(p->hint, std::move(d), replaceNodeGo(p->cod, k));
  }
  if (auto* s = std::get_if<TAscribe>(&t->node)) {
    TermPtr b = replaceNodeGo(s->body, k);
    return tAscribe(std::move(b), replaceNodeGo(s->type, k));
  }
  if (auto* c = std::get_if<TCtor>(&t->node)) {
    std::vector<TermPtr> args;
    for (const auto& x : c->args) args.push_back(replaceNodeGo(x, k));
    return tCtor(c->ctor, std::move(args));
  }
  return t;  // leaves: TVar, TType, TUnknown
}

inline TermPtr replaceNode(const TermPtr& t, long idx) {
  long k = idx;
  return replaceNodeGo(t, k);
}

// Preorder indices of nodes that are not already ?.
inline void eligibleNodes(const TermPtr& t, long& idx, std::vector<long>& out) {
  if (!std::holds_alternative<TUnknown>(t->node)) out.push_back(idx);
  ++idx;
  std::vector<TermPtr> kids;
  childTerms(t, kids);
  for (const auto& k : kids) eligibleNodes(k, idx, out);
}

inline TermPtr stripAsc(const TermPtr& t) {
  if (auto* s = std::get_if<TAscribe>(&t->node)) return stripAsc(s->body);
  if (auto* l = std::get_if<TLam>(&t->node)) return tLam(l->hint, stripAsc(l->body));
  if (auto* a = std::get_if<TApp>(&t->node)) return tApp(stripAsc(a->fn), stripAsc(a->arg));
  if (auto* p = std::get_if<TPi>(&t->node))
    return tPi(p->hint, stripAsc(p->dom), stripAsc(p->cod));
  if (auto* c = std::get_if<TCtor>(&t->node)) {
    std::vector<TermPtr> args;
    for (const auto& x : c->args) args.push_back(stripAsc(x));
    return tCtor(c->ctor, std::move(args));
  }
  return t;
}

inline std::string jsonEscape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

}  // namespace detail_h

// ---------------------------------------------------------------------------
// Term-level precision: a ⊑ b when b replaces subterms of a with ?.
// ---------------------------------------------------------------------------

inline bool termPrecision(const TermPtr& a, const TermPtr& b) {
  if (std::holds_alternative<TUnknown>(b->node)) return true;
  if (std::holds_alternative<TUnknown>(a->node)) return false;
  if (a->node.index() != b->node.index()) return false;
  if (auto* v = std::get_if<TVar>(&a->node)) return v->index == std::get<TVar>(b->node).index;
  if (auto* l = std::get_if<TLam>(&a->node))
    return termPrecision(l->body, std::get<TLam>(b->node).body);
  if (auto* ap = std::get_if<TApp>(&a->node)) {
    const auto& o = std::get<TApp>(b->node);
    return termPrecision(ap->fn, o.fn) && termPrecision(ap->arg, o.arg);
  }
  if (auto* p = std::get_if<TPi>(&a->node)) {
    const auto& o = std::get<TPi>(b->node);
    return termPrecision(p->dom, o.dom) && termPrecision(p->cod, o.cod);
  }
  if (auto* ty = std::get_if<TType>(&a->node)) return ty->level == std::get<TType>(b->node).level;
  if (auto* s = std::get_if<TAscribe>(&a->node)) {
    const auto& o = std::get<TAscribe>(b->node);
    return termPrecision(s->body, o.body) && termPrecision(s->type, o.type);
  }
  const auto& c = std::get<TCtor>(a->node);
  const auto& o = std::get<TCtor>(b->node);
  if (c.ctor != o.ctor || c.args.size() != o.args.size()) return false;
  for (std::size_t i = 0; i < c.args.size(); ++i)
    if (!termPrecision(c.args[i], o.args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Precision modulo η on canonical forms: terms normalized at types of
// different precision can differ by one η-expansion level at arrows, so a
// lambda on one side may be compared against a neutral on the other by
// expanding the neutral.
// ---------------------------------------------------------------------------

namespace detail_h {

bool pme(const CanonPtr& a, const CanonPtr& b);

inline CanonPtr etaOnce(const CanonPtr& neutral) {
  CanonPtr up = shiftCanon(neutral, 1);
  CNeutral n = std::get<CNeutral>(up->node);
  n.spine.push_back(SArg{cVar(0, "x")});
  return cNeutral(n.index, n.hint, std::move(n.spine));
}

inline bool pmeEntry(const SpineEntry& a, const SpineEntry& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<SArg>(&a)) return pme(x->arg, std::get<SArg>(b).arg);
  if (auto* x = std::get_if<SNatElim>(&a)) {
    const auto& y = std::get<SNatElim>(b);
    return pme(x->motive, y.motive) && pme(x->base, y.base) && pme(x->step, y.step);
  }
  if (auto* x = std::get_if<SVecElim>(&a)) {
    const auto& y = std::get<SVecElim>(b);
    return pme(x->elem, y.elem) && pme(x->len, y.len) && pme(x->motive, y.motive) &&
           pme(x->base, y.base) && pme(x->step, y.step);
  }
  const auto& x = std::get<SEqElim>(a);
  const auto& y = std::get<SEqElim>(b);
  return pme(x.type, y.type) && pme(x.motive, y.motive) && pme(x.method, y.method) &&
         pme(x.lhs, y.lhs) && pme(x.rhs, y.rhs);
}

inline bool pme(const CanonPtr& a, const CanonPtr& b) {
  if (precision(a, b)) return true;
  if (isUnknown(b)) return true;
  if (isUnknown(a)) return false;
  auto* la = std::get_if<CLam>(&a->node);
  auto* lb = std::get_if<CLam>(&b->node);
  auto* na = std::get_if<CNeutral>(&a->node);
  auto* nb = std::get_if<CNeutral>(&b->node);
  if (la && lb) return pme(la->body, lb->body);
  if (la && nb) return pme(la->body, etaOnce(b));
  if (na && lb) return pme(etaOnce(a), lb->body);
  if (a->node.index() != b->node.index()) return false;
  if (auto* p = std::get_if<CPi>(&a->node)) {
    const auto& o = std::get<CPi>(b->node);
    return levelPrecision(p->level, o.level) && pme(p->dom, o.dom) && pme(p->cod, o.cod);
  }
  if (na) {
    const auto& o = std::get<CNeutral>(b->node);
    if (na->index != o.index || na->spine.size() != o.spine.size()) return false;
    for (std::size_t i = 0; i < na->spine.size(); ++i)
      if (!pmeEntry(na->spine[i], o.spine[i])) return false;
    return true;
  }
  if (auto* s = std::get_if<CSucc>(&a->node)) return pme(s->pred, std::get<CSucc>(b->node).pred);
  if (auto* v = std::get_if<CVec>(&a->node)) {
    const auto& o = std::get<CVec>(b->node);
    return pme(v->elem, o.elem) && pme(v->len, o.len);
  }
  if (auto* nl = std::get_if<CNil>(&a->node)) return pme(nl->elem, std::get<CNil>(b->node).elem);
  if (auto* c = std::get_if<CCons>(&a->node)) {
    const auto& o = std::get<CCons>(b->node);
    return pme(c->elem, o.elem) && pme(c->len, o.len) && pme(c->head, o.head) &&
           pme(c->tail, o.tail);
  }
  if (auto* e = std::get_if<CEq>(&a->node)) {
    const auto& o = std::get<CEq>(b->node);
    return pme(e->type, o.type) && pme(e->lhs, o.lhs) && pme(e->rhs, o.rhs);
  }
  if (auto* r = std::get_if<CRefl>(&a->node)) {
    const auto& o = std::get<CRefl>(b->node);
    return pme(r->type, o.type) && pme(r->value, o.value);
  }
  return false;  // CType/CNat/CZero mismatches were settled by precision()
}

}  // namespace detail_h

inline bool precisionModEta(const CanonPtr& u1, const CanonPtr& /*U1*/, const CanonPtr& u2,
                            const CanonPtr& /*U2*/) {
  return detail_h::pme(u1, u2);
}

// ---------------------------------------------------------------------------
// Precision mutation: replace one uniformly chosen non-? subterm with ?.
// ---------------------------------------------------------------------------

inline TermPtr lowerPrecision(const TermPtr& t, long seed) {
  std::vector<long> eligible;
  long idx = 0;
  detail_h::eligibleNodes(t, idx, eligible);
  if (eligible.empty()) return t;  // already all ?
  Rng rng(static_cast<std::uint64_t>(seed) ^ 0xA5A5A5A5DEADBEEFull);
  long target = eligible[detail_h::pick(rng, static_cast<int>(eligible.size()))];
  return detail_h::replaceNode(t, target);
}

// ---------------------------------------------------------------------------
// Type-directed generation of well-typed triples.
// ---------------------------------------------------------------------------

struct GenResult {
  Context ctx;
  TermPtr term;
  CanonPtr type;
};

namespace detail_h {

inline CanonPtr genType(Rng& rng, int depth) {
  int r = pick(rng, depth > 1 ? 8 : 6);
  switch (r) {
    case 0:
    case 1:
      return cNat();
    case 2:
      return cType(1);
    case 3:
      return cVec(cNat(), cNumeral(static_cast<unsigned>(pick(rng, 3))));
    case 4:
      return cUnknown();
    case 5: {
      unsigned n = static_cast<unsigned>(pick(rng, 3));
      return cEq(cNat(), cNumeral(n), cNumeral(n));
    }
    case 6:
      return cPi("x", genType(rng, 0), Level::omega(), genType(rng, depth - 1));
    default:
      return cVec(cNat(), cUnknown());
  }
}

inline TermPtr genVecChain(Rng& rng, unsigned len) {
  TermPtr acc = tCtor(Ctor::Nil, {tNat()});
  for (unsigned j = 0; j < len; ++j)
    acc = tCtor(Ctor::Cons,
                {tNat(), tNumeral(j), tNumeral(static_cast<unsigned>(pick(rng, 4))), acc});
  return acc;
}

// How long a numeral is, or nullopt for anything else.
inline std::optional<unsigned> numeralLength(const CanonPtr& u) {
  unsigned n = 0;
  CanonPtr cur = u;
  while (true) {
    if (std::holds_alternative<CZero>(cur->node)) return n;
    if (auto* s = std::get_if<CSucc>(&cur->node)) {
      ++n;
      cur = s->pred;
      continue;
    }
    return std::nullopt;
  }
}

inline TermPtr genTermOnce(Rng& rng, const Context& ctx, const CanonPtr& U, int depth) {
  // Gradual moves get a fixed 30% share so ? and ascriptions are exercised.
  if (depth > 0 && chance(rng, 30)) {
    int g = pick(rng, 3);
    if (g == 0) return tUnknown();
    if (g == 1) return tAscribe(genTermOnce(rng, ctx, U, depth - 1), tUnknown());
    return tAscribe(genTermOnce(rng, ctx, U, depth - 1), quote(U));
  }
  // Prefer a variable whose type matches the goal when one is in scope.
  if (ctx.size() > 0 && chance(rng, 40)) {
    std::vector<int> hits;
    for (int i = 0; i < static_cast<int>(ctx.size()); ++i) {
      CanonPtr T = ctx.lookup(i);
      if (T && alphaEq(T, U)) hits.push_back(i);
    }
    if (!hits.empty()) {
      int i = hits[static_cast<std::size_t>(pick(rng, static_cast<int>(hits.size())))];
      return tVar(i, ctx.hintAt(i));
    }
  }
  if (auto* pi = std::get_if<CPi>(&U->node)) {
    std::string h = pi->hint.empty() ? "x" : pi->hint;
    return tLam(h, genTermOnce(rng, ctx.extended(h, pi->dom), pi->cod, depth - 1));
  }
  if (std::holds_alternative<CNat>(U->node)) {
    if (depth <= 0) return tNumeral(static_cast<unsigned>(pick(rng, 4)));
    switch (pick(rng, 4)) {
      case 0:
        return tNumeral(static_cast<unsigned>(pick(rng, 4)));
      case 1:
        return tSucc(genTermOnce(rng, ctx, cNat(), depth - 1));
      case 2: {
        // Apply a Nat -> Nat function from the context when one exists.
        CanonPtr arrow = cPi("x", cNat(), Level::omega(), cNat());
        for (int i = 0; i < static_cast<int>(ctx.size()); ++i) {
          CanonPtr T = ctx.lookup(i);
          if (T) {
            if (auto* p = std::get_if<CPi>(&T->node)) {
              if (alphaEq(p->dom, cNat()) && alphaEq(p->cod, cNat()))
                return tApp(tVar(i, ctx.hintAt(i)), genTermOnce(rng, ctx, cNat(), depth - 1));
            }
          }
        }
        return tNumeral(static_cast<unsigned>(pick(rng, 4)));
      }
      default: {
        Context inner = ctx.extended("p", cNat()).extended("r", cNat());
        return tCtor(Ctor::NatElim,
                     {tLam("n", tNat()), genTermOnce(rng, ctx, cNat(), depth - 1),
                      tLam("p", tLam("r", genTermOnce(rng, inner, cNat(), depth - 1))),
                      genTermOnce(rng, ctx, cNat(), depth - 1)});
      }
    }
  }
  if (auto* ty = std::get_if<CType>(&U->node)) {
    switch (pick(rng, ty->level >= 2 ? 5 : 4)) {
      case 0:
        return tNat();
      case 1:
        return tCtor(Ctor::Vec, {tNat(), tNumeral(static_cast<unsigned>(pick(rng, 3)))});
      case 2: {
        unsigned n = static_cast<unsigned>(pick(rng, 3));
        return tCtor(Ctor::Eq, {tNat(), tNumeral(n), tNumeral(n)});
      }
      case 3:
        return tPi("x", tNat(), tNat());
      default:
        return tType(ty->level - 1);
    }
  }
  if (auto* v = std::get_if<CVec>(&U->node)) {
    if (alphaEq(v->elem, cNat())) {
      if (auto len = numeralLength(v->len)) return genVecChain(rng, *len);
      if (isUnknown(v->len)) return genVecChain(rng, static_cast<unsigned>(pick(rng, 3)));
    }
    return tUnknown();
  }
  if (auto* eq = std::get_if<CEq>(&U->node)) {
    if (alphaEq(eq->lhs, eq->rhs)) return tCtor(Ctor::Refl, {quote(eq->type), quote(eq->lhs)});
    return tUnknown();
  }
  if (isUnknown(U)) {
    // Anything that synthesizes checks at ?; pick a small concrete goal.
    CanonPtr T = pick(rng, 2) == 0 ? cNat() : cVec(cNat(), cNumeral(1));
    return genTermOnce(rng, ctx, T, depth > 0 ? depth - 1 : 0);
  }
  return tUnknown();  // neutral goals (context type variables) and the rest
}

}  // namespace detail_h

inline GenResult genWellTyped(long seed, int size) {
  if (size < 1) throw InternalError("genWellTyped: size must be >= 1");
  Rng rng(static_cast<std::uint64_t>(seed) * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
  Context ctx;
  const std::vector<std::pair<std::string, CanonPtr>> pool = {
      {"k", cNat()},
      {"f", cPi("x", cNat(), Level::omega(), cNat())},
      {"A", cType(1)}};
  int nb = detail_h::pick(rng, 3);
  for (int i = 0; i < nb; ++i) {
    const auto& b = pool[static_cast<std::size_t>(detail_h::pick(rng, 3))];
    ctx = ctx.extended(b.first + std::to_string(i), b.second);
  }
  CanonPtr U = detail_h::genType(rng, size);
  for (int attempt = 0; attempt < 8; ++attempt) {
    TermPtr cand = detail_h::genTermOnce(rng, ctx, U, size);
    try {
      if (checks(ctx, cand, U)) return {ctx, cand, U};
    } catch (const FuelExhausted&) {
    }
  }
  // Bounded retries failed: shrink the goal to ?, which ? itself inhabits.
  TermPtr fallback = tUnknown();
  if (!checks(ctx, fallback, U)) throw InternalError("generator produced an ill-typed term");
  return {ctx, fallback, U};
}

// ---------------------------------------------------------------------------
// Shrinking: greedily replace subterms with ? while the failure persists.
// ---------------------------------------------------------------------------

inline TermPtr shrinkWhile(TermPtr t, const std::function<bool(const TermPtr&)>& failing) {
  bool changed = true;
  while (changed) {
    changed = false;
    long n = detail_h::countNodes(t);
    for (long i = 0; i < n; ++i) {
      TermPtr c = detail_h::replaceNode(t, i);
      if (alphaEqTerm(c, t)) continue;
      if (failing(c)) {
        t = c;
        changed = true;
        break;
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// The guarantee checks and their report.
// ---------------------------------------------------------------------------

struct ReportEntry {
  long seed = 0;
  std::string property;
  bool ok = true;
  std::string counterexample;
};

struct Report {
  std::vector<ReportEntry> entries;

  long counterexampleCount() const {
    long n = 0;
    for (const auto& e : entries)
      if (!e.ok) ++n;
    return n;
  }

  std::string toJsonLines() const {
    std::ostringstream out;
    for (const auto& e : entries) {
      out << "{\"seed\":" << e.seed << ",\"property\":\"" << detail_h::jsonEscape(e.property)
          << "\",\"verdict\":\"" << (e.ok ? "ok" : "counterexample") << "\"";
      if (!e.ok)
        out << ",\"counterexample\":\"" << detail_h::jsonEscape(e.counterexample) << "\"";
      out << "}\n";
    }
    return out.str();
  }
};

namespace detail_h {

inline bool erasedRelated(const EvTermPtr& a, const EvTermPtr& b) {
  return termPrecision(stripAsc(stripEv(a)), stripAsc(stripEv(b)));
}

// Lock-step trace comparison with up to 3 administrative stutter steps on the
// less precise side. Returns a counterexample description, or nullopt.
inline std::optional<std::string> dynamicGuarantee(const TermPtr& t1, const TermPtr& t2,
                                                   const CanonPtr& U, long fuel) {
  EvTermPtr e1, e2;
  try {
    Fuel f1{kDefaultNormFuel};
    e1 = elabCheck(Context{}, t1, U, f1);
    Fuel f2{kDefaultNormFuel};
    e2 = elabCheck(Context{}, t2, U, f2);
  } catch (const TypeError& te) {
    return std::string("less precise program failed to elaborate: ") + te.what();
  }
  // Terminal comparison: the next shared observation point. The precise run
  // may err (no obligation on the other side); otherwise a precise value
  // demands a related value from the less precise run.
  auto finish = [&](EvTermPtr a, EvTermPtr b) -> std::optional<std::string> {
    RunResult r1 = run(std::move(a), fuel);
    if (r1.status != RunResult::Value) return std::nullopt;  // err or fuel
    RunResult r2 = run(std::move(b), fuel);
    if (r2.status == RunResult::Fuel) return std::nullopt;
    if (r2.status != RunResult::Value)
      return "precise run produced a value but the less precise one failed";
    if (!erasedRelated(r1.term, r2.term))
      return "final values unrelated: " + prettyEv(r1.term) + "  vs  " + prettyEv(r2.term);
    return std::nullopt;
  };
  long guard = fuel;
  while (guard-- > 0) {
    // Once the less precise run has finished, the precise one may still need
    // arbitrarily many steps (a ?-scrutinee short-circuits eliminators), so
    // run it out and compare the final values.
    if (isEvValue(e2)) return finish(e1, e2);
    if (!erasedRelated(e1, e2)) {
      bool resynced = false;
      for (int k = 0; k < 3 && !resynced; ++k) {
        Fuel nf{kDefaultNormFuel};
        StepOut s2 = step(e2, nf);
        if (s2.kind != StepOut::Stepped) break;
        e2 = s2.term;
        resynced = erasedRelated(e1, e2);
      }
      // Beyond the stutter bound the traces are out of lock-step; a
      // ?-short-circuit can put the precise side arbitrarily far behind, so
      // settle the case at the next observation point instead.
      if (!resynced) return finish(e1, e2);
    }
    Fuel nf1{kDefaultNormFuel};
    StepOut s1 = step(e1, nf1);
    if (s1.kind == StepOut::Err) return std::nullopt;  // precise failure: no obligation
    if (s1.kind == StepOut::Value) {
      RunResult r2 = run(e2, fuel);
      if (r2.status == RunResult::Fuel) return std::nullopt;
      if (r2.status != RunResult::Value)
        return "precise run produced a value but the less precise one failed";
      if (!erasedRelated(e1, r2.term))
        return "final values unrelated: " + prettyEv(e1) + "  vs  " + prettyEv(r2.term);
      return std::nullopt;
    }
    e1 = s1.term;
    Fuel nf2{kDefaultNormFuel};
    StepOut s2 = step(e2, nf2);
    if (s2.kind == StepOut::Stepped) {
      e2 = s2.term;
    } else if (s2.kind == StepOut::Err) {
      return "less precise run failed while the precise one was still stepping";
    }
  }
  return std::nullopt;  // step budget spent without a verdict
}

}  // namespace detail_h

using Mutator = std::function<TermPtr(const TermPtr&, long)>;

inline Report checkGuarantees(long seed, long count, long fuel, Mutator mutate = {}) {
  if (!mutate) mutate = [](const TermPtr& t, long s) { return lowerPrecision(t, s); };
  Report rep;
  for (long i = 0; i < count; ++i) {
    long cs = seed + i;
    GenResult g = genWellTyped(cs, 1 + static_cast<int>(i % 4));
    TermPtr mut = mutate(g.term, cs);

    // (a) Static guarantee: the less precise term still checks at the goal.
    bool okA = checks(g.ctx, mut, g.type);
    std::string cexA;
    if (!okA) {
      TermPtr shr = shrinkWhile(g.term, [&](const TermPtr& c) {
        return checks(g.ctx, c, g.type) && !checks(g.ctx, mutate(c, cs), g.type);
      });
      cexA = prettyTerm(shr) + "  ~~>  " + prettyTerm(mutate(shr, cs));
    }
    rep.entries.push_back({cs, "static-guarantee", okA, cexA});

    // (b) Normalization guarantee: normal forms are related by precision
    // modulo eta.
    bool okB = true;
    std::string cexB;
    if (okA) {
      try {
        CanonPtr u1 = normCheck(g.ctx, g.term, g.type);
        CanonPtr u2 = normCheck(g.ctx, mut, g.type);
        okB = precisionModEta(u1, g.type, u2, g.type);
        if (!okB) cexB = prettyCanon(u1) + "  vs  " + prettyCanon(u2);
      } catch (const FuelExhausted&) {
      } catch (const TypeError& te) {
        okB = false;
        cexB = te.what();
      }
    }
    rep.entries.push_back({cs, "normalization-guarantee", okB, cexB});

    // (c) Dynamic guarantee: elaborated traces stay related step by step.
    // Only closed programs run.
    bool okC = true;
    std::string cexC;
    if (okA && g.ctx.size() == 0) {
      try {
        auto cex = detail_h::dynamicGuarantee(g.term, mut, g.type, fuel);
        if (cex) {
          okC = false;
          cexC = *cex;
        }
      } catch (const FuelExhausted&) {
      } catch (const std::exception& ex) {
        okC = false;
        cexC = ex.what();
      }
    }
    rep.entries.push_back({cs, "dynamic-guarantee", okC, cexC});
  }
  return rep;
}

}  // namespace gdtl::harness
