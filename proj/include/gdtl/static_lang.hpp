#ifndef GDTL_STATIC_LANG_HPP
#define GDTL_STATIC_LANG_HPP

// The fully static sublanguage: a bidirectional checker with its own
// hereditary substitution (no ?, equality instead of consistency), a
// call-by-value small-step evaluator over surface terms, a reference
// untyped lambda-calculus evaluator, and the two embeddings into the
// gradual language. The checker and substitution here are written
// independently of the gradual normalizer so the two can be compared
// against each other on ?-free inputs.

#include <optional>

#include "gdtl/normalize.hpp"

namespace gdtl::slang {

// ---------------------------------------------------------------------------
// Syntax restriction.
// ---------------------------------------------------------------------------

inline bool isStaticTerm(const TermPtr& t) {
  struct V {
    bool operator()(const TVar&) const { return true; }
    bool operator()(const TLam& n) const { return isStaticTerm(n.body); }
    bool operator()(const TApp& n) const { return isStaticTerm(n.fn) && isStaticTerm(n.arg); }
    bool operator()(const TPi& n) const { return isStaticTerm(n.dom) && isStaticTerm(n.cod); }
    bool operator()(const TType&) const { return true; }
    bool operator()(const TUnknown&) const { return false; }
    bool operator()(const TAscribe& n) const {
      return isStaticTerm(n.body) && isStaticTerm(n.type);
    }
    bool operator()(const TCtor& n) const {
      if (n.ctor == Ctor::NatElim || n.ctor == Ctor::VecElim || n.ctor == Ctor::EqElim)
        return false;
      for (const auto& a : n.args)
        if (!isStaticTerm(a)) return false;
      return true;
    }
  };
  return std::visit(V{}, t->node);
}

// ---------------------------------------------------------------------------
// Static hereditary substitution. Well-typed static inputs always
// beta-reduce; there is no approximation and no eliminator machinery.
// ---------------------------------------------------------------------------

inline CanonPtr shsub(const CanonPtr& v, int k, const CanonPtr& X, const CanonPtr& target);

inline std::pair<CanonPtr, CanonPtr> shsubAtomic(const CanonPtr& v, int k, const CanonPtr& X,
                                                 const CNeutral& head) {
  CanonPtr r = shiftCanon(v, k);
  CanonPtr R = shiftCanon(X, k);
  for (const auto& entry : head.spine) {
    auto* sa = std::get_if<SArg>(&entry);
    if (!sa) throw InternalError("shsub: eliminator frame in a static spine");
    CanonPtr a = shsub(v, k, X, sa->arg);
    auto* pi = std::get_if<CPi>(&R->node);
    if (!pi) throw InternalError("shsub: spine applies a non-arrow");
    if (auto* lam = std::get_if<CLam>(&r->node)) {
      CanonPtr body = lam->body;
      CanonPtr dom = pi->dom;
      CanonPtr cod = pi->cod;
      r = shsub(a, 0, dom, body);
      R = shsub(a, 0, dom, cod);
      continue;
    }
    if (auto* neu = std::get_if<CNeutral>(&r->node)) {
      Spine sp = neu->spine;
      sp.push_back(SArg{a});
      r = cNeutral(neu->index, neu->hint, std::move(sp));
      R = shsub(a, 0, pi->dom, pi->cod);
      continue;
    }
    throw InternalError("shsub: applying a non-function canonical form");
  }
  return {r, R};
}

inline CanonPtr shsub(const CanonPtr& v, int k, const CanonPtr& X, const CanonPtr& target) {
  struct V {
    const CanonPtr& v;
    int k;
    const CanonPtr& X;
    CanonPtr go(const CanonPtr& u) const { return shsub(v, k, X, u); }
    CanonPtr under(const CanonPtr& u) const { return shsub(v, k + 1, X, u); }
    CanonPtr operator()(const CLam& n) const { return cLam(n.hint, under(n.body)); }
    CanonPtr operator()(const CPi& n) const {
      return cPi(n.hint, go(n.dom), n.level, under(n.cod));
    }
    CanonPtr operator()(const CType& n) const { return cType(n.level); }
    CanonPtr operator()(const CUnknown&) const {
      throw InternalError("shsub: ? in a static term");
    }
    CanonPtr operator()(const CNeutral& n) const {
      if (n.index == k) return shsubAtomic(v, k, X, n).first;
      int idx = n.index > k ? n.index - 1 : n.index;
      Spine sp;
      for (const auto& e : n.spine) {
        auto* sa = std::get_if<SArg>(&e);
        if (!sa) throw InternalError("shsub: eliminator frame in a static spine");
        sp.push_back(SArg{go(sa->arg)});
      }
      return cNeutral(idx, n.hint, std::move(sp));
    }
    CanonPtr operator()(const CNat&) const { return cNat(); }
    CanonPtr operator()(const CZero&) const { return cZero(); }
    CanonPtr operator()(const CSucc& n) const { return cSucc(go(n.pred)); }
    CanonPtr operator()(const CVec& n) const { return cVec(go(n.elem), go(n.len)); }
    CanonPtr operator()(const CNil& n) const { return cNil(go(n.elem)); }
    CanonPtr operator()(const CCons& n) const {
      return cCons(go(n.elem), go(n.len), go(n.head), go(n.tail));
    }
    CanonPtr operator()(const CEq& n) const { return cEq(go(n.type), go(n.lhs), go(n.rhs)); }
    CanonPtr operator()(const CRefl& n) const { return cRefl(go(n.type), go(n.value)); }
  };
  return std::visit(V{v, k, X}, target->node);
}

// ---------------------------------------------------------------------------
// Static bidirectional checking with normalization.
// ---------------------------------------------------------------------------

std::pair<CanonPtr, CanonPtr> ssynthNorm(const Context& ctx, const TermPtr& t);
CanonPtr scheckNorm(const Context& ctx, const TermPtr& t, const CanonPtr& U);
std::pair<CanonPtr, Level> stypeLevel(const Context& ctx, const TermPtr& T);

inline std::pair<CanonPtr, CanonPtr> ssynthNorm(const Context& ctx, const TermPtr& t) {
  struct V {
    const Context& ctx;
    Span span;
    std::pair<CanonPtr, CanonPtr> operator()(const TVar& n) const {
      CanonPtr U = ctx.lookup(n.index);
      if (!U) typeError("unbound variable '" + n.hint + "'", ctx, nullptr, nullptr, span);
      return {etaExpandVar(n.index, n.hint, U), U};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TType& n) const {
      return {cType(n.level), cType(n.level + 1)};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TUnknown&) const {
      typeError("? is not a static term", ctx, nullptr, nullptr, span);
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TAscribe& n) const {
      auto [T, lvl] = stypeLevel(ctx, n.type);
      return {scheckNorm(ctx, n.body, T), T};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TApp& n) const {
      auto [f, F] = ssynthNorm(ctx, n.fn);
      auto* pi = std::get_if<CPi>(&F->node);
      if (!pi) typeError("applying a non-function", ctx, nullptr, F, span);
      CanonPtr a = scheckNorm(ctx, n.arg, pi->dom);
      CanonPtr resTy = shsub(a, 0, pi->dom, pi->cod);
      if (auto* lam = std::get_if<CLam>(&f->node))
        return {shsub(a, 0, pi->dom, lam->body), resTy};
      auto* neu = std::get_if<CNeutral>(&f->node);
      if (!neu) throw InternalError("ssynth: non-canonical application head");
      Spine sp = neu->spine;
      sp.push_back(SArg{a});
      return {cNeutral(neu->index, neu->hint, std::move(sp)), resTy};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TPi& n) const {
      auto [dom, i] = stypeLevel(ctx, n.dom);
      Context inner = ctx.extended(n.hint, dom);
      auto [cod, j] = stypeLevel(inner, n.cod);
      Level l = Level::of(std::max(i.v, j.v));
      return {cPi(n.hint, dom, l, cod), cType(l.v)};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TLam&) const {
      typeError("cannot synthesize a type for an unannotated function", ctx, nullptr, nullptr,
                span);
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TCtor& c) const {
      if (static_cast<int>(c.args.size()) != ctorArity(c.ctor))
        typeError(std::string(ctorName(c.ctor)) + ": wrong arity", ctx, nullptr, nullptr, span);
      switch (c.ctor) {
        case Ctor::Nat: return {cNat(), cType(1)};
        case Ctor::Zero: return {cZero(), cNat()};
        case Ctor::Succ: return {cSucc(scheckNorm(ctx, c.args[0], cNat())), cNat()};
        case Ctor::Vec: {
          auto [A, lvl] = stypeLevel(ctx, c.args[0]);
          CanonPtr n = scheckNorm(ctx, c.args[1], cNat());
          return {cVec(A, n), cType(lvl.v)};
        }
        case Ctor::Nil: {
          auto [A, lvl] = stypeLevel(ctx, c.args[0]);
          return {cNil(A), cVec(A, cZero())};
        }
        case Ctor::Cons: {
          auto [A, lvl] = stypeLevel(ctx, c.args[0]);
          CanonPtr n = scheckNorm(ctx, c.args[1], cNat());
          CanonPtr h = scheckNorm(ctx, c.args[2], A);
          CanonPtr t = scheckNorm(ctx, c.args[3], cVec(A, n));
          return {cCons(A, n, h, t), cVec(A, cSucc(n))};
        }
        case Ctor::Eq: {
          auto [A, lvl] = stypeLevel(ctx, c.args[0]);
          CanonPtr x = scheckNorm(ctx, c.args[1], A);
          CanonPtr y = scheckNorm(ctx, c.args[2], A);
          return {cEq(A, x, y), cType(lvl.v)};
        }
        case Ctor::Refl: {
          auto [A, lvl] = stypeLevel(ctx, c.args[0]);
          CanonPtr x = scheckNorm(ctx, c.args[1], A);
          return {cRefl(A, x), cEq(A, x, x)};
        }
        default:
          typeError("the static language has no eliminators", ctx, nullptr, nullptr, span);
      }
    }
  };
  return std::visit(V{ctx, t->span}, t->node);
}

inline CanonPtr scheckNorm(const Context& ctx, const TermPtr& t, const CanonPtr& U) {
  if (auto* lam = std::get_if<TLam>(&t->node)) {
    auto* pi = std::get_if<CPi>(&U->node);
    if (!pi)
      typeError("function checked against a non-function type", ctx, U, nullptr, t->span);
    Context inner = ctx.extended(lam->hint, pi->dom);
    return cLam(lam->hint, scheckNorm(inner, lam->body, pi->cod));
  }
  if (auto* pi = std::get_if<TPi>(&t->node)) {
    auto* ty = std::get_if<CType>(&U->node);
    if (!ty) typeError("arrow type checked against a non-universe", ctx, U, nullptr, t->span);
    CanonPtr dom = scheckNorm(ctx, pi->dom, U);
    Context inner = ctx.extended(pi->hint, dom);
    CanonPtr cod = scheckNorm(inner, pi->cod, U);
    return cPi(pi->hint, dom, Level::of(ty->level), cod);
  }
  auto [u, Us] = ssynthNorm(ctx, t);
  if (auto* a = std::get_if<CType>(&Us->node)) {
    if (auto* b = std::get_if<CType>(&U->node)) {
      if (a->level <= b->level) return u;
      typeError("universe level too high", ctx, U, Us, t->span);
    }
  }
  if (!alphaEq(Us, U)) typeError("type mismatch", ctx, U, Us, t->span);
  return u;
}

inline std::pair<CanonPtr, Level> stypeLevel(const Context& ctx, const TermPtr& T) {
  if (auto* pi = std::get_if<TPi>(&T->node)) {
    auto [dom, i] = stypeLevel(ctx, pi->dom);
    Context inner = ctx.extended(pi->hint, dom);
    auto [cod, j] = stypeLevel(inner, pi->cod);
    Level l = Level::of(std::max(i.v, j.v));
    return {cPi(pi->hint, dom, l, cod), l};
  }
  auto [u, U] = ssynthNorm(ctx, T);
  if (auto* ty = std::get_if<CType>(&U->node)) return {u, Level::of(ty->level)};
  typeError("expected a type", ctx, nullptr, U, T->span);
}

inline CanonPtr ssynth(const Context& ctx, const TermPtr& t) { return ssynthNorm(ctx, t).second; }
inline bool scheck(const Context& ctx, const TermPtr& t, const CanonPtr& U) {
  try {
    scheckNorm(ctx, t, U);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Call-by-value small-step semantics over surface terms (ascriptions are
// dropped at values; beta is plain capture-avoiding substitution).
// ---------------------------------------------------------------------------

namespace detail {

inline TermPtr shiftTerm(const TermPtr& t, int d, int cutoff = 0) {
  struct V {
    int d, c;
    TermPtr go(const TermPtr& u) const { return shiftTerm(u, d, c); }
    TermPtr under(const TermPtr& u) const { return shiftTerm(u, d, c + 1); }
    TermPtr operator()(const TVar& n) const {
      return tVar(n.index >= c ? n.index + d : n.index, n.hint);
    }
    TermPtr operator()(const TLam& n) const { return tLam(n.hint, under(n.body)); }
    TermPtr operator()(const TApp& n) const { return tApp(go(n.fn), go(n.arg)); }
    TermPtr operator()(const TPi& n) const { return tPi(n.hint, go(n.dom), under(n.cod)); }
    TermPtr operator()(const TType& n) const { return tType(n.level); }
    TermPtr operator()(const TUnknown&) const { return tUnknown(); }
    TermPtr operator()(const TAscribe& n) const { return tAscribe(go(n.body), go(n.type)); }
    TermPtr operator()(const TCtor& n) const {
      std::vector<TermPtr> args;
      for (const auto& a : n.args) args.push_back(go(a));
      return tCtor(n.ctor, std::move(args));
    }
  };
  return std::visit(V{d, cutoff}, t->node);
}

// [v / k] t, strengthening indices above k.
inline TermPtr substTerm(const TermPtr& v, int k, const TermPtr& t) {
  struct V {
    const TermPtr& v;
    int k;
    TermPtr go(const TermPtr& u) const { return substTerm(v, k, u); }
    TermPtr under(const TermPtr& u) const { return substTerm(shiftTerm(v, 1), k + 1, u); }
    TermPtr operator()(const TVar& n) const {
      if (n.index == k) return v;
      return tVar(n.index > k ? n.index - 1 : n.index, n.hint);
    }
    TermPtr operator()(const TLam& n) const { return tLam(n.hint, under(n.body)); }
    TermPtr operator()(const TApp& n) const { return tApp(go(n.fn), go(n.arg)); }
    TermPtr operator()(const TPi& n) const { return tPi(n.hint, go(n.dom), under(n.cod)); }
    TermPtr operator()(const TType& n) const { return tType(n.level); }
    TermPtr operator()(const TUnknown&) const { return tUnknown(); }
    TermPtr operator()(const TAscribe& n) const { return tAscribe(go(n.body), go(n.type)); }
    TermPtr operator()(const TCtor& n) const {
      std::vector<TermPtr> args;
      for (const auto& a : n.args) args.push_back(go(a));
      return tCtor(n.ctor, std::move(args));
    }
  };
  return std::visit(V{v, k}, t->node);
}

}  // namespace detail

inline bool isValueTerm(const TermPtr& t) {
  struct V {
    bool operator()(const TVar&) const { return false; }
    bool operator()(const TLam&) const { return true; }
    bool operator()(const TApp&) const { return false; }
    bool operator()(const TPi&) const { return true; }
    bool operator()(const TType&) const { return true; }
    bool operator()(const TUnknown&) const { return false; }
    bool operator()(const TAscribe&) const { return false; }
    bool operator()(const TCtor& n) const {
      if (n.ctor == Ctor::NatElim || n.ctor == Ctor::VecElim || n.ctor == Ctor::EqElim)
        return false;
      for (const auto& a : n.args)
        if (!isValueTerm(a)) return false;
      return true;
    }
  };
  return std::visit(V{}, t->node);
}

enum class StepClass { Stepped, Value, Stuck };

struct SStep {
  StepClass cls;
  TermPtr term;  // the successor when Stepped, the input otherwise
};

inline SStep sstep(const TermPtr& t) {
  if (isValueTerm(t)) return {StepClass::Value, t};
  if (auto* asc = std::get_if<TAscribe>(&t->node)) {
    if (isValueTerm(asc->body)) return {StepClass::Stepped, asc->body};
    SStep inner = sstep(asc->body);
    if (inner.cls == StepClass::Stepped)
      return {StepClass::Stepped, tAscribe(inner.term, asc->type)};
    return {StepClass::Stuck, t};
  }
  if (auto* app = std::get_if<TApp>(&t->node)) {
    if (!isValueTerm(app->fn)) {
      SStep inner = sstep(app->fn);
      if (inner.cls == StepClass::Stepped)
        return {StepClass::Stepped, tApp(inner.term, app->arg)};
      return {StepClass::Stuck, t};
    }
    if (!isValueTerm(app->arg)) {
      SStep inner = sstep(app->arg);
      if (inner.cls == StepClass::Stepped)
        return {StepClass::Stepped, tApp(app->fn, inner.term)};
      return {StepClass::Stuck, t};
    }
    if (auto* lam = std::get_if<TLam>(&app->fn->node))
      return {StepClass::Stepped, detail::substTerm(app->arg, 0, lam->body)};
    return {StepClass::Stuck, t};
  }
  if (auto* c = std::get_if<TCtor>(&t->node)) {
    std::vector<TermPtr> args = c->args;
    for (auto& a : args) {
      if (isValueTerm(a)) continue;
      SStep inner = sstep(a);
      if (inner.cls != StepClass::Stepped) return {StepClass::Stuck, t};
      a = inner.term;
      return {StepClass::Stepped, tCtor(c->ctor, std::move(args))};
    }
    return {StepClass::Stuck, t};
  }
  return {StepClass::Stuck, t};
}

// Iterated stepping. Returns the final Value or Stuck classification.
inline SStep srun(TermPtr t, long fuel = 100000) {
  for (long i = 0; i < fuel; ++i) {
    SStep s = sstep(t);
    if (s.cls != StepClass::Stepped) return s;
    t = s.term;
  }
  throw FuelExhausted{};
}

// ---------------------------------------------------------------------------
// Reference untyped call-by-value evaluator: the differential oracle for
// embedded untyped programs. Works only on variables, lambdas, and
// applications; anything else is a stuck state (nullopt).
// ---------------------------------------------------------------------------

inline std::optional<TermPtr> evalUntypedFuel(const TermPtr& t, long& fuel) {
  if (fuel-- <= 0) throw FuelExhausted{};
  if (std::holds_alternative<TLam>(t->node)) return t;
  if (auto* app = std::get_if<TApp>(&t->node)) {
    auto f = evalUntypedFuel(app->fn, fuel);
    if (!f) return std::nullopt;
    auto a = evalUntypedFuel(app->arg, fuel);
    if (!a) return std::nullopt;
    auto* lam = std::get_if<TLam>(&(*f)->node);
    if (!lam) return std::nullopt;
    return evalUntypedFuel(detail::substTerm(*a, 0, lam->body), fuel);
  }
  return std::nullopt;  // free variable or non-lambda leaf
}

inline std::optional<TermPtr> evalUntyped(const TermPtr& t, long fuel = 100000) {
  return evalUntypedFuel(t, fuel);
}

// ---------------------------------------------------------------------------
// Embeddings.
// ---------------------------------------------------------------------------

// The static language is a syntactic subset of the gradual one.
inline TermPtr embedStatic(const TermPtr& t) { return t; }

// Untyped lambda terms embed by ascribing every lambda with ?.
inline TermPtr untypedEmbed(const TermPtr& t) {
  if (auto* v = std::get_if<TVar>(&t->node)) return tVar(v->index, v->hint);
  if (auto* lam = std::get_if<TLam>(&t->node))
    return tAscribe(tLam(lam->hint, untypedEmbed(lam->body)), tUnknown());
  if (auto* app = std::get_if<TApp>(&t->node))
    return tApp(untypedEmbed(app->fn), untypedEmbed(app->arg));
  throw InternalError("untypedEmbed: input is not a pure lambda term");
}

}  // namespace gdtl::slang

#endif  // GDTL_STATIC_LANG_HPP
