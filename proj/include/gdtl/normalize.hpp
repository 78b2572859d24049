#ifndef GDTL_NORMALIZE_HPP
#define GDTL_NORMALIZE_HPP

#include <algorithm>
#include <map>

#include "gdtl/gradops.hpp"
#include "gdtl/pretty.hpp"
#include "gdtl/syntax.hpp"

namespace gdtl {

// ---------------------------------------------------------------------------
// Termination measure: the multiset of arrow-level annotations, compared in
// the Dershowitz-Manna order with omega above every integer.
// ---------------------------------------------------------------------------

using LevelMultiset = std::vector<Level>;  // kept sorted ascending

inline void collectLevels(const CanonPtr& u, LevelMultiset& out) {
  struct V {
    LevelMultiset& out;
    void go(const CanonPtr& u) const { collectLevels(u, out); }
    void goEntry(const SpineEntry& e) const {
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SArg>) go(x.arg);
            else if constexpr (std::is_same_v<T, SNatElim>) {
              go(x.motive), go(x.base), go(x.step);
            } else if constexpr (std::is_same_v<T, SVecElim>) {
              go(x.elem), go(x.len), go(x.motive), go(x.base), go(x.step);
            } else {
              go(x.type), go(x.motive), go(x.method), go(x.lhs), go(x.rhs);
            }
          },
          e);
    }
    void operator()(const CLam& n) const { go(n.body); }
    void operator()(const CPi& n) const {
      out.push_back(n.level);
      go(n.dom);
      go(n.cod);
    }
    void operator()(const CType&) const {}
    void operator()(const CUnknown&) const {}
    void operator()(const CNeutral& n) const {
      for (const auto& e : n.spine) goEntry(e);
    }
    void operator()(const CNat&) const {}
    void operator()(const CZero&) const {}
    void operator()(const CSucc& n) const { go(n.pred); }
    void operator()(const CVec& n) const { go(n.elem), go(n.len); }
    void operator()(const CNil& n) const { go(n.elem); }
    void operator()(const CCons& n) const { go(n.elem), go(n.len), go(n.head), go(n.tail); }
    void operator()(const CEq& n) const { go(n.type), go(n.lhs), go(n.rhs); }
    void operator()(const CRefl& n) const { go(n.type), go(n.value); }
  };
  std::visit(V{out}, u->node);
}

inline LevelMultiset levelMeasure(const CanonPtr& u) {
  LevelMultiset m;
  collectLevels(u, m);
  std::sort(m.begin(), m.end(), [](Level a, Level b) { return a < b; });
  return m;
}

// m1 strictly below m2: for every level where m1 has more copies than m2,
// some strictly greater level has fewer copies in m1 than in m2.
inline bool measureLess(const LevelMultiset& m1, const LevelMultiset& m2) {
  std::map<std::uint32_t, long> diff;  // count(m1) - count(m2), keyed by raw level
  for (Level l : m1) ++diff[l.v];
  for (Level l : m2) --diff[l.v];
  bool any = false;
  for (auto it = diff.begin(); it != diff.end(); ++it) {
    if (it->second != 0) any = true;
  }
  if (!any) return false;  // equal multisets
  for (auto it = diff.begin(); it != diff.end(); ++it) {
    if (it->second <= 0) continue;
    // Some strictly greater level (omega = UINT32_MAX sorts last) must be
    // strictly more frequent in m2.
    bool dominated = false;
    for (auto jt = std::next(it); jt != diff.end(); ++jt) {
      if (jt->second < 0) {
        dominated = true;
        break;
      }
    }
    if (!dominated) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Fuel for eliminator reduction inside types.
// ---------------------------------------------------------------------------

struct Fuel {
  long remaining = 10000;
  void spend() {
    if (--remaining < 0) throw FuelExhausted{};
  }
};

inline constexpr long kDefaultNormFuel = 10000;

// ---------------------------------------------------------------------------
// Eta expansion of a variable at a type.
// ---------------------------------------------------------------------------

inline CanonPtr etaExpandNeutral(int index, const std::string& hint, Spine spine,
                                 const CanonPtr& U);

inline CanonPtr etaExpandVar(int index, const std::string& hint, const CanonPtr& U) {
  return etaExpandNeutral(index, hint, {}, U);
}

inline CanonPtr etaExpandNeutral(int index, const std::string& hint, Spine spine,
                                 const CanonPtr& U) {
  if (auto* pi = std::get_if<CPi>(&U->node)) {
    // Wrap one lambda; the new argument is itself eta-expanded at the domain.
    Spine sp;
    sp.reserve(spine.size() + 1);
    for (const auto& e : spine) sp.push_back(shiftEntry(e, 1, 0));
    CanonPtr arg = etaExpandVar(0, pi->hint, shiftCanon(pi->dom, 1));
    sp.push_back(SArg{arg});
    return cLam(pi->hint, etaExpandNeutral(index + 1, hint, std::move(sp), pi->cod));
  }
  return cNeutral(index, hint, std::move(spine));
}

// ---------------------------------------------------------------------------
// Approximate hereditary substitution.
//
// hsub(v, k, X, target): target lives under one extra binder at index k whose
// type is X; v and X are valid outside that binder. The result strengthens
// away the binder: indices above k drop by one.
// ---------------------------------------------------------------------------

CanonPtr hsub(const CanonPtr& v, int k, const CanonPtr& X, const CanonPtr& target, Fuel& fuel);

// Applies a canonical function value to a canonical argument of type argTy.
// Used for motive instantiation and eliminator branches; over-approximates
// with ? where no precise answer exists.
inline CanonPtr applyCanon(const CanonPtr& fn, const CanonPtr& arg, const CanonPtr& argTy,
                           Fuel& fuel) {
  if (auto* lam = std::get_if<CLam>(&fn->node)) return hsub(arg, 0, argTy, lam->body, fuel);
  if (isUnknown(fn)) return cUnknown();
  if (auto* neu = std::get_if<CNeutral>(&fn->node)) {
    Spine sp = neu->spine;
    sp.push_back(SArg{arg});
    return cNeutral(neu->index, neu->hint, std::move(sp));
  }
  throw InternalError("applyCanon: applying a non-function canonical form");
}

// codSub: result type of applying a function of type U to (the normal form
// of) an argument. nullptr = undefined (non-function type).
inline CanonPtr codSub(const CanonPtr& arg, const CanonPtr& U, Fuel& fuel) {
  if (auto* pi = std::get_if<CPi>(&U->node)) return hsub(arg, 0, pi->dom, pi->cod, fuel);
  if (isUnknown(U)) return cUnknown();
  return nullptr;
}

// bodySub: beta at a known argument type. nullptr = undefined.
inline CanonPtr bodySub(const CanonPtr& arg, const CanonPtr& argTy, const CanonPtr& fn,
                        Fuel& fuel) {
  if (auto* lam = std::get_if<CLam>(&fn->node)) return hsub(arg, 0, argTy, lam->body, fuel);
  if (isUnknown(fn)) return cUnknown();
  return nullptr;
}

// Eliminator reduction on canonical scrutinees. Neutral scrutinees re-emit
// the frame onto the spine; ? eliminates to ? (except eqElim, where ? acts
// as Refl ? ?).
inline CanonPtr reduceNat(const CanonPtr& m, const CanonPtr& z, const CanonPtr& s,
                          const CanonPtr& scrut, Fuel& fuel) {
  if (std::holds_alternative<CZero>(scrut->node)) return z;
  if (auto* su = std::get_if<CSucc>(&scrut->node)) {
    fuel.spend();
    CanonPtr rec = reduceNat(m, z, s, su->pred, fuel);
    CanonPtr s1 = applyCanon(s, su->pred, cNat(), fuel);
    CanonPtr recTy = applyCanon(m, su->pred, cNat(), fuel);
    return applyCanon(s1, rec, recTy, fuel);
  }
  if (isUnknown(scrut)) return cUnknown();
  if (auto* neu = std::get_if<CNeutral>(&scrut->node)) {
    Spine sp = neu->spine;
    sp.push_back(SNatElim{m, z, s});
    return cNeutral(neu->index, neu->hint, std::move(sp));
  }
  throw InternalError("natElim applied to a non-Nat canonical form");
}

inline CanonPtr reduceVec(const CanonPtr& A, const CanonPtr& n, const CanonPtr& m,
                          const CanonPtr& z, const CanonPtr& s, const CanonPtr& scrut,
                          Fuel& fuel) {
  if (std::holds_alternative<CNil>(scrut->node)) return z;
  if (auto* c = std::get_if<CCons>(&scrut->node)) {
    fuel.spend();
    CanonPtr rec = reduceVec(A, c->len, m, z, s, c->tail, fuel);
    CanonPtr s1 = applyCanon(s, c->len, cNat(), fuel);
    CanonPtr s2 = applyCanon(s1, c->head, A, fuel);
    CanonPtr s3 = applyCanon(s2, c->tail, cVec(A, c->len), fuel);
    CanonPtr recTy = applyCanon(m, c->tail, cVec(A, c->len), fuel);
    return applyCanon(s3, rec, recTy, fuel);
  }
  if (isUnknown(scrut)) return cUnknown();
  if (auto* neu = std::get_if<CNeutral>(&scrut->node)) {
    Spine sp = neu->spine;
    sp.push_back(SVecElim{A, n, m, z, s});
    return cNeutral(neu->index, neu->hint, std::move(sp));
  }
  throw InternalError("vecElim applied to a non-Vec canonical form");
}

inline CanonPtr reduceEq(const CanonPtr& A, const CanonPtr& m, const CanonPtr& mth,
                         const CanonPtr& x, const CanonPtr& y, const CanonPtr& scrut,
                         Fuel& fuel) {
  if (auto* r = std::get_if<CRefl>(&scrut->node)) {
    fuel.spend();
    return applyCanon(mth, r->value, A, fuel);
  }
  if (isUnknown(scrut)) {
    // ? eliminates as Refl ? ?: the method applied to ?.
    fuel.spend();
    return applyCanon(mth, cUnknown(), A, fuel);
  }
  if (auto* neu = std::get_if<CNeutral>(&scrut->node)) {
    Spine sp = neu->spine;
    sp.push_back(SEqElim{A, m, mth, x, y});
    return cNeutral(neu->index, neu->hint, std::move(sp));
  }
  throw InternalError("eqElim applied to a non-Eq canonical form");
}

inline CanonPtr reduceElim(const SpineEntry& frame, const CanonPtr& scrut, Fuel& fuel) {
  if (auto* f = std::get_if<SNatElim>(&frame))
    return reduceNat(f->motive, f->base, f->step, scrut, fuel);
  if (auto* f = std::get_if<SVecElim>(&frame))
    return reduceVec(f->elem, f->len, f->motive, f->base, f->step, scrut, fuel);
  if (auto* f = std::get_if<SEqElim>(&frame))
    return reduceEq(f->type, f->motive, f->method, f->lhs, f->rhs, scrut, fuel);
  throw InternalError("reduceElim: argument entry is not an eliminator frame");
}

// Result and result type of re-evaluating the spine of the substituted
// variable. The type output degrades to ? whenever typing information runs
// out; that is sound because ? checks against anything.
inline std::pair<CanonPtr, CanonPtr> hsubAtomic(const CanonPtr& v, int k, const CanonPtr& X,
                                                const CNeutral& head, Fuel& fuel) {
  CanonPtr r = shiftCanon(v, k);
  CanonPtr R = shiftCanon(X, k);
  LevelMultiset muX = levelMeasure(X);
  for (const auto& entry : head.spine) {
    if (auto* sa = std::get_if<SArg>(&entry)) {
      CanonPtr a = hsub(v, k, X, sa->arg, fuel);
      if (isUnknown(R)) {
        // The substituted head has type ?: the application's value and type
        // are both unknown.
        r = cUnknown();
        R = cUnknown();
        continue;
      }
      if (isUnknown(r)) {
        // ? applied: unknown value, codomain-substituted type.
        CanonPtr R2 = codSub(a, R, fuel);
        r = cUnknown();
        R = R2 ? R2 : cUnknown();
        continue;
      }
      if (std::holds_alternative<CLam>(r->node)) {
        auto* pi = std::get_if<CPi>(&R->node);
        if (!pi) throw InternalError("hsubAtomic: lambda whose type is not an arrow");
        CanonPtr B = hsub(a, 0, pi->dom, pi->cod, fuel);
        if (measureLess(levelMeasure(pi->dom), muX)) {
          r = hsub(a, 0, pi->dom, std::get<CLam>(r->node).body, fuel);
        } else {
          // Ordering violation: approximating keeps substitution total.
          r = cUnknown();
        }
        R = B;
        continue;
      }
      if (auto* neu = std::get_if<CNeutral>(&r->node)) {
        Spine sp = neu->spine;
        sp.push_back(SArg{a});
        r = cNeutral(neu->index, neu->hint, std::move(sp));
        CanonPtr R2 = codSub(a, R, fuel);
        R = R2 ? R2 : cUnknown();
        continue;
      }
      throw InternalError("hsubAtomic: applying a non-function canonical form");
    }
    // Eliminator frame: substitute into its components, then reduce against
    // the value computed so far.
    SpineEntry sub = std::visit(
        [&](const auto& f) -> SpineEntry {
          using T = std::decay_t<decltype(f)>;
          auto h = [&](const CanonPtr& u) { return hsub(v, k, X, u, fuel); };
          if constexpr (std::is_same_v<T, SNatElim>)
            return SNatElim{h(f.motive), h(f.base), h(f.step)};
          else if constexpr (std::is_same_v<T, SVecElim>)
            return SVecElim{h(f.elem), h(f.len), h(f.motive), h(f.base), h(f.step)};
          else if constexpr (std::is_same_v<T, SEqElim>)
            return SEqElim{h(f.type), h(f.motive), h(f.method), h(f.lhs), h(f.rhs)};
          else
            throw InternalError("unreachable");
        },
        entry);
    CanonPtr scrut = r;
    r = reduceElim(sub, scrut, fuel);
    // Type: the motive applied to the (old) scrutinee.
    if (auto* f = std::get_if<SNatElim>(&sub))
      R = applyCanon(f->motive, scrut, cNat(), fuel);
    else if (auto* f = std::get_if<SVecElim>(&sub))
      R = applyCanon(f->motive, scrut, cVec(f->elem, f->len), fuel);
    else if (auto* f = std::get_if<SEqElim>(&sub)) {
      Fuel& fl = fuel;
      CanonPtr t1 = applyCanon(f->motive, f->lhs, f->type, fl);
      CanonPtr t2 = applyCanon(t1, f->rhs, f->type, fl);
      R = applyCanon(t2, scrut, cEq(f->type, f->lhs, f->rhs), fl);
    }
  }
  return {r, R};
}

inline CanonPtr hsub(const CanonPtr& v, int k, const CanonPtr& X, const CanonPtr& target,
                     Fuel& fuel) {
  struct V {
    const CanonPtr& v;
    int k;
    const CanonPtr& X;
    Fuel& fuel;
    CanonPtr go(const CanonPtr& u) const { return hsub(v, k, X, u, fuel); }
    CanonPtr under(const CanonPtr& u) const { return hsub(v, k + 1, X, u, fuel); }
    CanonPtr operator()(const CLam& n) const { return cLam(n.hint, under(n.body)); }
    CanonPtr operator()(const CPi& n) const {
      return cPi(n.hint, go(n.dom), n.level, under(n.cod));
    }
    CanonPtr operator()(const CType& n) const { return cType(n.level); }
    CanonPtr operator()(const CUnknown&) const { return cUnknown(); }
    CanonPtr operator()(const CNeutral& n) const {
      if (n.index == k) return hsubAtomic(v, k, X, n, fuel).first;
      int idx = n.index > k ? n.index - 1 : n.index;
      Spine sp;
      sp.reserve(n.spine.size());
      for (const auto& e : n.spine) {
        sp.push_back(std::visit(
            [&](const auto& f) -> SpineEntry {
              using T = std::decay_t<decltype(f)>;
              if constexpr (std::is_same_v<T, SArg>) return SArg{go(f.arg)};
              else if constexpr (std::is_same_v<T, SNatElim>)
                return SNatElim{go(f.motive), go(f.base), go(f.step)};
              else if constexpr (std::is_same_v<T, SVecElim>)
                return SVecElim{go(f.elem), go(f.len), go(f.motive), go(f.base), go(f.step)};
              else
                return SEqElim{go(f.type), go(f.motive), go(f.method), go(f.lhs), go(f.rhs)};
            },
            e));
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
  return std::visit(V{v, k, X, fuel}, target->node);
}

// ---------------------------------------------------------------------------
// Quote: read a canonical form back into a surface term.
// ---------------------------------------------------------------------------

inline TermPtr quote(const CanonPtr& u) {
  struct V {
    const CanonPtr& self;
    TermPtr operator()(const CLam& n) const { return tLam(n.hint, quote(n.body)); }
    TermPtr operator()(const CPi& n) const { return tPi(n.hint, quote(n.dom), quote(n.cod)); }
    TermPtr operator()(const CType& n) const { return tType(n.level); }
    TermPtr operator()(const CUnknown&) const { return tUnknown(); }
    TermPtr operator()(const CNeutral& n) const {
      TermPtr t = tVar(n.index, n.hint);
      for (const auto& e : n.spine) {
        t = std::visit(
            [&](const auto& f) -> TermPtr {
              using T = std::decay_t<decltype(f)>;
              if constexpr (std::is_same_v<T, SArg>) return tApp(t, quote(f.arg));
              else if constexpr (std::is_same_v<T, SNatElim>)
                return tCtor(Ctor::NatElim, {quote(f.motive), quote(f.base), quote(f.step), t});
              else if constexpr (std::is_same_v<T, SVecElim>)
                return tCtor(Ctor::VecElim, {quote(f.elem), quote(f.len), quote(f.motive),
                                             quote(f.base), quote(f.step), t});
              else
                return tCtor(Ctor::EqElim, {quote(f.type), quote(f.motive), quote(f.method),
                                            quote(f.lhs), quote(f.rhs), t});
            },
            e);
      }
      return t;
    }
    TermPtr operator()(const CNat&) const { return tNat(); }
    TermPtr operator()(const CZero&) const { return tZero(); }
    TermPtr operator()(const CSucc& n) const { return tSucc(quote(n.pred)); }
    TermPtr operator()(const CVec& n) const {
      return tCtor(Ctor::Vec, {quote(n.elem), quote(n.len)});
    }
    TermPtr operator()(const CNil& n) const { return tCtor(Ctor::Nil, {quote(n.elem)}); }
    TermPtr operator()(const CCons& n) const {
      return tCtor(Ctor::Cons, {quote(n.elem), quote(n.len), quote(n.head), quote(n.tail)});
    }
    TermPtr operator()(const CEq& n) const {
      return tCtor(Ctor::Eq, {quote(n.type), quote(n.lhs), quote(n.rhs)});
    }
    TermPtr operator()(const CRefl& n) const {
      return tCtor(Ctor::Refl, {quote(n.type), quote(n.value)});
    }
  };
  return std::visit(V{u}, u->node);
}

// ---------------------------------------------------------------------------
// Approximate normalization: synthesis and checking, mirroring the
// bidirectional typing rules while producing canonical forms.
// ---------------------------------------------------------------------------

std::pair<CanonPtr, CanonPtr> normSynth(const Context& ctx, const TermPtr& t, Fuel& fuel);
CanonPtr normCheck(const Context& ctx, const TermPtr& t, const CanonPtr& U, Fuel& fuel);
std::pair<CanonPtr, Level> normTypeSynthLevel(const Context& ctx, const TermPtr& T, Fuel& fuel);

[[noreturn]] inline void typeError(const std::string& msg, const Context& ctx,
                                   CanonPtr expected = nullptr, CanonPtr actual = nullptr,
                                   Span sp = {}) {
  std::vector<std::string> names;
  for (const auto& b : ctx.bindings) names.push_back(b.first);
  std::string full = msg;
  if (expected && actual) {
    full += ": " + prettyCanon(actual, names) + " vs " + prettyCanon(expected, names);
  }
  throw TypeError(full, std::move(expected), std::move(actual), sp);
}

// Normalizes an eliminator motive: peels lambdas against the known argument
// types of the eliminator's signature, then synthesizes the universe level of
// the body. This keeps a precise level even when the motive's codomain could
// only be checked against ?.
inline std::pair<CanonPtr, Level> checkMotive(const Context& ctx, const TermPtr& t,
                                              const std::vector<CanonPtr>& domains,
                                              std::size_t at, Fuel& fuel) {
  if (at == domains.size()) {
    auto [body, lvl] = normTypeSynthLevel(ctx, t, fuel);
    return {body, lvl};
  }
  if (auto* lam = std::get_if<TLam>(&t->node)) {
    Context inner = ctx.extended(lam->hint, domains[at]);
    auto [body, lvl] = checkMotive(inner, lam->body, domains, at + 1, fuel);
    return {cLam(lam->hint, body), lvl};
  }
  // Not a literal lambda chain: check against the Pi skeleton with unknown
  // codomain and give up on a precise level.
  CanonPtr target = cUnknown();
  for (std::size_t i = domains.size(); i > at; --i)
    target = cPi("x", domains[i - 1], Level::omega(), target);
  return {normCheck(ctx, t, target, fuel), Level::omega()};
}

// Builds the step type (n2 : Nat) -> m n2 -> m (Succ n2).
inline CanonPtr natElimStepType(const CanonPtr& m, Level lvl, Fuel& fuel) {
  CanonPtr m1 = applyCanon(shiftCanon(m, 1), cVar(0, "n2"), cNat(), fuel);
  CanonPtr m2 = applyCanon(shiftCanon(m, 2), cSucc(cVar(1, "n2")), cNat(), fuel);
  return cPi("n2", cNat(), lvl, cPi("_", m1, lvl, m2));
}

// (n2 : Nat) -> (h : A) -> (tl : Vec A n2) -> m tl -> m (Cons A n2 h tl)
inline CanonPtr vecElimStepType(const CanonPtr& A, const CanonPtr& m, Level lvl, Fuel& fuel) {
  CanonPtr A1 = shiftCanon(A, 1);
  CanonPtr A2 = shiftCanon(A, 2);
  CanonPtr A3 = shiftCanon(A, 3);
  CanonPtr tlTy = cVec(A2, cVar(1, "n2"));
  CanonPtr rec = applyCanon(shiftCanon(m, 3), cVar(0, "tl"), cVec(A3, cVar(2, "n2")), fuel);
  CanonPtr out = applyCanon(shiftCanon(m, 4),
                            cCons(shiftCanon(A, 4), cVar(3, "n2"), cVar(2, "h"), cVar(1, "tl")),
                            cVec(shiftCanon(A, 4), cSucc(cVar(3, "n2"))), fuel);
  return cPi("n2", cNat(), lvl,
             cPi("h", A1, lvl, cPi("tl", tlTy, lvl, cPi("_", rec, lvl, out))));
}

// (z : A) -> m z z (Refl A z)
inline CanonPtr eqElimMethodType(const CanonPtr& A, const CanonPtr& m, Level lvl, Fuel& fuel) {
  CanonPtr A1 = shiftCanon(A, 1);
  CanonPtr z = cVar(0, "z");
  CanonPtr t1 = applyCanon(shiftCanon(m, 1), z, A1, fuel);
  CanonPtr t2 = applyCanon(t1, z, A1, fuel);
  CanonPtr t3 = applyCanon(t2, cRefl(A1, z), cEq(A1, z, z), fuel);
  return cPi("z", A, lvl, t3);
}

// Shared constructor/eliminator synthesis over terms; used by both the
// normalizer and the elaborator (which re-checks arguments itself).
inline std::pair<CanonPtr, CanonPtr> ctorSynthNorm(const Context& ctx, const TCtor& c,
                                                   Span span, Fuel& fuel) {
  if (static_cast<int>(c.args.size()) != ctorArity(c.ctor))
    typeError(std::string(ctorName(c.ctor)) + " expects " + std::to_string(ctorArity(c.ctor)) +
                  " arguments, got " + std::to_string(c.args.size()),
              ctx, nullptr, nullptr, span);
  auto typeOf = [&](Level lvl) -> CanonPtr {
    return lvl.isOmega() ? cUnknown() : cType(lvl.v);
  };
  switch (c.ctor) {
    case Ctor::Nat: return {cNat(), cType(1)};
    case Ctor::Zero: return {cZero(), cNat()};
    case Ctor::Succ: {
      CanonPtr p = normCheck(ctx, c.args[0], cNat(), fuel);
      return {cSucc(p), cNat()};
    }
    case Ctor::Vec: {
      auto [A, lvl] = normTypeSynthLevel(ctx, c.args[0], fuel);
      CanonPtr n = normCheck(ctx, c.args[1], cNat(), fuel);
      return {cVec(A, n), typeOf(lvl)};
    }
    case Ctor::Nil: {
      auto [A, lvl] = normTypeSynthLevel(ctx, c.args[0], fuel);
      return {cNil(A), cVec(A, cZero())};
    }
    case Ctor::Cons: {
      auto [A, lvl] = normTypeSynthLevel(ctx, c.args[0], fuel);
      CanonPtr n = normCheck(ctx, c.args[1], cNat(), fuel);
      CanonPtr h = normCheck(ctx, c.args[2], A, fuel);
      CanonPtr t = normCheck(ctx, c.args[3], cVec(A, n), fuel);
      return {cCons(A, n, h, t), cVec(A, cSucc(n))};
    }
    case Ctor::Eq: {
      auto [A, lvl] = normTypeSynthLevel(ctx, c.args[0], fuel);
      CanonPtr x = normCheck(ctx, c.args[1], A, fuel);
      CanonPtr y = normCheck(ctx, c.args[2], A, fuel);
      return {cEq(A, x, y), typeOf(lvl)};
    }
    case Ctor::Refl: {
      auto [A, lvl] = normTypeSynthLevel(ctx, c.args[0], fuel);
      CanonPtr x = normCheck(ctx, c.args[1], A, fuel);
      return {cRefl(A, x), cEq(A, x, x)};
    }
    case Ctor::NatElim: {
      auto [m, lvl] = checkMotive(ctx, c.args[0], {cNat()}, 0, fuel);
      CanonPtr z = normCheck(ctx, c.args[1], applyCanon(m, cZero(), cNat(), fuel), fuel);
      CanonPtr s = normCheck(ctx, c.args[2], natElimStepType(m, lvl, fuel), fuel);
      CanonPtr n = normCheck(ctx, c.args[3], cNat(), fuel);
      CanonPtr u = reduceNat(m, z, s, n, fuel);
      return {u, applyCanon(m, n, cNat(), fuel)};
    }
    case Ctor::VecElim: {
      auto [A, lvlA] = normTypeSynthLevel(ctx, c.args[0], fuel);
      CanonPtr n = normCheck(ctx, c.args[1], cNat(), fuel);
      auto [m, lvl] = checkMotive(ctx, c.args[2], {cVec(A, n)}, 0, fuel);
      CanonPtr z = normCheck(ctx, c.args[3],
                             applyCanon(m, cNil(A), cVec(A, cZero()), fuel), fuel);
      CanonPtr s = normCheck(ctx, c.args[4], vecElimStepType(A, m, lvl, fuel), fuel);
      CanonPtr v = normCheck(ctx, c.args[5], cVec(A, n), fuel);
      CanonPtr u = reduceVec(A, n, m, z, s, v, fuel);
      return {u, applyCanon(m, v, cVec(A, n), fuel)};
    }
    case Ctor::EqElim: {
      auto [A, lvlA] = normTypeSynthLevel(ctx, c.args[0], fuel);
      std::vector<CanonPtr> doms = {A, shiftCanon(A, 1),
                                    cEq(shiftCanon(A, 2), cVar(1, "x"), cVar(0, "y"))};
      auto [m, lvl] = checkMotive(ctx, c.args[1], doms, 0, fuel);
      CanonPtr mth = normCheck(ctx, c.args[2], eqElimMethodType(A, m, lvl, fuel), fuel);
      CanonPtr x = normCheck(ctx, c.args[3], A, fuel);
      CanonPtr y = normCheck(ctx, c.args[4], A, fuel);
      CanonPtr p = normCheck(ctx, c.args[5], cEq(A, x, y), fuel);
      CanonPtr u = reduceEq(A, m, mth, x, y, p, fuel);
      CanonPtr t1 = applyCanon(m, x, A, fuel);
      CanonPtr t2 = applyCanon(t1, y, A, fuel);
      CanonPtr resTy = applyCanon(t2, p, cEq(A, x, y), fuel);
      return {u, resTy};
    }
  }
  throw InternalError("ctorSynthNorm: unreachable");
}

inline std::pair<CanonPtr, CanonPtr> normSynth(const Context& ctx, const TermPtr& t,
                                               Fuel& fuel) {
  struct V {
    const Context& ctx;
    Fuel& fuel;
    Span span;
    std::pair<CanonPtr, CanonPtr> operator()(const TVar& n) const {
      CanonPtr U = ctx.lookup(n.index);
      if (!U) typeError("unbound variable '" + n.hint + "'", ctx, nullptr, nullptr, span);
      if (isUnknown(U)) {
        // A ?-typed term is expanded one extra level, at type ? -> ?.
        CanonPtr body = cNeutral(n.index + 1, n.hint, {SArg{cVar(0, "y")}});
        return {cLam("y", body), U};
      }
      return {etaExpandVar(n.index, n.hint, U), U};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TType& n) const {
      return {cType(n.level), cType(n.level + 1)};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TUnknown&) const {
      return {cUnknown(), cUnknown()};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TAscribe& n) const {
      auto [T, lvl] = normTypeSynthLevel(ctx, n.type, fuel);
      CanonPtr u = normCheck(ctx, n.body, T, fuel);
      return {u, T};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TApp& n) const {
      auto [f, F] = normSynth(ctx, n.fn, fuel);
      CanonPtr A = domOf(F);
      if (!A)
        typeError("applying a non-function", ctx, nullptr, F, span);
      CanonPtr a = normCheck(ctx, n.arg, A, fuel);
      CanonPtr resTy = codSub(a, F, fuel);
      CanonPtr res = bodySub(a, A, f, fuel);
      if (!res) {
        // Neutral function (only possible at type ?): extend its spine.
        if (auto* neu = std::get_if<CNeutral>(&f->node)) {
          Spine sp = neu->spine;
          sp.push_back(SArg{a});
          res = cNeutral(neu->index, neu->hint, std::move(sp));
        } else {
          throw InternalError("normSynth: non-canonical application head");
        }
      }
      return {res, resTy ? resTy : cUnknown()};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TPi& n) const {
      auto [dom, i] = normTypeSynthLevel(ctx, n.dom, fuel);
      Context inner = ctx.extended(n.hint, dom);
      auto [cod, j] = normTypeSynthLevel(inner, n.cod, fuel);
      Level l = (i.isOmega() || j.isOmega()) ? Level::omega() : Level::of(std::max(i.v, j.v));
      CanonPtr pi = cPi(n.hint, dom, l, cod);
      return {pi, l.isOmega() ? cUnknown() : cType(l.v)};
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TLam&) const {
      typeError("cannot synthesize a type for an unannotated function", ctx, nullptr, nullptr,
                span);
    }
    std::pair<CanonPtr, CanonPtr> operator()(const TCtor& n) const {
      return ctorSynthNorm(ctx, n, span, fuel);
    }
  };
  return std::visit(V{ctx, fuel, t->span}, t->node);
}

inline CanonPtr normCheck(const Context& ctx, const TermPtr& t, const CanonPtr& U, Fuel& fuel) {
  // Lambdas check against arrows or ?.
  if (auto* lam = std::get_if<TLam>(&t->node)) {
    if (auto* pi = std::get_if<CPi>(&U->node)) {
      Context inner = ctx.extended(lam->hint, pi->dom);
      CanonPtr body = normCheck(inner, lam->body, pi->cod, fuel);
      return cLam(lam->hint, body);
    }
    if (isUnknown(U)) {
      Context inner = ctx.extended(lam->hint, cUnknown());
      CanonPtr body = normCheck(inner, lam->body, cUnknown(), fuel);
      return cLam(lam->hint, body);
    }
    typeError("function checked against a non-function type", ctx, U, nullptr, t->span);
  }
  // Pi types check against universes or ?, and pick up their annotation.
  if (auto* pi = std::get_if<TPi>(&t->node)) {
    if (auto* ty = std::get_if<CType>(&U->node)) {
      CanonPtr dom = normCheck(ctx, pi->dom, U, fuel);
      Context inner = ctx.extended(pi->hint, dom);
      CanonPtr cod = normCheck(inner, pi->cod, U, fuel);
      return cPi(pi->hint, dom, Level::of(ty->level), cod);
    }
    if (isUnknown(U)) {
      CanonPtr dom = normCheck(ctx, pi->dom, cUnknown(), fuel);
      Context inner = ctx.extended(pi->hint, dom);
      CanonPtr cod = normCheck(inner, pi->cod, cUnknown(), fuel);
      return cPi(pi->hint, dom, Level::omega(), cod);
    }
    typeError("arrow type checked against a non-universe", ctx, U, nullptr, t->span);
  }
  if (std::holds_alternative<TUnknown>(t->node)) return cUnknown();
  // Fallback: synthesize, then keep the precise form only when its type is
  // at least as precise as the target; otherwise approximate with ?.
  auto [u, Us] = normSynth(ctx, t, fuel);
  // Universe cumulativity keeps the form.
  if (auto* a = std::get_if<CType>(&Us->node)) {
    if (auto* b = std::get_if<CType>(&U->node)) {
      if (a->level <= b->level) return u;
      typeError("universe level too high", ctx, U, Us, t->span);
    }
  }
  if (!consistent(Us, U))
    typeError("inconsistent types", ctx, U, Us, t->span);
  if (precision(Us, U)) return u;
  return cUnknown();
}

inline std::pair<CanonPtr, Level> normTypeSynthLevel(const Context& ctx, const TermPtr& T,
                                                     Fuel& fuel) {
  if (std::holds_alternative<TUnknown>(T->node)) return {cUnknown(), Level::omega()};
  if (auto* pi = std::get_if<TPi>(&T->node)) {
    auto [dom, i] = normTypeSynthLevel(ctx, pi->dom, fuel);
    Context inner = ctx.extended(pi->hint, dom);
    auto [cod, j] = normTypeSynthLevel(inner, pi->cod, fuel);
    Level l = (i.isOmega() || j.isOmega()) ? Level::omega() : Level::of(std::max(i.v, j.v));
    return {cPi(pi->hint, dom, l, cod), l};
  }
  if (auto* c = std::get_if<TCtor>(&T->node)) {
    switch (c->ctor) {
      case Ctor::Nat:
        if (!c->args.empty()) break;
        return {cNat(), Level::of(1)};
      case Ctor::Vec: {
        if (c->args.size() != 2) break;
        auto [A, lvl] = normTypeSynthLevel(ctx, c->args[0], fuel);
        CanonPtr n = normCheck(ctx, c->args[1], cNat(), fuel);
        return {cVec(A, n), lvl};
      }
      case Ctor::Eq: {
        if (c->args.size() != 3) break;
        auto [A, lvl] = normTypeSynthLevel(ctx, c->args[0], fuel);
        CanonPtr x = normCheck(ctx, c->args[1], A, fuel);
        CanonPtr y = normCheck(ctx, c->args[2], A, fuel);
        return {cEq(A, x, y), lvl};
      }
      default: break;
    }
  }
  auto [u, U] = normSynth(ctx, T, fuel);
  if (auto* ty = std::get_if<CType>(&U->node)) return {u, Level::of(ty->level)};
  if (isUnknown(U)) return {u, Level::omega()};
  typeError("expected a type", ctx, nullptr, U, T->span);
}

// Convenience wrappers with fresh default fuel.
inline std::pair<CanonPtr, CanonPtr> normSynth(const Context& ctx, const TermPtr& t,
                                               long fuelAmount = kDefaultNormFuel) {
  Fuel f{fuelAmount};
  return normSynth(ctx, t, f);
}
inline CanonPtr normCheck(const Context& ctx, const TermPtr& t, const CanonPtr& U,
                          long fuelAmount = kDefaultNormFuel) {
  Fuel f{fuelAmount};
  return normCheck(ctx, t, U, f);
}
inline std::pair<CanonPtr, Level> normTypeSynthLevel(const Context& ctx, const TermPtr& T,
                                                     long fuelAmount = kDefaultNormFuel) {
  Fuel f{fuelAmount};
  return normTypeSynthLevel(ctx, T, f);
}
inline CanonPtr hsub(const CanonPtr& v, int k, const CanonPtr& X, const CanonPtr& target,
                     long fuelAmount = kDefaultNormFuel) {
  Fuel f{fuelAmount};
  return hsub(v, k, X, target, f);
}

}  // namespace gdtl

#endif  // GDTL_NORMALIZE_HPP
