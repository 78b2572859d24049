#ifndef GDTL_TYPECHECK_HPP
#define GDTL_TYPECHECK_HPP

#include "gdtl/normalize.hpp"

namespace gdtl {

// The gradual bidirectional typechecker. Synthesis and checking ride on the
// normalization judgments, which compute types as canonical forms.

inline CanonPtr synth(const Context& ctx, const TermPtr& t, long fuel = kDefaultNormFuel) {
  return normSynth(ctx, t, fuel).second;
}

inline void check(const Context& ctx, const TermPtr& t, const CanonPtr& U,
                  long fuel = kDefaultNormFuel) {
  normCheck(ctx, t, U, fuel);  // throws TypeError on failure
}

inline bool checks(const Context& ctx, const TermPtr& t, const CanonPtr& U,
                   long fuel = kDefaultNormFuel) {
  try {
    check(ctx, t, U, fuel);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Canonical well-typedness: accepts exactly the well-formed, eta-long
// canonical forms at a type. Used to validate normalizer outputs.
// ---------------------------------------------------------------------------

CanonPtr canonSynth(const Context& ctx, const CanonPtr& u, Fuel& fuel);
void checkCanonical(const Context& ctx, const CanonPtr& u, const CanonPtr& U, Fuel& fuel);

// Universe level at which a canonical type lives (smallest i with A <= Type i,
// omega when only ? fits).
inline Level canonTypeLevel(const Context& ctx, const CanonPtr& A, Fuel& fuel) {
  if (isUnknown(A)) return Level::omega();
  if (std::holds_alternative<CNat>(A->node)) return Level::of(1);
  if (auto* t = std::get_if<CType>(&A->node)) return Level::of(t->level + 1);
  if (auto* pi = std::get_if<CPi>(&A->node)) return pi->level;
  if (auto* v = std::get_if<CVec>(&A->node)) return canonTypeLevel(ctx, v->elem, fuel);
  if (auto* e = std::get_if<CEq>(&A->node)) return canonTypeLevel(ctx, e->type, fuel);
  CanonPtr U = canonSynth(ctx, A, fuel);
  if (auto* t = std::get_if<CType>(&U->node)) return Level::of(t->level);
  if (isUnknown(U)) return Level::omega();
  typeError("expected a type", ctx, nullptr, U);
}

inline CanonPtr canonSynth(const Context& ctx, const CanonPtr& u, Fuel& fuel) {
  struct V {
    const Context& ctx;
    Fuel& fuel;
    const CanonPtr& self;
    CanonPtr operator()(const CLam&) const {
      typeError("cannot synthesize a type for a bare function", ctx);
    }
    CanonPtr operator()(const CPi& n) const {
      Level i = canonTypeLevel(ctx, n.dom, fuel);
      Context inner = ctx.extended(n.hint, n.dom);
      Level j = canonTypeLevel(inner, n.cod, fuel);
      if (i.isOmega() || j.isOmega()) return cUnknown();
      return cType(std::max(i.v, j.v));
    }
    CanonPtr operator()(const CType& n) const { return cType(n.level + 1); }
    CanonPtr operator()(const CUnknown&) const { return cUnknown(); }
    CanonPtr operator()(const CNeutral& n) const {
      CanonPtr U = ctx.lookup(n.index);
      if (!U) typeError("unbound variable '" + n.hint + "'", ctx);
      for (const auto& e : n.spine) {
        if (auto* sa = std::get_if<SArg>(&e)) {
          CanonPtr A = domOf(U);
          if (!A) typeError("spine applies a non-function", ctx, nullptr, U);
          checkCanonical(ctx, sa->arg, A, fuel);
          CanonPtr U2 = codSub(sa->arg, U, fuel);
          U = U2 ? U2 : cUnknown();
        } else if (auto* f = std::get_if<SNatElim>(&e)) {
          if (!std::holds_alternative<CNat>(U->node) && !isUnknown(U))
            typeError("natElim scrutinee is not a Nat", ctx, cNat(), U);
          U = applyCanon(f->motive, cUnknown(), cNat(), fuel);
        } else if (auto* f = std::get_if<SVecElim>(&e)) {
          if (!std::holds_alternative<CVec>(U->node) && !isUnknown(U))
            typeError("vecElim scrutinee is not a Vec", ctx, nullptr, U);
          U = applyCanon(f->motive, cUnknown(), cVec(f->elem, f->len), fuel);
        } else if (auto* f = std::get_if<SEqElim>(&e)) {
          if (!std::holds_alternative<CEq>(U->node) && !isUnknown(U))
            typeError("eqElim scrutinee is not an Eq", ctx, nullptr, U);
          CanonPtr t1 = applyCanon(f->motive, f->lhs, f->type, fuel);
          CanonPtr t2 = applyCanon(t1, f->rhs, f->type, fuel);
          U = applyCanon(t2, cUnknown(), cEq(f->type, f->lhs, f->rhs), fuel);
        }
      }
      return U;
    }
    CanonPtr operator()(const CNat&) const { return cType(1); }
    CanonPtr operator()(const CZero&) const { return cNat(); }
    CanonPtr operator()(const CSucc& n) const {
      checkCanonical(ctx, n.pred, cNat(), fuel);
      return cNat();
    }
    CanonPtr operator()(const CVec& n) const {
      Level l = canonTypeLevel(ctx, n.elem, fuel);
      checkCanonical(ctx, n.len, cNat(), fuel);
      return l.isOmega() ? cUnknown() : cType(l.v);
    }
    CanonPtr operator()(const CNil& n) const {
      canonTypeLevel(ctx, n.elem, fuel);
      return cVec(n.elem, cZero());
    }
    CanonPtr operator()(const CCons& n) const {
      canonTypeLevel(ctx, n.elem, fuel);
      checkCanonical(ctx, n.len, cNat(), fuel);
      checkCanonical(ctx, n.head, n.elem, fuel);
      checkCanonical(ctx, n.tail, cVec(n.elem, n.len), fuel);
      return cVec(n.elem, cSucc(n.len));
    }
    CanonPtr operator()(const CEq& n) const {
      Level l = canonTypeLevel(ctx, n.type, fuel);
      checkCanonical(ctx, n.lhs, n.type, fuel);
      checkCanonical(ctx, n.rhs, n.type, fuel);
      return l.isOmega() ? cUnknown() : cType(l.v);
    }
    CanonPtr operator()(const CRefl& n) const {
      canonTypeLevel(ctx, n.type, fuel);
      checkCanonical(ctx, n.value, n.type, fuel);
      return cEq(n.type, n.value, n.value);
    }
  };
  return std::visit(V{ctx, fuel, u}, u->node);
}

inline void checkCanonical(const Context& ctx, const CanonPtr& u, const CanonPtr& U,
                           Fuel& fuel) {
  if (isUnknown(u)) return;  // ? checks against any type
  if (auto* lam = std::get_if<CLam>(&u->node)) {
    if (auto* pi = std::get_if<CPi>(&U->node)) {
      Context inner = ctx.extended(lam->hint, pi->dom);
      checkCanonical(inner, lam->body, pi->cod, fuel);
      return;
    }
    if (isUnknown(U)) {
      Context inner = ctx.extended(lam->hint, cUnknown());
      checkCanonical(inner, lam->body, cUnknown(), fuel);
      return;
    }
    typeError("function checked against a non-function type", ctx, U);
  }
  if (auto* pi = std::get_if<CPi>(&u->node)) {
    if (std::holds_alternative<CType>(U->node) || isUnknown(U)) {
      checkCanonical(ctx, pi->dom, U, fuel);
      Context inner = ctx.extended(pi->hint, pi->dom);
      checkCanonical(inner, pi->cod, shiftCanon(U, 1), fuel);
      return;
    }
    typeError("arrow type checked against a non-universe", ctx, U);
  }
  // Eta-longness: atomic forms are forbidden at arrow types.
  if (std::holds_alternative<CPi>(U->node) && std::holds_alternative<CNeutral>(u->node))
    typeError("atomic form at an arrow type is not eta-long", ctx, U);
  CanonPtr Us = canonSynth(ctx, u, fuel);
  if (auto* a = std::get_if<CType>(&Us->node)) {
    if (auto* b = std::get_if<CType>(&U->node)) {
      if (a->level <= b->level) return;
      typeError("universe level too high", ctx, U, Us);
    }
  }
  if (!consistent(Us, U)) typeError("inconsistent types", ctx, U, Us);
}

inline void checkCanonical(const Context& ctx, const CanonPtr& u, const CanonPtr& U,
                           long fuelAmount = kDefaultNormFuel) {
  Fuel f{fuelAmount};
  checkCanonical(ctx, u, U, f);
}
inline bool checksCanonical(const Context& ctx, const CanonPtr& u, const CanonPtr& U,
                            long fuelAmount = kDefaultNormFuel) {
  try {
    checkCanonical(ctx, u, U, fuelAmount);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

// Context well-formedness: each binding's type checks against some universe
// or against ? under the bindings to its left.
inline void wfContext(const Context& ctx, long fuelAmount = kDefaultNormFuel) {
  Context prefix;
  for (const auto& [name, ty] : ctx.bindings) {
    Fuel f{fuelAmount};
    try {
      canonTypeLevel(prefix, ty, f);
    } catch (const TypeError&) {
      typeError("binding '" + name + "' has a non-type annotation", prefix, nullptr, ty);
    }
    prefix = prefix.extended(name, ty);
  }
}

}  // namespace gdtl

#endif  // GDTL_TYPECHECK_HPP
