#ifndef GDTL_EVIDENCE_HPP
#define GDTL_EVIDENCE_HPP

// Elaboration into evidence terms, evidence-term typing, and the runtime
// small-step machine. Every consistency judgment used by the typechecker
// materializes as an evidence witness ⟨W⟩ at runtime; the machine composes
// witnesses by the precision meet and raises err exactly when a meet is
// undefined.

#include <functional>
#include <optional>

#include "gdtl/normalize.hpp"

namespace gdtl {

// ---------------------------------------------------------------------------
// Evidence composition: consistent transitivity is the precision meet.
// ---------------------------------------------------------------------------

inline std::optional<Evidence> composeEvidence(const Evidence& e1, const Evidence& e2) {
  CanonPtr m = meet(e1.witness, e2.witness);
  if (!m) return std::nullopt;
  return Evidence{m};
}

// ---------------------------------------------------------------------------
// Erasure: evidence terms back to surface terms. Witnesses become
// ascriptions so the erased term typechecks on its own; err has no surface
// form and erases to ?.
// ---------------------------------------------------------------------------

inline TermPtr eraseEv(const EvTermPtr& e) {
  struct V {
    TermPtr operator()(const EVar& n) const { return tVar(n.index, n.hint); }
    TermPtr operator()(const ELam& n) const { return tLam(n.hint, eraseEv(n.body)); }
    TermPtr operator()(const EApp& n) const { return tApp(eraseEv(n.fn), eraseEv(n.arg)); }
    TermPtr operator()(const EPi& n) const {
      return tPi(n.hint, eraseEv(n.dom), eraseEv(n.cod));
    }
    TermPtr operator()(const EType& n) const { return tType(n.level); }
    TermPtr operator()(const EUnknown&) const { return tUnknown(); }
    TermPtr operator()(const ECtor& n) const {
      std::vector<TermPtr> args;
      for (const auto& a : n.args) args.push_back(eraseEv(a));
      return tCtor(n.ctor, std::move(args));
    }
    TermPtr operator()(const EWithEv& n) const {
      return tAscribe(eraseEv(n.raw), quote(n.ev.witness));
    }
    TermPtr operator()(const EErr&) const { return tUnknown(); }
  };
  return std::visit(V{}, e->node);
}

// Full erasure: drop evidence without leaving ascriptions behind.
inline TermPtr stripEv(const EvTermPtr& e) {
  struct V {
    TermPtr operator()(const EVar& n) const { return tVar(n.index, n.hint); }
    TermPtr operator()(const ELam& n) const { return tLam(n.hint, stripEv(n.body)); }
    TermPtr operator()(const EApp& n) const { return tApp(stripEv(n.fn), stripEv(n.arg)); }
    TermPtr operator()(const EPi& n) const {
      return tPi(n.hint, stripEv(n.dom), stripEv(n.cod));
    }
    TermPtr operator()(const EType& n) const { return tType(n.level); }
    TermPtr operator()(const EUnknown&) const { return tUnknown(); }
    TermPtr operator()(const ECtor& n) const {
      std::vector<TermPtr> args;
      for (const auto& a : n.args) args.push_back(stripEv(a));
      return tCtor(n.ctor, std::move(args));
    }
    TermPtr operator()(const EWithEv& n) const { return stripEv(n.raw); }
    TermPtr operator()(const EErr&) const { return tUnknown(); }
  };
  return std::visit(V{}, e->node);
}

// Structural alpha-equality on evidence terms.
inline bool alphaEqEv(const EvTermPtr& a, const EvTermPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  struct V {
    const EvTermPtr& b;
    bool operator()(const EVar& n) const { return n.index == std::get<EVar>(b->node).index; }
    bool operator()(const ELam& n) const {
      return alphaEqEv(n.body, std::get<ELam>(b->node).body);
    }
    bool operator()(const EApp& n) const {
      const auto& o = std::get<EApp>(b->node);
      return alphaEqEv(n.fn, o.fn) && alphaEqEv(n.arg, o.arg);
    }
    bool operator()(const EPi& n) const {
      const auto& o = std::get<EPi>(b->node);
      return alphaEqEv(n.dom, o.dom) && alphaEqEv(n.cod, o.cod);
    }
    bool operator()(const EType& n) const { return n.level == std::get<EType>(b->node).level; }
    bool operator()(const EUnknown&) const { return true; }
    bool operator()(const ECtor& n) const {
      const auto& o = std::get<ECtor>(b->node);
      if (n.ctor != o.ctor || n.args.size() != o.args.size()) return false;
      for (std::size_t i = 0; i < n.args.size(); ++i)
        if (!alphaEqEv(n.args[i], o.args[i])) return false;
      return true;
    }
    bool operator()(const EWithEv& n) const {
      const auto& o = std::get<EWithEv>(b->node);
      return alphaEq(n.ev.witness, o.ev.witness) && alphaEqEv(n.raw, o.raw);
    }
    bool operator()(const EErr&) const { return true; }
  };
  return std::visit(V{b}, a->node);
}

// ---------------------------------------------------------------------------
// Shifting and substitution on evidence terms. Evidence witnesses are
// rewritten with the argument's approximate normal form via hereditary
// substitution; term positions receive the evidence term itself.
// ---------------------------------------------------------------------------

inline EvTermPtr shiftEv(const EvTermPtr& e, int d, int cutoff = 0) {
  struct V {
    int d, c;
    EvTermPtr go(const EvTermPtr& u) const { return shiftEv(u, d, c); }
    EvTermPtr under(const EvTermPtr& u) const { return shiftEv(u, d, c + 1); }
    EvTermPtr operator()(const EVar& n) const {
      return eVar(n.index >= c ? n.index + d : n.index, n.hint);
    }
    EvTermPtr operator()(const ELam& n) const { return eLam(n.hint, under(n.body)); }
    EvTermPtr operator()(const EApp& n) const { return eApp(go(n.fn), go(n.arg)); }
    EvTermPtr operator()(const EPi& n) const { return ePi(n.hint, go(n.dom), under(n.cod)); }
    EvTermPtr operator()(const EType& n) const { return eType(n.level); }
    EvTermPtr operator()(const EUnknown&) const { return eUnknown(); }
    EvTermPtr operator()(const ECtor& n) const {
      std::vector<EvTermPtr> args;
      for (const auto& a : n.args) args.push_back(go(a));
      return eCtor(n.ctor, std::move(args));
    }
    EvTermPtr operator()(const EWithEv& n) const {
      return eWithEv(Evidence{shiftCanon(n.ev.witness, d, c)}, go(n.raw));
    }
    EvTermPtr operator()(const EErr&) const { return eErr(); }
  };
  return std::visit(V{d, cutoff}, e->node);
}

// evalSubst: replace variable k by `repl` in term positions and by the
// canonical normal form `nf` (of type `ty`) inside every evidence witness.
inline EvTermPtr evalSubst(int k, const EvTermPtr& repl, const CanonPtr& nf, const CanonPtr& ty,
                           const EvTermPtr& body, Fuel& fuel) {
  struct V {
    int k;
    const EvTermPtr& repl;
    const CanonPtr& nf;
    const CanonPtr& ty;
    Fuel& fuel;
    EvTermPtr go(const EvTermPtr& u) const { return evalSubst(k, repl, nf, ty, u, fuel); }
    EvTermPtr under(const EvTermPtr& u) const {
      return evalSubst(k + 1, shiftEv(repl, 1), shiftCanon(nf, 1), shiftCanon(ty, 1), u, fuel);
    }
    EvTermPtr operator()(const EVar& n) const {
      if (n.index == k) return repl;
      return eVar(n.index > k ? n.index - 1 : n.index, n.hint);
    }
    EvTermPtr operator()(const ELam& n) const { return eLam(n.hint, under(n.body)); }
    EvTermPtr operator()(const EApp& n) const { return eApp(go(n.fn), go(n.arg)); }
    EvTermPtr operator()(const EPi& n) const { return ePi(n.hint, go(n.dom), under(n.cod)); }
    EvTermPtr operator()(const EType& n) const { return eType(n.level); }
    EvTermPtr operator()(const EUnknown&) const { return eUnknown(); }
    EvTermPtr operator()(const ECtor& n) const {
      std::vector<EvTermPtr> args;
      for (const auto& a : n.args) args.push_back(go(a));
      return eCtor(n.ctor, std::move(args));
    }
    EvTermPtr operator()(const EWithEv& n) const {
      return eWithEv(Evidence{hsub(nf, k, ty, n.ev.witness, fuel)}, go(n.raw));
    }
    EvTermPtr operator()(const EErr&) const { return eErr(); }
  };
  return std::visit(V{k, repl, nf, ty, fuel}, body->node);
}

// ---------------------------------------------------------------------------
// Elaboration.
// ---------------------------------------------------------------------------

std::pair<EvTermPtr, CanonPtr> elabSynth(const Context& ctx, const TermPtr& t, Fuel& fuel);
EvTermPtr elabCheck(const Context& ctx, const TermPtr& t, const CanonPtr& U, Fuel& fuel);

inline CanonPtr unknownArrow() {
  return cPi("_", cUnknown(), Level::omega(), cUnknown());
}

// Builds the arrow (d0 -> d1 -> ... -> cod) annotated at lvl.
inline CanonPtr motivePiType(const std::vector<CanonPtr>& doms, const CanonPtr& cod, Level lvl) {
  CanonPtr out = cod;
  for (std::size_t i = doms.size(); i > 0; --i) out = cPi("x", doms[i - 1], lvl, out);
  return out;
}

inline std::pair<EvTermPtr, CanonPtr> elabCtor(const Context& ctx, const TCtor& c, Span span,
                                               Fuel& fuel) {
  // The normalizer already computes the canonical argument types and the
  // result type; elaboration re-runs the same signature walk producing
  // evidence terms.
  auto tyLvl = [&](const TermPtr& T) { return normTypeSynthLevel(ctx, T, fuel); };
  std::vector<EvTermPtr> eargs;
  auto res = ctorSynthNorm(ctx, c, span, fuel);  // validates and gives the type
  switch (c.ctor) {
    case Ctor::Nat:
      return {eCtor(Ctor::Nat, {}), res.second};
    case Ctor::Zero:
      return {eCtor(Ctor::Zero, {}), res.second};
    case Ctor::Succ:
      eargs = {elabCheck(ctx, c.args[0], cNat(), fuel)};
      break;
    case Ctor::Vec: {
      auto [A, lvl] = tyLvl(c.args[0]);
      eargs = {elabSynth(ctx, c.args[0], fuel).first, elabCheck(ctx, c.args[1], cNat(), fuel)};
      (void)A;
      break;
    }
    case Ctor::Nil: {
      eargs = {elabSynth(ctx, c.args[0], fuel).first};
      break;
    }
    case Ctor::Cons: {
      auto [A, lvl] = tyLvl(c.args[0]);
      CanonPtr n = normCheck(ctx, c.args[1], cNat(), fuel);
      eargs = {elabSynth(ctx, c.args[0], fuel).first, elabCheck(ctx, c.args[1], cNat(), fuel),
               elabCheck(ctx, c.args[2], A, fuel),
               elabCheck(ctx, c.args[3], cVec(A, n), fuel)};
      break;
    }
    case Ctor::Eq: {
      auto [A, lvl] = tyLvl(c.args[0]);
      eargs = {elabSynth(ctx, c.args[0], fuel).first, elabCheck(ctx, c.args[1], A, fuel),
               elabCheck(ctx, c.args[2], A, fuel)};
      break;
    }
    case Ctor::Refl: {
      auto [A, lvl] = tyLvl(c.args[0]);
      eargs = {elabSynth(ctx, c.args[0], fuel).first, elabCheck(ctx, c.args[1], A, fuel)};
      break;
    }
    case Ctor::NatElim: {
      auto [m, lvl] = checkMotive(ctx, c.args[0], {cNat()}, 0, fuel);
      CanonPtr mTy = motivePiType({cNat()}, lvl.isOmega() ? cUnknown() : cType(lvl.v), lvl);
      eargs = {elabCheck(ctx, c.args[0], mTy, fuel),
               elabCheck(ctx, c.args[1], applyCanon(m, cZero(), cNat(), fuel), fuel),
               elabCheck(ctx, c.args[2], natElimStepType(m, lvl, fuel), fuel),
               elabCheck(ctx, c.args[3], cNat(), fuel)};
      break;
    }
    case Ctor::VecElim: {
      auto [A, lvlA] = tyLvl(c.args[0]);
      CanonPtr n = normCheck(ctx, c.args[1], cNat(), fuel);
      auto [m, lvl] = checkMotive(ctx, c.args[2], {cVec(A, n)}, 0, fuel);
      CanonPtr mTy =
          motivePiType({cVec(A, n)}, lvl.isOmega() ? cUnknown() : cType(lvl.v), lvl);
      eargs = {elabSynth(ctx, c.args[0], fuel).first, elabCheck(ctx, c.args[1], cNat(), fuel),
               elabCheck(ctx, c.args[2], mTy, fuel),
               elabCheck(ctx, c.args[3], applyCanon(m, cNil(A), cVec(A, cZero()), fuel), fuel),
               elabCheck(ctx, c.args[4], vecElimStepType(A, m, lvl, fuel), fuel),
               elabCheck(ctx, c.args[5], cVec(A, n), fuel)};
      break;
    }
    case Ctor::EqElim: {
      auto [A, lvlA] = tyLvl(c.args[0]);
      std::vector<CanonPtr> doms = {A, shiftCanon(A, 1),
                                    cEq(shiftCanon(A, 2), cVar(1, "x"), cVar(0, "y"))};
      auto [m, lvl] = checkMotive(ctx, c.args[1], doms, 0, fuel);
      CanonPtr mTy = motivePiType(doms, lvl.isOmega() ? cUnknown() : cType(lvl.v), lvl);
      CanonPtr x = normCheck(ctx, c.args[3], A, fuel);
      CanonPtr y = normCheck(ctx, c.args[4], A, fuel);
      eargs = {elabSynth(ctx, c.args[0], fuel).first, elabCheck(ctx, c.args[1], mTy, fuel),
               elabCheck(ctx, c.args[2], eqElimMethodType(A, m, lvl, fuel), fuel),
               elabCheck(ctx, c.args[3], A, fuel), elabCheck(ctx, c.args[4], A, fuel),
               elabCheck(ctx, c.args[5], cEq(A, x, y), fuel)};
      break;
    }
  }
  return {eCtor(c.ctor, std::move(eargs)), res.second};
}

inline std::pair<EvTermPtr, CanonPtr> elabSynth(const Context& ctx, const TermPtr& t,
                                                Fuel& fuel) {
  struct V {
    const Context& ctx;
    Fuel& fuel;
    const TermPtr& self;
    std::pair<EvTermPtr, CanonPtr> operator()(const TVar& n) const {
      CanonPtr U = ctx.lookup(n.index);
      if (!U)
        typeError("unbound variable '" + n.hint + "'", ctx, nullptr, nullptr, self->span);
      return {eVar(n.index, n.hint), U};
    }
    std::pair<EvTermPtr, CanonPtr> operator()(const TType& n) const {
      return {eType(n.level), cType(n.level + 1)};
    }
    std::pair<EvTermPtr, CanonPtr> operator()(const TUnknown&) const {
      return {eWithEv(Evidence{cUnknown()}, eUnknown()), cUnknown()};
    }
    std::pair<EvTermPtr, CanonPtr> operator()(const TAscribe& n) const {
      auto [T, lvl] = normTypeSynthLevel(ctx, n.type, fuel);
      return {elabCheck(ctx, n.body, T, fuel), T};
    }
    std::pair<EvTermPtr, CanonPtr> operator()(const TApp& n) const {
      auto [f, F] = elabSynth(ctx, n.fn, fuel);
      CanonPtr A = domOf(F);
      if (!A) typeError("applying a non-function", ctx, nullptr, F, self->span);
      EvTermPtr a = elabCheck(ctx, n.arg, A, fuel);
      CanonPtr aCanon = normCheck(ctx, n.arg, A, fuel);
      CanonPtr resTy = codSub(aCanon, F, fuel);
      return {eApp(f, a), resTy ? resTy : cUnknown()};
    }
    std::pair<EvTermPtr, CanonPtr> operator()(const TPi& n) const {
      auto [dom, i] = normTypeSynthLevel(ctx, n.dom, fuel);
      EvTermPtr edom = elabSynth(ctx, n.dom, fuel).first;
      Context inner = ctx.extended(n.hint, dom);
      auto [cod, j] = normTypeSynthLevel(inner, n.cod, fuel);
      EvTermPtr ecod = elabSynth(inner, n.cod, fuel).first;
      Level l = (i.isOmega() || j.isOmega()) ? Level::omega() : Level::of(std::max(i.v, j.v));
      return {ePi(n.hint, edom, ecod), l.isOmega() ? cUnknown() : cType(l.v)};
    }
    std::pair<EvTermPtr, CanonPtr> operator()(const TLam&) const {
      typeError("cannot synthesize a type for an unannotated function", ctx, nullptr, nullptr,
                self->span);
    }
    std::pair<EvTermPtr, CanonPtr> operator()(const TCtor& n) const {
      return elabCtor(ctx, n, self->span, fuel);
    }
  };
  return std::visit(V{ctx, fuel, t}, t->node);
}

inline EvTermPtr elabCheck(const Context& ctx, const TermPtr& t, const CanonPtr& U, Fuel& fuel) {
  if (auto* lam = std::get_if<TLam>(&t->node)) {
    if (auto* pi = std::get_if<CPi>(&U->node)) {
      Context inner = ctx.extended(lam->hint, pi->dom);
      // Functions always carry their arrow type as evidence so the machine
      // has the domain at hand when beta-reducing.
      return eWithEv(Evidence{U}, eLam(lam->hint, elabCheck(inner, lam->body, pi->cod, fuel)));
    }
    if (isUnknown(U)) {
      Context inner = ctx.extended(lam->hint, cUnknown());
      return eWithEv(Evidence{unknownArrow()},
                     eLam(lam->hint, elabCheck(inner, lam->body, cUnknown(), fuel)));
    }
    typeError("function checked against a non-function type", ctx, U, nullptr, t->span);
  }
  if (std::holds_alternative<TUnknown>(t->node))
    return eWithEv(Evidence{U}, eUnknown());
  if (auto* pi = std::get_if<TPi>(&t->node)) {
    if (std::holds_alternative<CType>(U->node) || isUnknown(U)) {
      normCheck(ctx, t, U, fuel);  // validate levels
      auto [dom, i] = normTypeSynthLevel(ctx, pi->dom, fuel);
      EvTermPtr edom = elabSynth(ctx, pi->dom, fuel).first;
      Context inner = ctx.extended(pi->hint, dom);
      EvTermPtr ecod = elabSynth(inner, pi->cod, fuel).first;
      return ePi(pi->hint, edom, ecod);
    }
    typeError("arrow type checked against a non-universe", ctx, U, nullptr, t->span);
  }
  auto [e, Us] = elabSynth(ctx, t, fuel);
  if (auto* a = std::get_if<CType>(&Us->node)) {
    if (auto* b = std::get_if<CType>(&U->node)) {
      if (a->level <= b->level) return e;  // cumulativity: no evidence needed
      typeError("universe level too high", ctx, U, Us, t->span);
    }
  }
  CanonPtr W = meet(Us, U);
  if (!W) typeError("inconsistent types", ctx, U, Us, t->span);
  return eWithEv(Evidence{W}, e);
}

// Default-fuel wrappers.
inline std::pair<EvTermPtr, CanonPtr> elabSynth(const Context& ctx, const TermPtr& t,
                                                long fuelAmount = kDefaultNormFuel) {
  Fuel f{fuelAmount};
  return elabSynth(ctx, t, f);
}
inline EvTermPtr elabCheck(const Context& ctx, const TermPtr& t, const CanonPtr& U,
                           long fuelAmount = kDefaultNormFuel) {
  Fuel f{fuelAmount};
  return elabCheck(ctx, t, U, f);
}

// ---------------------------------------------------------------------------
// Evidence-term typing, used by the preservation harness.
// ---------------------------------------------------------------------------

CanonPtr evSynth(const Context& ctx, const EvTermPtr& e, Fuel& fuel);
void evCheck(const Context& ctx, const EvTermPtr& e, const CanonPtr& U, Fuel& fuel);

// Best-effort canonical form of an evidence term at a type; ? when the
// normalizer cannot produce one (the approximation is sound for evidence).
inline CanonPtr canonOfEv(const Context& ctx, const EvTermPtr& e, const CanonPtr& U,
                          Fuel& fuel) {
  try {
    return normCheck(ctx, eraseEv(e), U, fuel);
  } catch (const TypeError&) {
    return cUnknown();
  }
}

inline CanonPtr evSynth(const Context& ctx, const EvTermPtr& e, Fuel& fuel) {
  struct V {
    const Context& ctx;
    Fuel& fuel;
    const EvTermPtr& self;
    CanonPtr operator()(const EVar& n) const {
      CanonPtr U = ctx.lookup(n.index);
      if (!U) typeError("unbound variable '" + n.hint + "'", ctx);
      return U;
    }
    CanonPtr operator()(const EType& n) const { return cType(n.level + 1); }
    CanonPtr operator()(const EUnknown&) const { return cUnknown(); }
    CanonPtr operator()(const EErr&) const { return cUnknown(); }
    CanonPtr operator()(const EWithEv& n) const {
      evCheck(ctx, self, cUnknown(), fuel);
      return n.ev.witness;
    }
    CanonPtr operator()(const ELam&) const {
      typeError("cannot synthesize a type for a bare runtime function", ctx);
    }
    CanonPtr operator()(const EApp& n) const {
      CanonPtr F = evSynth(ctx, n.fn, fuel);
      CanonPtr A = domOf(F);
      if (!A) typeError("runtime application of a non-function", ctx, nullptr, F);
      evCheck(ctx, n.arg, A, fuel);
      CanonPtr a = canonOfEv(ctx, n.arg, A, fuel);
      CanonPtr R = codSub(a, F, fuel);
      return R ? R : cUnknown();
    }
    CanonPtr operator()(const EPi&) const {
      return normSynth(ctx, eraseEv(self), fuel).second;
    }
    CanonPtr operator()(const ECtor&) const {
      return normSynth(ctx, eraseEv(self), fuel).second;
    }
  };
  return std::visit(V{ctx, fuel, e}, e->node);
}

inline void evCheck(const Context& ctx, const EvTermPtr& e, const CanonPtr& U, Fuel& fuel) {
  if (std::holds_alternative<EErr>(e->node)) return;  // err types at any type
  if (auto* we = std::get_if<EWithEv>(&e->node)) {
    // The witness records one endpoint of a consistency judgment whose
    // middle type is not stored, so the invariant is pairwise: the witness
    // must be consistent with the expected type, and the wrapped term must
    // be coherent with the witness. Stacked evidence is checked through ?,
    // the least informative middle type; the composition step is where an
    // actual clash surfaces as a runtime error.
    const CanonPtr& W = we->ev.witness;
    if (!consistent(W, U)) typeError("evidence inconsistent with expected type", ctx, U, W);
    if (std::holds_alternative<EWithEv>(we->raw->node)) {
      evCheck(ctx, we->raw, cUnknown(), fuel);
      return;
    }
    if (std::holds_alternative<ELam>(we->raw->node)) {
      evCheck(ctx, we->raw, std::holds_alternative<CPi>(W->node) ? W : cUnknown(), fuel);
      return;
    }
    CanonPtr Uraw = evSynth(ctx, we->raw, fuel);
    if (auto* a = std::get_if<CType>(&Uraw->node)) {
      if (auto* b = std::get_if<CType>(&W->node)) {
        if (a->level <= b->level) return;
        typeError("universe level too high", ctx, W, Uraw);
      }
    }
    if (!consistent(Uraw, W)) typeError("evidence inconsistent with its subject", ctx, W, Uraw);
    return;
  }
  if (auto* lam = std::get_if<ELam>(&e->node)) {
    if (auto* pi = std::get_if<CPi>(&U->node)) {
      Context inner = ctx.extended(lam->hint, pi->dom);
      evCheck(inner, lam->body, pi->cod, fuel);
      return;
    }
    if (isUnknown(U)) {
      Context inner = ctx.extended(lam->hint, cUnknown());
      evCheck(inner, lam->body, cUnknown(), fuel);
      return;
    }
    typeError("runtime function at a non-function type", ctx, U);
  }
  CanonPtr Us = evSynth(ctx, e, fuel);
  if (auto* a = std::get_if<CType>(&Us->node)) {
    if (auto* b = std::get_if<CType>(&U->node)) {
      if (a->level <= b->level) return;
      typeError("universe level too high", ctx, U, Us);
    }
  }
  if (!consistent(Us, U)) typeError("inconsistent runtime types", ctx, U, Us);
}

inline CanonPtr evSynth(const Context& ctx, const EvTermPtr& e,
                        long fuelAmount = kDefaultNormFuel) {
  Fuel f{fuelAmount};
  return evSynth(ctx, e, f);
}
inline bool evChecks(const Context& ctx, const EvTermPtr& e, const CanonPtr& U,
                     long fuelAmount = kDefaultNormFuel) {
  try {
    Fuel f{fuelAmount};
    evCheck(ctx, e, U, f);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// The runtime machine.
// ---------------------------------------------------------------------------

inline bool isEvValue(const EvTermPtr& e);

inline bool isRawValue(const EvTermPtr& e) {
  struct V {
    bool operator()(const EVar&) const { return false; }
    bool operator()(const ELam&) const { return true; }
    bool operator()(const EApp&) const { return false; }
    bool operator()(const EPi&) const { return true; }
    bool operator()(const EType&) const { return true; }
    bool operator()(const EUnknown&) const { return true; }
    bool operator()(const ECtor& n) const {
      if (n.ctor == Ctor::NatElim || n.ctor == Ctor::VecElim || n.ctor == Ctor::EqElim)
        return false;
      for (const auto& a : n.args)
        if (!isEvValue(a)) return false;
      return true;
    }
    bool operator()(const EWithEv&) const { return false; }
    bool operator()(const EErr&) const { return false; }
  };
  return std::visit(V{}, e->node);
}

inline bool isEvValue(const EvTermPtr& e) {
  if (auto* we = std::get_if<EWithEv>(&e->node)) return isRawValue(we->raw);
  return isRawValue(e);
}

struct StepOut {
  enum Kind { Stepped, Value, Err } kind;
  EvTermPtr term;              // successor (Stepped) or the value itself
  const char* rule = "";       // rule name for tracing
  CanonPtr errLeft, errRight;  // the failing meet pair, when kind == Err
};

StepOut step(const EvTermPtr& e, Fuel& normFuel);

namespace detail_ev {

inline StepOut err(const char* rule, CanonPtr l, CanonPtr r) {
  return {StepOut::Err, eErr(), rule, std::move(l), std::move(r)};
}

// The evidence on an argument value, defaulting to its synthesized type when
// the value is raw.
inline std::optional<Evidence> argEvidence(const EvTermPtr& v, Fuel& fuel) {
  if (auto* we = std::get_if<EWithEv>(&v->node)) return we->ev;
  try {
    return Evidence{normSynth(Context{}, eraseEv(v), fuel).second};
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

inline EvTermPtr rawOf(const EvTermPtr& v) {
  if (auto* we = std::get_if<EWithEv>(&v->node)) return we->raw;
  return v;
}

}  // namespace detail_ev

inline StepOut step(const EvTermPtr& e, Fuel& normFuel) {
  using detail_ev::argEvidence;
  using detail_ev::err;
  using detail_ev::rawOf;

  if (std::holds_alternative<EErr>(e->node)) return err("StepErr", nullptr, nullptr);
  if (isEvValue(e)) return {StepOut::Value, e, "Value", nullptr, nullptr};

  // Stacked evidence composes (or fails) eagerly, before any stepping under
  // it, so pending-evidence towers stay bounded along diverging runs.
  if (auto* outer = std::get_if<EWithEv>(&e->node)) {
    if (auto* inner = std::get_if<EWithEv>(&outer->raw->node)) {
      auto composed = composeEvidence(inner->ev, outer->ev);
      if (!composed) return err("StepAscrFail", inner->ev.witness, outer->ev.witness);
      return {StepOut::Stepped, eWithEv(*composed, inner->raw), "StepAscr", nullptr,
              nullptr};
    }
    StepOut s = step(outer->raw, normFuel);
    if (s.kind == StepOut::Err) return {StepOut::Err, eErr(), "StepContextErr", s.errLeft,
                                        s.errRight};
    if (s.kind == StepOut::Value)
      throw InternalError("step: evidence wrapper around an unsteppable value");
    return {StepOut::Stepped, eWithEv(outer->ev, s.term), s.rule, nullptr, nullptr};
  }

  if (auto* app = std::get_if<EApp>(&e->node)) {
    if (!isEvValue(app->fn)) {
      StepOut s = step(app->fn, normFuel);
      if (s.kind == StepOut::Err)
        return {StepOut::Err, eErr(), "StepContextErr", s.errLeft, s.errRight};
      return {StepOut::Stepped, eApp(s.term, app->arg), s.rule, nullptr, nullptr};
    }
    if (!isEvValue(app->arg)) {
      StepOut s = step(app->arg, normFuel);
      if (s.kind == StepOut::Err)
        return {StepOut::Err, eErr(), "StepContextErr", s.errLeft, s.errRight};
      return {StepOut::Stepped, eApp(app->fn, s.term), s.rule, nullptr, nullptr};
    }
    // Both sides are values. Decompose the function.
    Evidence fnEv{cUnknown()};
    EvTermPtr fnRaw = app->fn;
    if (auto* we = std::get_if<EWithEv>(&app->fn->node)) {
      fnEv = we->ev;
      fnRaw = we->raw;
    }
    CanonPtr W = fnEv.witness;
    CanonPtr dom = domOf(W);
    if (!dom) return err("StepAppNonFn", W, nullptr);

    // Compose the domain evidence onto the argument.
    auto aEv = argEvidence(app->arg, normFuel);
    if (!aEv) return err("StepAppFailTrans", dom, nullptr);
    CanonPtr composed = meet(dom, aEv->witness);
    if (!composed) return err("StepAppFailTrans", aEv->witness, dom);
    EvTermPtr argWrapped = eWithEv(Evidence{composed}, rawOf(app->arg));
    CanonPtr aCanon = canonOfEv(Context{}, argWrapped, dom, normFuel);

    CanonPtr codEv = codSub(aCanon, W, normFuel);
    if (!codEv) codEv = cUnknown();

    if (std::holds_alternative<EUnknown>(fnRaw->node)) {
      // Applying the unknown yields the unknown at the codomain.
      return {StepOut::Stepped, eWithEv(Evidence{codEv}, eUnknown()), "StepAppDyn", nullptr,
              nullptr};
    }
    if (auto* lam = std::get_if<ELam>(&fnRaw->node)) {
      EvTermPtr body = evalSubst(0, argWrapped, aCanon, dom, lam->body, normFuel);
      return {StepOut::Stepped, eWithEv(Evidence{codEv}, body), "StepAppEv", nullptr, nullptr};
    }
    return err("StepAppNonFn", W, nullptr);
  }

  if (auto* c = std::get_if<ECtor>(&e->node)) {
    // Evaluate arguments left to right (constructors and eliminators alike).
    std::vector<EvTermPtr> args = c->args;
    for (auto& a : args) {
      if (isEvValue(a)) continue;
      StepOut s = step(a, normFuel);
      if (s.kind == StepOut::Err)
        return {StepOut::Err, eErr(), "StepContextErr", s.errLeft, s.errRight};
      a = s.term;
      return {StepOut::Stepped, eCtor(c->ctor, std::move(args)), s.rule, nullptr, nullptr};
    }
    // All arguments are values; eliminators reduce on the scrutinee.
    auto scrutRaw = [&](const EvTermPtr& s) { return rawOf(s); };
    if (c->ctor == Ctor::NatElim) {
      const EvTermPtr &m = args[0], &z = args[1], &s = args[2];
      EvTermPtr scrut = scrutRaw(args[3]);
      if (auto* k = std::get_if<ECtor>(&scrut->node)) {
        if (k->ctor == Ctor::Zero)
          return {StepOut::Stepped, z, "StepNatElimZero", nullptr, nullptr};
        if (k->ctor == Ctor::Succ) {
          EvTermPtr n = k->args[0];
          EvTermPtr rec = eCtor(Ctor::NatElim, {m, z, s, n});
          return {StepOut::Stepped, eApp(eApp(s, n), rec), "StepNatElimSucc", nullptr,
                  nullptr};
        }
      }
      if (std::holds_alternative<EUnknown>(scrut->node)) {
        CanonPtr mC = canonOfEv(Context{}, m, unknownArrow(), normFuel);
        CanonPtr W = applyCanon(mC, cUnknown(), cNat(), normFuel);
        return {StepOut::Stepped, eWithEv(Evidence{W}, eUnknown()), "StepNatElimDyn", nullptr,
                nullptr};
      }
      return err("StepNatElimStuck", nullptr, nullptr);
    }
    if (c->ctor == Ctor::VecElim) {
      const EvTermPtr &A = args[0], &m = args[2], &z = args[3], &s = args[4];
      EvTermPtr scrut = scrutRaw(args[5]);
      if (auto* k = std::get_if<ECtor>(&scrut->node)) {
        if (k->ctor == Ctor::Nil)
          return {StepOut::Stepped, z, "StepVecElimNil", nullptr, nullptr};
        if (k->ctor == Ctor::Cons) {
          EvTermPtr n = k->args[1], h = k->args[2], t = k->args[3];
          EvTermPtr rec = eCtor(Ctor::VecElim, {A, n, m, z, s, t});
          return {StepOut::Stepped, eApp(eApp(eApp(eApp(s, n), h), t), rec),
                  "StepVecElimCons", nullptr, nullptr};
        }
      }
      if (std::holds_alternative<EUnknown>(scrut->node)) {
        CanonPtr mC = canonOfEv(Context{}, m, unknownArrow(), normFuel);
        CanonPtr W = applyCanon(mC, cUnknown(), cUnknown(), normFuel);
        return {StepOut::Stepped, eWithEv(Evidence{W}, eUnknown()), "StepVecElimDyn", nullptr,
                nullptr};
      }
      return err("StepVecElimStuck", nullptr, nullptr);
    }
    if (c->ctor == Ctor::EqElim) {
      const EvTermPtr& mth = args[2];
      EvTermPtr scrut = scrutRaw(args[5]);
      if (auto* k = std::get_if<ECtor>(&scrut->node)) {
        if (k->ctor == Ctor::Refl)
          return {StepOut::Stepped, eApp(mth, k->args[1]), "StepEqElimRefl", nullptr, nullptr};
      }
      if (std::holds_alternative<EUnknown>(scrut->node)) {
        // ? eliminates as Refl ? ?.
        return {StepOut::Stepped, eApp(mth, eWithEv(Evidence{cUnknown()}, eUnknown())),
                "StepEqElimDyn", nullptr, nullptr};
      }
      return err("StepEqElimStuck", nullptr, nullptr);
    }
    throw InternalError("step: constructor with value arguments was not a value");
  }

  throw InternalError("step: no rule applies (open term?)");
}

struct RunResult {
  enum Status { Value, Err, Fuel } status;
  EvTermPtr term;  // final value (Value) or last state (Fuel)
  long steps = 0;
  CanonPtr errLeft, errRight;  // failing meet pair when status == Err
};

inline RunResult run(EvTermPtr e, long fuel = 100000,
                     const std::function<void(const char*, const EvTermPtr&)>& trace = {}) {
  for (long i = 0; i < fuel; ++i) {
    Fuel nf{kDefaultNormFuel};
    StepOut s = step(e, nf);
    if (s.kind == StepOut::Value) return {RunResult::Value, s.term, i, nullptr, nullptr};
    if (s.kind == StepOut::Err) {
      if (trace) trace(s.rule, eErr());
      return {RunResult::Err, eErr(), i + 1, s.errLeft, s.errRight};
    }
    if (trace) trace(s.rule, s.term);
    e = s.term;
  }
  return {RunResult::Fuel, e, fuel, nullptr, nullptr};
}

}  // namespace gdtl

#endif  // GDTL_EVIDENCE_HPP
