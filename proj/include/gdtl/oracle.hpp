#ifndef GDTL_ORACLE_HPP
#define GDTL_ORACLE_HPP

// Bounded concretization/abstraction oracle, used only by tests. Gradual
// terms denote sets of static terms; this oracle enumerates the members of
// bounded syntactic depth over a fixed leaf alphabet:
//   Type 1, Type 2, Nat, the numerals 0 1 2, and one free variable (index 0).
// Composite members are Succ _, Vec Nat _, and Nat -> _ arrows at levels
// 1 and 2. Numerals count as leaves (depth 0).

#include <functional>
#include <vector>

#include "gdtl/gradops.hpp"
#include "gdtl/pretty.hpp"
#include "gdtl/syntax.hpp"

namespace gdtl::oracle {

inline std::vector<CanonPtr> staticLeaves() {
  return {cType(1), cType(2), cNat(), cNumeral(0), cNumeral(1), cNumeral(2), cVar(0, "a")};
}

inline CanonPtr arrowFromNat(const CanonPtr& cod, std::uint32_t level) {
  return cPi("_", cNat(), Level::of(level), shiftCanon(cod, 1));
}

// All static members of the bounded universe with depth <= d.
inline std::vector<CanonPtr> enumStatic(int d) {
  std::vector<CanonPtr> out = staticLeaves();
  if (d <= 0) return out;
  for (const CanonPtr& u : enumStatic(d - 1)) {
    out.push_back(cSucc(u));
    out.push_back(cVec(cNat(), u));
    out.push_back(arrowFromNat(u, 1));
    out.push_back(arrowFromNat(u, 2));
  }
  return out;
}

// All gradual members of the bounded universe with depth <= d (the static
// members plus ?, with omega arrows as a third arrow flavor).
inline std::vector<CanonPtr> enumGradual(int d) {
  std::vector<CanonPtr> out = staticLeaves();
  out.push_back(cUnknown());
  if (d <= 0) return out;
  for (const CanonPtr& u : enumGradual(d - 1)) {
    out.push_back(cSucc(u));
    out.push_back(cVec(cNat(), u));
    out.push_back(arrowFromNat(u, 1));
    out.push_back(arrowFromNat(u, 2));
    out.push_back(cPi("_", cNat(), Level::omega(), shiftCanon(u, 1)));
  }
  return out;
}

// Depth with numerals (and all leaves) at 0.
inline int depthOf(const CanonPtr& u) {
  if (detail::canonNumeral(u)) return 0;
  struct V {
    int go(const CanonPtr& u) const { return depthOf(u); }
    int operator()(const CLam& n) const { return 1 + go(n.body); }
    int operator()(const CPi& n) const { return 1 + std::max(go(n.dom), go(n.cod)); }
    int operator()(const CType&) const { return 0; }
    int operator()(const CUnknown&) const { return 0; }
    int operator()(const CNeutral& n) const {
      int d = 0;
      for (const auto& e : n.spine) {
        if (auto* a = std::get_if<SArg>(&e)) d = std::max(d, 1 + go(a->arg));
        else d = std::max(d, 1);
      }
      return d;
    }
    int operator()(const CNat&) const { return 0; }
    int operator()(const CZero&) const { return 0; }
    int operator()(const CSucc& n) const { return 1 + go(n.pred); }
    int operator()(const CVec& n) const { return 1 + std::max(go(n.elem), go(n.len)); }
    int operator()(const CNil& n) const { return 1 + go(n.elem); }
    int operator()(const CCons& n) const {
      return 1 + std::max(std::max(go(n.elem), go(n.len)), std::max(go(n.head), go(n.tail)));
    }
    int operator()(const CEq& n) const {
      return 1 + std::max(go(n.type), std::max(go(n.lhs), go(n.rhs)));
    }
    int operator()(const CRefl& n) const { return 1 + std::max(go(n.type), go(n.value)); }
  };
  return std::visit(V{}, u->node);
}

inline std::vector<std::uint32_t> concretizeLevel(Level l) {
  if (l.isOmega()) return {1, 2};
  return {l.v};
}

// The subset of the concretization of u whose members fit within depth d.
inline std::vector<CanonPtr> concretizeBounded(const CanonPtr& u, int d) {
  if (d < 0) return {};
  if (isUnknown(u)) return enumStatic(d);
  if (detail::canonNumeral(u)) return {u};
  struct V {
    int d;
    const CanonPtr& self;
    std::vector<CanonPtr> sub(const CanonPtr& u) const { return concretizeBounded(u, d - 1); }
    std::vector<CanonPtr> operator()(const CLam& n) const {
      std::vector<CanonPtr> out;
      for (const auto& b : sub(n.body)) out.push_back(cLam(n.hint, b));
      return out;
    }
    std::vector<CanonPtr> operator()(const CPi& n) const {
      // Arrows in the bounded universe are non-dependent, so the codomain can
      // be concretized outside the binder and re-shifted; filling a ? in place
      // would capture the binder index.
      std::vector<CanonPtr> out;
      for (const auto& dm : sub(n.dom))
        for (const auto& cd : sub(shiftCanon(n.cod, -1, 1)))
          for (std::uint32_t l : concretizeLevel(n.level))
            out.push_back(cPi(n.hint, dm, Level::of(l), shiftCanon(cd, 1)));
      return out;
    }
    std::vector<CanonPtr> operator()(const CType&) const { return {self}; }
    std::vector<CanonPtr> operator()(const CUnknown&) const { return enumStatic(d); }
    std::vector<CanonPtr> operator()(const CNeutral& n) const {
      if (n.spine.empty()) return {self};
      // Only plain-argument spines occur in the bounded universe.
      std::vector<Spine> spines = {{}};
      for (const auto& e : n.spine) {
        auto* a = std::get_if<SArg>(&e);
        if (!a) return {};
        std::vector<Spine> next;
        for (const auto& sp : spines)
          for (const auto& av : sub(a->arg)) {
            Spine s2 = sp;
            s2.push_back(SArg{av});
            next.push_back(std::move(s2));
          }
        spines = std::move(next);
      }
      std::vector<CanonPtr> out;
      for (auto& sp : spines) out.push_back(cNeutral(n.index, n.hint, std::move(sp)));
      return out;
    }
    std::vector<CanonPtr> operator()(const CNat&) const { return {self}; }
    std::vector<CanonPtr> operator()(const CZero&) const { return {self}; }
    std::vector<CanonPtr> operator()(const CSucc& n) const {
      std::vector<CanonPtr> out;
      for (const auto& p : sub(n.pred)) out.push_back(cSucc(p));
      return out;
    }
    std::vector<CanonPtr> operator()(const CVec& n) const {
      std::vector<CanonPtr> out;
      for (const auto& e : sub(n.elem))
        for (const auto& l : sub(n.len)) out.push_back(cVec(e, l));
      return out;
    }
    std::vector<CanonPtr> operator()(const CNil& n) const {
      std::vector<CanonPtr> out;
      for (const auto& e : sub(n.elem)) out.push_back(cNil(e));
      return out;
    }
    std::vector<CanonPtr> operator()(const CCons& n) const {
      std::vector<CanonPtr> out;
      for (const auto& e : sub(n.elem))
        for (const auto& l : sub(n.len))
          for (const auto& h : sub(n.head))
            for (const auto& t : sub(n.tail)) out.push_back(cCons(e, l, h, t));
      return out;
    }
    std::vector<CanonPtr> operator()(const CEq& n) const {
      std::vector<CanonPtr> out;
      for (const auto& t : sub(n.type))
        for (const auto& x : sub(n.lhs))
          for (const auto& y : sub(n.rhs)) out.push_back(cEq(t, x, y));
      return out;
    }
    std::vector<CanonPtr> operator()(const CRefl& n) const {
      std::vector<CanonPtr> out;
      for (const auto& t : sub(n.type))
        for (const auto& x : sub(n.value)) out.push_back(cRefl(t, x));
      return out;
    }
  };
  return std::visit(V{d, u}, u->node);
}

// Abstraction: the most precise gradual term covering every member of S.
// Same-shape sets recurse componentwise; anything heterogeneous collapses
// to ?.
inline CanonPtr abstractSet(const std::vector<CanonPtr>& S) {
  if (S.empty()) throw std::invalid_argument("abstractSet: empty set");
  std::size_t shape = S[0]->node.index();
  for (const auto& u : S)
    if (u->node.index() != shape) return cUnknown();
  auto comp = [&](const std::function<CanonPtr(const CanonPtr&)>& sel) {
    std::vector<CanonPtr> parts;
    parts.reserve(S.size());
    for (const auto& u : S) parts.push_back(sel(u));
    return abstractSet(parts);
  };
  const CanonPtr& first = S[0];
  if (auto* n = std::get_if<CLam>(&first->node)) {
    return cLam(n->hint, comp([](const CanonPtr& u) { return std::get<CLam>(u->node).body; }));
  }
  if (auto* n = std::get_if<CPi>(&first->node)) {
    Level l = n->level;
    for (const auto& u : S)
      if (!(std::get<CPi>(u->node).level == l)) l = Level::omega();
    return cPi(n->hint, comp([](const CanonPtr& u) { return std::get<CPi>(u->node).dom; }), l,
               comp([](const CanonPtr& u) { return std::get<CPi>(u->node).cod; }));
  }
  if (auto* n = std::get_if<CType>(&first->node)) {
    for (const auto& u : S)
      if (std::get<CType>(u->node).level != n->level) return cUnknown();
    return first;
  }
  if (std::holds_alternative<CUnknown>(first->node)) return cUnknown();
  if (auto* n = std::get_if<CNeutral>(&first->node)) {
    for (const auto& u : S) {
      const auto& o = std::get<CNeutral>(u->node);
      if (o.index != n->index || o.spine.size() != n->spine.size()) return cUnknown();
      for (const auto& e : o.spine)
        if (!std::holds_alternative<SArg>(e)) return cUnknown();
    }
    Spine sp;
    for (std::size_t i = 0; i < n->spine.size(); ++i) {
      std::vector<CanonPtr> parts;
      for (const auto& u : S)
        parts.push_back(std::get<SArg>(std::get<CNeutral>(u->node).spine[i]).arg);
      sp.push_back(SArg{abstractSet(parts)});
    }
    return cNeutral(n->index, n->hint, std::move(sp));
  }
  if (std::holds_alternative<CNat>(first->node)) return first;
  if (std::holds_alternative<CZero>(first->node)) return first;
  if (std::holds_alternative<CSucc>(first->node))
    return cSucc(comp([](const CanonPtr& u) { return std::get<CSucc>(u->node).pred; }));
  if (std::holds_alternative<CVec>(first->node))
    return cVec(comp([](const CanonPtr& u) { return std::get<CVec>(u->node).elem; }),
                comp([](const CanonPtr& u) { return std::get<CVec>(u->node).len; }));
  if (std::holds_alternative<CNil>(first->node))
    return cNil(comp([](const CanonPtr& u) { return std::get<CNil>(u->node).elem; }));
  if (std::holds_alternative<CCons>(first->node))
    return cCons(comp([](const CanonPtr& u) { return std::get<CCons>(u->node).elem; }),
                 comp([](const CanonPtr& u) { return std::get<CCons>(u->node).len; }),
                 comp([](const CanonPtr& u) { return std::get<CCons>(u->node).head; }),
                 comp([](const CanonPtr& u) { return std::get<CCons>(u->node).tail; }));
  if (std::holds_alternative<CEq>(first->node))
    return cEq(comp([](const CanonPtr& u) { return std::get<CEq>(u->node).type; }),
               comp([](const CanonPtr& u) { return std::get<CEq>(u->node).lhs; }),
               comp([](const CanonPtr& u) { return std::get<CEq>(u->node).rhs; }));
  if (std::holds_alternative<CRefl>(first->node))
    return cRefl(comp([](const CanonPtr& u) { return std::get<CRefl>(u->node).type; }),
                 comp([](const CanonPtr& u) { return std::get<CRefl>(u->node).value; }));
  throw InternalError("abstractSet: unhandled shape");
}

// Stable textual key for set membership.
inline std::string key(const CanonPtr& u) { return prettyCanon(u, {"a"}, true); }

}  // namespace gdtl::oracle

#endif  // GDTL_ORACLE_HPP
