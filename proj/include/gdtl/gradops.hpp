#ifndef GDTL_GRADOPS_HPP
#define GDTL_GRADOPS_HPP

#include "gdtl/syntax.hpp"

namespace gdtl {

// Consistency, precision, and meet on canonical forms. The unknown term is
// consistent with everything and is the top of the precision order; the meet
// is the greatest lower bound and is defined exactly on consistent pairs.
// Arrow-level annotations participate: an integer level is more precise than
// the unknown level (omega); distinct integers are inconsistent.

inline bool levelConsistent(Level a, Level b) {
  return a.isOmega() || b.isOmega() || a.v == b.v;
}
inline bool levelPrecision(Level a, Level b) { return b.isOmega() || a.v == b.v; }
inline bool levelMeet(Level a, Level b, Level& out) {
  if (a.isOmega()) {
    out = b;
    return true;
  }
  if (b.isOmega() || a.v == b.v) {
    out = a;
    return true;
  }
  return false;
}

bool consistent(const CanonPtr& a, const CanonPtr& b);

inline bool consistentEntry(const SpineEntry& a, const SpineEntry& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<SArg>(&a)) return consistent(x->arg, std::get<SArg>(b).arg);
  if (auto* x = std::get_if<SNatElim>(&a)) {
    const auto& y = std::get<SNatElim>(b);
    return consistent(x->motive, y.motive) && consistent(x->base, y.base) &&
           consistent(x->step, y.step);
  }
  if (auto* x = std::get_if<SVecElim>(&a)) {
    const auto& y = std::get<SVecElim>(b);
    return consistent(x->elem, y.elem) && consistent(x->len, y.len) &&
           consistent(x->motive, y.motive) && consistent(x->base, y.base) &&
           consistent(x->step, y.step);
  }
  const auto& x = std::get<SEqElim>(a);
  const auto& y = std::get<SEqElim>(b);
  return consistent(x.type, y.type) && consistent(x.motive, y.motive) &&
         consistent(x.method, y.method) && consistent(x.lhs, y.lhs) && consistent(x.rhs, y.rhs);
}

inline bool consistent(const CanonPtr& a, const CanonPtr& b) {
  if (isUnknown(a) || isUnknown(b)) return true;
  if (a->node.index() != b->node.index()) return false;
  struct V {
    const CanonNode& other;
    bool operator()(const CLam& n) const { return consistent(n.body, std::get<CLam>(other).body); }
    bool operator()(const CPi& n) const {
      const auto& o = std::get<CPi>(other);
      return levelConsistent(n.level, o.level) && consistent(n.dom, o.dom) &&
             consistent(n.cod, o.cod);
    }
    bool operator()(const CType& n) const { return n.level == std::get<CType>(other).level; }
    bool operator()(const CUnknown&) const { return true; }
    bool operator()(const CNeutral& n) const {
      const auto& o = std::get<CNeutral>(other);
      if (n.index != o.index || n.spine.size() != o.spine.size()) return false;
      for (std::size_t i = 0; i < n.spine.size(); ++i)
        if (!consistentEntry(n.spine[i], o.spine[i])) return false;
      return true;
    }
    bool operator()(const CNat&) const { return true; }
    bool operator()(const CZero&) const { return true; }
    bool operator()(const CSucc& n) const {
      return consistent(n.pred, std::get<CSucc>(other).pred);
    }
    bool operator()(const CVec& n) const {
      const auto& o = std::get<CVec>(other);
      return consistent(n.elem, o.elem) && consistent(n.len, o.len);
    }
    bool operator()(const CNil& n) const { return consistent(n.elem, std::get<CNil>(other).elem); }
    bool operator()(const CCons& n) const {
      const auto& o = std::get<CCons>(other);
      return consistent(n.elem, o.elem) && consistent(n.len, o.len) &&
             consistent(n.head, o.head) && consistent(n.tail, o.tail);
    }
    bool operator()(const CEq& n) const {
      const auto& o = std::get<CEq>(other);
      return consistent(n.type, o.type) && consistent(n.lhs, o.lhs) && consistent(n.rhs, o.rhs);
    }
    bool operator()(const CRefl& n) const {
      const auto& o = std::get<CRefl>(other);
      return consistent(n.type, o.type) && consistent(n.value, o.value);
    }
  };
  return std::visit(V{b->node}, a->node);
}

bool precision(const CanonPtr& a, const CanonPtr& b);  // a more precise than b

inline bool precisionEntry(const SpineEntry& a, const SpineEntry& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<SArg>(&a)) return precision(x->arg, std::get<SArg>(b).arg);
  if (auto* x = std::get_if<SNatElim>(&a)) {
    const auto& y = std::get<SNatElim>(b);
    return precision(x->motive, y.motive) && precision(x->base, y.base) &&
           precision(x->step, y.step);
  }
  if (auto* x = std::get_if<SVecElim>(&a)) {
    const auto& y = std::get<SVecElim>(b);
    return precision(x->elem, y.elem) && precision(x->len, y.len) &&
           precision(x->motive, y.motive) && precision(x->base, y.base) &&
           precision(x->step, y.step);
  }
  const auto& x = std::get<SEqElim>(a);
  const auto& y = std::get<SEqElim>(b);
  return precision(x.type, y.type) && precision(x.motive, y.motive) &&
         precision(x.method, y.method) && precision(x.lhs, y.lhs) && precision(x.rhs, y.rhs);
}

inline bool precision(const CanonPtr& a, const CanonPtr& b) {
  if (isUnknown(b)) return true;
  if (isUnknown(a)) return false;
  if (a->node.index() != b->node.index()) return false;
  struct V {
    const CanonNode& other;
    bool operator()(const CLam& n) const { return precision(n.body, std::get<CLam>(other).body); }
    bool operator()(const CPi& n) const {
      const auto& o = std::get<CPi>(other);
      return levelPrecision(n.level, o.level) && precision(n.dom, o.dom) &&
             precision(n.cod, o.cod);
    }
    bool operator()(const CType& n) const { return n.level == std::get<CType>(other).level; }
    bool operator()(const CUnknown&) const { return true; }
    bool operator()(const CNeutral& n) const {
      const auto& o = std::get<CNeutral>(other);
      if (n.index != o.index || n.spine.size() != o.spine.size()) return false;
      for (std::size_t i = 0; i < n.spine.size(); ++i)
        if (!precisionEntry(n.spine[i], o.spine[i])) return false;
      return true;
    }
    bool operator()(const CNat&) const { return true; }
    bool operator()(const CZero&) const { return true; }
    bool operator()(const CSucc& n) const { return precision(n.pred, std::get<CSucc>(other).pred); }
    bool operator()(const CVec& n) const {
      const auto& o = std::get<CVec>(other);
      return precision(n.elem, o.elem) && precision(n.len, o.len);
    }
    bool operator()(const CNil& n) const { return precision(n.elem, std::get<CNil>(other).elem); }
    bool operator()(const CCons& n) const {
      const auto& o = std::get<CCons>(other);
      return precision(n.elem, o.elem) && precision(n.len, o.len) && precision(n.head, o.head) &&
             precision(n.tail, o.tail);
    }
    bool operator()(const CEq& n) const {
      const auto& o = std::get<CEq>(other);
      return precision(n.type, o.type) && precision(n.lhs, o.lhs) && precision(n.rhs, o.rhs);
    }
    bool operator()(const CRefl& n) const {
      const auto& o = std::get<CRefl>(other);
      return precision(n.type, o.type) && precision(n.value, o.value);
    }
  };
  return std::visit(V{b->node}, a->node);
}

// Meet: nullptr signals "undefined" (the pair is inconsistent).
CanonPtr meet(const CanonPtr& a, const CanonPtr& b);

inline bool meetEntry(const SpineEntry& a, const SpineEntry& b, SpineEntry& out) {
  if (a.index() != b.index()) return false;
  auto m = [](const CanonPtr& x, const CanonPtr& y, CanonPtr& o) {
    o = meet(x, y);
    return o != nullptr;
  };
  if (auto* x = std::get_if<SArg>(&a)) {
    SArg r;
    if (!m(x->arg, std::get<SArg>(b).arg, r.arg)) return false;
    out = r;
    return true;
  }
  if (auto* x = std::get_if<SNatElim>(&a)) {
    const auto& y = std::get<SNatElim>(b);
    SNatElim r;
    if (!m(x->motive, y.motive, r.motive) || !m(x->base, y.base, r.base) ||
        !m(x->step, y.step, r.step))
      return false;
    out = r;
    return true;
  }
  if (auto* x = std::get_if<SVecElim>(&a)) {
    const auto& y = std::get<SVecElim>(b);
    SVecElim r;
    if (!m(x->elem, y.elem, r.elem) || !m(x->len, y.len, r.len) ||
        !m(x->motive, y.motive, r.motive) || !m(x->base, y.base, r.base) ||
        !m(x->step, y.step, r.step))
      return false;
    out = r;
    return true;
  }
  const auto& x = std::get<SEqElim>(a);
  const auto& y = std::get<SEqElim>(b);
  SEqElim r;
  if (!m(x.type, y.type, r.type) || !m(x.motive, y.motive, r.motive) ||
      !m(x.method, y.method, r.method) || !m(x.lhs, y.lhs, r.lhs) || !m(x.rhs, y.rhs, r.rhs))
    return false;
  out = r;
  return true;
}

inline CanonPtr meet(const CanonPtr& a, const CanonPtr& b) {
  if (isUnknown(a)) return b;
  if (isUnknown(b)) return a;
  if (a->node.index() != b->node.index()) return nullptr;
  struct V {
    const CanonPtr& a;
    const CanonPtr& b;
    CanonPtr operator()(const CLam& n) const {
      CanonPtr body = meet(n.body, std::get<CLam>(b->node).body);
      return body ? cLam(n.hint, body) : nullptr;
    }
    CanonPtr operator()(const CPi& n) const {
      const auto& o = std::get<CPi>(b->node);
      Level l{};
      if (!levelMeet(n.level, o.level, l)) return nullptr;
      CanonPtr dom = meet(n.dom, o.dom);
      if (!dom) return nullptr;
      CanonPtr cod = meet(n.cod, o.cod);
      return cod ? cPi(n.hint, dom, l, cod) : nullptr;
    }
    CanonPtr operator()(const CType& n) const {
      return n.level == std::get<CType>(b->node).level ? a : nullptr;
    }
    CanonPtr operator()(const CUnknown&) const { return b; }
    CanonPtr operator()(const CNeutral& n) const {
      const auto& o = std::get<CNeutral>(b->node);
      if (n.index != o.index || n.spine.size() != o.spine.size()) return nullptr;
      Spine sp(n.spine.size(), SpineEntry{SArg{nullptr}});
      for (std::size_t i = 0; i < n.spine.size(); ++i)
        if (!meetEntry(n.spine[i], o.spine[i], sp[i])) return nullptr;
      return cNeutral(n.index, n.hint, std::move(sp));
    }
    CanonPtr operator()(const CNat&) const { return a; }
    CanonPtr operator()(const CZero&) const { return a; }
    CanonPtr operator()(const CSucc& n) const {
      CanonPtr p = meet(n.pred, std::get<CSucc>(b->node).pred);
      return p ? cSucc(p) : nullptr;
    }
    CanonPtr operator()(const CVec& n) const {
      const auto& o = std::get<CVec>(b->node);
      CanonPtr e = meet(n.elem, o.elem);
      if (!e) return nullptr;
      CanonPtr l = meet(n.len, o.len);
      return l ? cVec(e, l) : nullptr;
    }
    CanonPtr operator()(const CNil& n) const {
      CanonPtr e = meet(n.elem, std::get<CNil>(b->node).elem);
      return e ? cNil(e) : nullptr;
    }
    CanonPtr operator()(const CCons& n) const {
      const auto& o = std::get<CCons>(b->node);
      CanonPtr e = meet(n.elem, o.elem), l = meet(n.len, o.len), h = meet(n.head, o.head),
               t = meet(n.tail, o.tail);
      return e && l && h && t ? cCons(e, l, h, t) : nullptr;
    }
    CanonPtr operator()(const CEq& n) const {
      const auto& o = std::get<CEq>(b->node);
      CanonPtr t = meet(n.type, o.type), x = meet(n.lhs, o.lhs), y = meet(n.rhs, o.rhs);
      return t && x && y ? cEq(t, x, y) : nullptr;
    }
    CanonPtr operator()(const CRefl& n) const {
      const auto& o = std::get<CRefl>(b->node);
      CanonPtr t = meet(n.type, o.type), x = meet(n.value, o.value);
      return t && x ? cRefl(t, x) : nullptr;
    }
  };
  return std::visit(V{a, b}, a->node);
}

// dom of a function type: the domain of a Pi, ? for ?, undefined otherwise.
inline CanonPtr domOf(const CanonPtr& U) {
  if (auto* pi = std::get_if<CPi>(&U->node)) return pi->dom;
  if (isUnknown(U)) return cUnknown();
  return nullptr;
}

}  // namespace gdtl

#endif  // GDTL_GRADOPS_HPP
