#ifndef GDTL_SYNTAX_HPP
#define GDTL_SYNTAX_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gdtl {

// ---------------------------------------------------------------------------
// Universe levels. Integer levels start at 1; omega sits strictly above all
// integers and only ever appears as an arrow annotation.
// ---------------------------------------------------------------------------

struct Level {
  static constexpr std::uint32_t kOmega = UINT32_MAX;
  std::uint32_t v = kOmega;

  static Level omega() { return Level{kOmega}; }
  static Level of(std::uint32_t i) { return Level{i}; }
  bool isOmega() const { return v == kOmega; }

  friend bool operator==(Level a, Level b) { return a.v == b.v; }
  friend bool operator!=(Level a, Level b) { return a.v != b.v; }
  // omega is the top of the order.
  friend bool operator<(Level a, Level b) {
    if (a.v == b.v) return false;
    if (b.isOmega()) return true;
    if (a.isOmega()) return false;
    return a.v < b.v;
  }
};

struct Span {
  int line = 0;  // 1-based; 0 means "no position"
  int col = 0;
};

// ---------------------------------------------------------------------------
// Surface terms (after scope resolution: de Bruijn indices, hints kept for
// printing).
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class Ctor {
  Nat,
  Zero,
  Succ,
  Vec,
  Nil,
  Cons,
  Eq,
  Refl,
  NatElim,
  VecElim,
  EqElim,
};

inline int ctorArity(Ctor c) {
  switch (c) {
    case Ctor::Nat:
    case Ctor::Zero: return 0;
    case Ctor::Succ:
    case Ctor::Nil: return 1;
    case Ctor::Vec:
    case Ctor::Refl: return 2;
    case Ctor::Eq: return 3;
    case Ctor::Cons:
    case Ctor::NatElim: return 4;
    case Ctor::VecElim:
    case Ctor::EqElim: return 6;
  }
  return 0;
}

inline const char* ctorName(Ctor c) {
  switch (c) {
    case Ctor::Nat: return "Nat";
    case Ctor::Zero: return "Zero";
    case Ctor::Succ: return "Succ";
    case Ctor::Vec: return "Vec";
    case Ctor::Nil: return "Nil";
    case Ctor::Cons: return "Cons";
    case Ctor::Eq: return "Eq";
    case Ctor::Refl: return "Refl";
    case Ctor::NatElim: return "natElim";
    case Ctor::VecElim: return "vecElim";
    case Ctor::EqElim: return "eqElim";
  }
  return "?";
}

struct TVar {
  int index;
  std::string hint;
};
struct TLam {
  std::string hint;
  TermPtr body;
};
struct TApp {
  TermPtr fn, arg;
};
struct TPi {
  std::string hint;
  TermPtr dom, cod;
};
struct TType {
  std::uint32_t level;  // >= 1
};
struct TUnknown {};
struct TAscribe {
  TermPtr body, type;
};
// Builtin constructors and eliminators, always fully applied. A partial
// application survives parsing as TCtor with fewer args and is rejected by
// the typechecker (arity mismatch).
struct TCtor {
  Ctor ctor;
  std::vector<TermPtr> args;
};

using TermNode = std::variant<TVar, TLam, TApp, TPi, TType, TUnknown, TAscribe, TCtor>;

struct Term {
  TermNode node;
  Span span;
};

inline TermPtr mkTerm(TermNode n, Span s = {}) {
  return std::make_shared<Term>(Term{std::move(n), s});
}
inline TermPtr tVar(int i, std::string hint = "x") { return mkTerm(TVar{i, std::move(hint)}); }
inline TermPtr tLam(std::string hint, TermPtr body) { return mkTerm(TLam{std::move(hint), std::move(body)}); }
inline TermPtr tApp(TermPtr f, TermPtr a) { return mkTerm(TApp{std::move(f), std::move(a)}); }
inline TermPtr tPi(std::string hint, TermPtr dom, TermPtr cod) {
  return mkTerm(TPi{std::move(hint), std::move(dom), std::move(cod)});
}
inline TermPtr tType(std::uint32_t i) { return mkTerm(TType{i}); }
inline TermPtr tUnknown() { return mkTerm(TUnknown{}); }
inline TermPtr tAscribe(TermPtr t, TermPtr ty) { return mkTerm(TAscribe{std::move(t), std::move(ty)}); }
inline TermPtr tCtor(Ctor c, std::vector<TermPtr> args) { return mkTerm(TCtor{c, std::move(args)}); }
inline TermPtr tNat() { return tCtor(Ctor::Nat, {}); }
inline TermPtr tZero() { return tCtor(Ctor::Zero, {}); }
inline TermPtr tSucc(TermPtr n) { return tCtor(Ctor::Succ, {std::move(n)}); }
inline TermPtr tNumeral(unsigned n) {
  TermPtr t = tZero();
  for (unsigned i = 0; i < n; ++i) t = tSucc(t);
  return t;
}

// ---------------------------------------------------------------------------
// Canonical forms: beta-normal, eta-long. Spine heads are variables; builtin
// introduction forms are atomic; eliminators are spine entries.
// ---------------------------------------------------------------------------

struct Canon;
using CanonPtr = std::shared_ptr<const Canon>;

struct SArg {
  CanonPtr arg;
};
struct SNatElim {
  CanonPtr motive, base, step;
};
struct SVecElim {
  CanonPtr elem, len, motive, base, step;
};
struct SEqElim {
  CanonPtr type, motive, method, lhs, rhs;
};
using SpineEntry = std::variant<SArg, SNatElim, SVecElim, SEqElim>;
using Spine = std::vector<SpineEntry>;

struct CLam {
  std::string hint;
  CanonPtr body;
};
struct CPi {
  std::string hint;
  CanonPtr dom;
  Level level;  // annotation; omega when unknown
  CanonPtr cod;
};
struct CType {
  std::uint32_t level;
};
struct CUnknown {};
struct CNeutral {
  int index;
  std::string hint;
  Spine spine;
};
struct CNat {};
struct CZero {};
struct CSucc {
  CanonPtr pred;
};
struct CVec {
  CanonPtr elem, len;
};
struct CNil {
  CanonPtr elem;
};
struct CCons {
  CanonPtr elem, len, head, tail;
};
struct CEq {
  CanonPtr type, lhs, rhs;
};
struct CRefl {
  CanonPtr type, value;
};

using CanonNode = std::variant<CLam, CPi, CType, CUnknown, CNeutral, CNat, CZero, CSucc,
                               CVec, CNil, CCons, CEq, CRefl>;

struct Canon {
  CanonNode node;
};

inline CanonPtr mkCanon(CanonNode n) { return std::make_shared<Canon>(Canon{std::move(n)}); }
inline CanonPtr cLam(std::string hint, CanonPtr body) { return mkCanon(CLam{std::move(hint), std::move(body)}); }
inline CanonPtr cPi(std::string hint, CanonPtr dom, Level l, CanonPtr cod) {
  return mkCanon(CPi{std::move(hint), std::move(dom), l, std::move(cod)});
}
inline CanonPtr cType(std::uint32_t i) { return mkCanon(CType{i}); }
inline CanonPtr cUnknown() { return mkCanon(CUnknown{}); }
inline CanonPtr cVar(int i, std::string hint = "x") { return mkCanon(CNeutral{i, std::move(hint), {}}); }
inline CanonPtr cNeutral(int i, std::string hint, Spine sp) {
  return mkCanon(CNeutral{i, std::move(hint), std::move(sp)});
}
inline CanonPtr cNat() { return mkCanon(CNat{}); }
inline CanonPtr cZero() { return mkCanon(CZero{}); }
inline CanonPtr cSucc(CanonPtr p) { return mkCanon(CSucc{std::move(p)}); }
inline CanonPtr cVec(CanonPtr a, CanonPtr n) { return mkCanon(CVec{std::move(a), std::move(n)}); }
inline CanonPtr cNil(CanonPtr a) { return mkCanon(CNil{std::move(a)}); }
inline CanonPtr cCons(CanonPtr a, CanonPtr n, CanonPtr h, CanonPtr t) {
  return mkCanon(CCons{std::move(a), std::move(n), std::move(h), std::move(t)});
}
inline CanonPtr cEq(CanonPtr a, CanonPtr x, CanonPtr y) {
  return mkCanon(CEq{std::move(a), std::move(x), std::move(y)});
}
inline CanonPtr cRefl(CanonPtr a, CanonPtr x) { return mkCanon(CRefl{std::move(a), std::move(x)}); }
inline CanonPtr cNumeral(unsigned n) {
  CanonPtr u = cZero();
  for (unsigned i = 0; i < n; ++i) u = cSucc(u);
  return u;
}

inline bool isUnknown(const CanonPtr& u) { return std::holds_alternative<CUnknown>(u->node); }

// ---------------------------------------------------------------------------
// Evidence and runtime terms.
// ---------------------------------------------------------------------------

struct Evidence {
  CanonPtr witness;  // a canonical type
};

struct EvTerm;
using EvTermPtr = std::shared_ptr<const EvTerm>;

struct EVar {
  int index;
  std::string hint;
};
struct ELam {
  std::string hint;
  EvTermPtr body;
};
struct EApp {
  EvTermPtr fn, arg;
};
struct EPi {
  std::string hint;
  EvTermPtr dom, cod;
};
struct EType {
  std::uint32_t level;
};
struct EUnknown {};
struct ECtor {
  Ctor ctor;
  std::vector<EvTermPtr> args;
};
struct EWithEv {
  Evidence ev;
  EvTermPtr raw;
};
struct EErr {};

using EvNode = std::variant<EVar, ELam, EApp, EPi, EType, EUnknown, ECtor, EWithEv, EErr>;

struct EvTerm {
  EvNode node;
};

inline EvTermPtr mkEv(EvNode n) { return std::make_shared<EvTerm>(EvTerm{std::move(n)}); }
inline EvTermPtr eVar(int i, std::string hint = "x") { return mkEv(EVar{i, std::move(hint)}); }
inline EvTermPtr eLam(std::string hint, EvTermPtr b) { return mkEv(ELam{std::move(hint), std::move(b)}); }
inline EvTermPtr eApp(EvTermPtr f, EvTermPtr a) { return mkEv(EApp{std::move(f), std::move(a)}); }
inline EvTermPtr ePi(std::string hint, EvTermPtr d, EvTermPtr c) {
  return mkEv(EPi{std::move(hint), std::move(d), std::move(c)});
}
inline EvTermPtr eType(std::uint32_t i) { return mkEv(EType{i}); }
inline EvTermPtr eUnknown() { return mkEv(EUnknown{}); }
inline EvTermPtr eCtor(Ctor c, std::vector<EvTermPtr> args) { return mkEv(ECtor{c, std::move(args)}); }
inline EvTermPtr eWithEv(Evidence ev, EvTermPtr raw) { return mkEv(EWithEv{std::move(ev), std::move(raw)}); }
inline EvTermPtr eErr() { return mkEv(EErr{}); }

// ---------------------------------------------------------------------------
// Contexts: ordered telescopes. Index 0 is the innermost binding.
// ---------------------------------------------------------------------------

CanonPtr shiftCanon(const CanonPtr& u, int d, int cutoff = 0);

struct Context {
  // back() is the innermost binding; stored types are valid at their own
  // binding site (they see everything to their left).
  std::vector<std::pair<std::string, CanonPtr>> bindings;

  std::size_t size() const { return bindings.size(); }

  const std::string& hintAt(int index) const {
    return bindings.at(bindings.size() - 1 - static_cast<std::size_t>(index)).first;
  }

  // Type of de Bruijn index `index`, shifted to be valid in the full context.
  CanonPtr lookup(int index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= bindings.size()) return nullptr;
    const CanonPtr& ty = bindings[bindings.size() - 1 - static_cast<std::size_t>(index)].second;
    return shiftCanon(ty, index + 1);
  }

  Context extended(std::string hint, CanonPtr ty) const {
    Context c = *this;
    c.bindings.emplace_back(std::move(hint), std::move(ty));
    return c;
  }
};

// ---------------------------------------------------------------------------
// Errors.
// ---------------------------------------------------------------------------

struct TypeError : std::runtime_error {
  CanonPtr expected, actual;  // may be null
  Span span;
  explicit TypeError(const std::string& msg, CanonPtr exp = nullptr, CanonPtr act = nullptr,
                     Span sp = {})
      : std::runtime_error(msg), expected(std::move(exp)), actual(std::move(act)), span(sp) {}
};

struct FuelExhausted : std::runtime_error {
  FuelExhausted() : std::runtime_error("normalization fuel exhausted") {}
};

// An internal defect: a broken invariant, never a language-level error.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Shifting (relocation of free de Bruijn indices).
// ---------------------------------------------------------------------------

inline SpineEntry shiftEntry(const SpineEntry& e, int d, int c);

inline CanonPtr shiftCanon(const CanonPtr& u, int d, int cutoff) {
  if (d == 0) return u;
  struct V {
    int d, c;
    CanonPtr go(const CanonPtr& u) const { return shiftCanon(u, d, c); }
    CanonPtr operator()(const CLam& n) const {
      return cLam(n.hint, shiftCanon(n.body, d, c + 1));
    }
    CanonPtr operator()(const CPi& n) const {
      return cPi(n.hint, go(n.dom), n.level, shiftCanon(n.cod, d, c + 1));
    }
    CanonPtr operator()(const CType& n) const { return cType(n.level); }
    CanonPtr operator()(const CUnknown&) const { return cUnknown(); }
    CanonPtr operator()(const CNeutral& n) const {
      int idx = n.index >= c ? n.index + d : n.index;
      if (idx < 0) throw InternalError("shiftCanon: negative index");
      Spine sp;
      sp.reserve(n.spine.size());
      for (const auto& e : n.spine) sp.push_back(shiftEntry(e, d, c));
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
  return std::visit(V{d, cutoff}, u->node);
}

inline SpineEntry shiftEntry(const SpineEntry& e, int d, int c) {
  struct V {
    int d, c;
    CanonPtr go(const CanonPtr& u) const { return shiftCanon(u, d, c); }
    SpineEntry operator()(const SArg& a) const { return SArg{go(a.arg)}; }
    SpineEntry operator()(const SNatElim& a) const {
      return SNatElim{go(a.motive), go(a.base), go(a.step)};
    }
    SpineEntry operator()(const SVecElim& a) const {
      return SVecElim{go(a.elem), go(a.len), go(a.motive), go(a.base), go(a.step)};
    }
    SpineEntry operator()(const SEqElim& a) const {
      return SEqElim{go(a.type), go(a.motive), go(a.method), go(a.lhs), go(a.rhs)};
    }
  };
  return std::visit(V{d, c}, e);
}

// ---------------------------------------------------------------------------
// Alpha-equivalence: with nameless binders this is structural equality
// modulo hints.
// ---------------------------------------------------------------------------

bool alphaEq(const CanonPtr& a, const CanonPtr& b);

inline bool alphaEqEntry(const SpineEntry& a, const SpineEntry& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<SArg>(&a)) return alphaEq(x->arg, std::get<SArg>(b).arg);
  if (auto* x = std::get_if<SNatElim>(&a)) {
    const auto& y = std::get<SNatElim>(b);
    return alphaEq(x->motive, y.motive) && alphaEq(x->base, y.base) && alphaEq(x->step, y.step);
  }
  if (auto* x = std::get_if<SVecElim>(&a)) {
    const auto& y = std::get<SVecElim>(b);
    return alphaEq(x->elem, y.elem) && alphaEq(x->len, y.len) && alphaEq(x->motive, y.motive) &&
           alphaEq(x->base, y.base) && alphaEq(x->step, y.step);
  }
  const auto& x = std::get<SEqElim>(a);
  const auto& y = std::get<SEqElim>(b);
  return alphaEq(x.type, y.type) && alphaEq(x.motive, y.motive) && alphaEq(x.method, y.method) &&
         alphaEq(x.lhs, y.lhs) && alphaEq(x.rhs, y.rhs);
}

inline bool alphaEq(const CanonPtr& a, const CanonPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  struct V {
    const CanonNode& other;
    bool operator()(const CLam& n) const { return alphaEq(n.body, std::get<CLam>(other).body); }
    bool operator()(const CPi& n) const {
      const auto& o = std::get<CPi>(other);
      return n.level == o.level && alphaEq(n.dom, o.dom) && alphaEq(n.cod, o.cod);
    }
    bool operator()(const CType& n) const { return n.level == std::get<CType>(other).level; }
    bool operator()(const CUnknown&) const { return true; }
    bool operator()(const CNeutral& n) const {
      const auto& o = std::get<CNeutral>(other);
      if (n.index != o.index || n.spine.size() != o.spine.size()) return false;
      for (std::size_t i = 0; i < n.spine.size(); ++i)
        if (!alphaEqEntry(n.spine[i], o.spine[i])) return false;
      return true;
    }
    bool operator()(const CNat&) const { return true; }
    bool operator()(const CZero&) const { return true; }
    bool operator()(const CSucc& n) const { return alphaEq(n.pred, std::get<CSucc>(other).pred); }
    bool operator()(const CVec& n) const {
      const auto& o = std::get<CVec>(other);
      return alphaEq(n.elem, o.elem) && alphaEq(n.len, o.len);
    }
    bool operator()(const CNil& n) const { return alphaEq(n.elem, std::get<CNil>(other).elem); }
    bool operator()(const CCons& n) const {
      const auto& o = std::get<CCons>(other);
      return alphaEq(n.elem, o.elem) && alphaEq(n.len, o.len) && alphaEq(n.head, o.head) &&
             alphaEq(n.tail, o.tail);
    }
    bool operator()(const CEq& n) const {
      const auto& o = std::get<CEq>(other);
      return alphaEq(n.type, o.type) && alphaEq(n.lhs, o.lhs) && alphaEq(n.rhs, o.rhs);
    }
    bool operator()(const CRefl& n) const {
      const auto& o = std::get<CRefl>(other);
      return alphaEq(n.type, o.type) && alphaEq(n.value, o.value);
    }
  };
  return std::visit(V{b->node}, a->node);
}

bool alphaEqTerm(const TermPtr& a, const TermPtr& b);

inline bool alphaEqTerm(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  struct V {
    const TermNode& other;
    bool operator()(const TVar& n) const { return n.index == std::get<TVar>(other).index; }
    bool operator()(const TLam& n) const { return alphaEqTerm(n.body, std::get<TLam>(other).body); }
    bool operator()(const TApp& n) const {
      const auto& o = std::get<TApp>(other);
      return alphaEqTerm(n.fn, o.fn) && alphaEqTerm(n.arg, o.arg);
    }
    bool operator()(const TPi& n) const {
      const auto& o = std::get<TPi>(other);
      return alphaEqTerm(n.dom, o.dom) && alphaEqTerm(n.cod, o.cod);
    }
    bool operator()(const TType& n) const { return n.level == std::get<TType>(other).level; }
    bool operator()(const TUnknown&) const { return true; }
    bool operator()(const TAscribe& n) const {
      const auto& o = std::get<TAscribe>(other);
      return alphaEqTerm(n.body, o.body) && alphaEqTerm(n.type, o.type);
    }
    bool operator()(const TCtor& n) const {
      const auto& o = std::get<TCtor>(other);
      if (n.ctor != o.ctor || n.args.size() != o.args.size()) return false;
      for (std::size_t i = 0; i < n.args.size(); ++i)
        if (!alphaEqTerm(n.args[i], o.args[i])) return false;
      return true;
    }
  };
  return std::visit(V{b->node}, a->node);
}

// ---------------------------------------------------------------------------
// Fresh names: hint, hint', hint'', ...
// ---------------------------------------------------------------------------

inline std::string freshName(const std::string& hint, const std::set<std::string>& avoid) {
  std::string name = hint.empty() ? "x" : hint;
  while (avoid.count(name)) name += '\'';
  return name;
}

// Structural validator: no spine argument in head position is a CLam (spine
// heads are variables by construction, but eliminator scrutinees and the
// overall shape are re-checked in debug builds).
inline bool canonWellShaped(const CanonPtr& u) {
  struct V {
    bool go(const CanonPtr& u) const { return canonWellShaped(u); }
    bool operator()(const CLam& n) const { return go(n.body); }
    bool operator()(const CPi& n) const { return go(n.dom) && go(n.cod); }
    bool operator()(const CType&) const { return true; }
    bool operator()(const CUnknown&) const { return true; }
    bool operator()(const CNeutral& n) const {
      for (const auto& e : n.spine) {
        bool ok = std::visit(
            [&](const auto& x) {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, SArg>) return go(x.arg);
              else if constexpr (std::is_same_v<T, SNatElim>)
                return go(x.motive) && go(x.base) && go(x.step);
              else if constexpr (std::is_same_v<T, SVecElim>)
                return go(x.elem) && go(x.len) && go(x.motive) && go(x.base) && go(x.step);
              else
                return go(x.type) && go(x.motive) && go(x.method) && go(x.lhs) && go(x.rhs);
            },
            e);
        if (!ok) return false;
      }
      return true;
    }
    bool operator()(const CNat&) const { return true; }
    bool operator()(const CZero&) const { return true; }
    bool operator()(const CSucc& n) const { return go(n.pred); }
    bool operator()(const CVec& n) const { return go(n.elem) && go(n.len); }
    bool operator()(const CNil& n) const { return go(n.elem); }
    bool operator()(const CCons& n) const {
      return go(n.elem) && go(n.len) && go(n.head) && go(n.tail);
    }
    bool operator()(const CEq& n) const { return go(n.type) && go(n.lhs) && go(n.rhs); }
    bool operator()(const CRefl& n) const { return go(n.type) && go(n.value); }
  };
  return std::visit(V{}, u->node);
}

}  // namespace gdtl

#endif  // GDTL_SYNTAX_HPP
