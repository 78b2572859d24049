#ifndef GDTL_PRETTY_HPP
#define GDTL_PRETTY_HPP

#include <optional>
#include <sstream>
#include <string>

#include "gdtl/syntax.hpp"

namespace gdtl {

// Precedence levels, loosest to tightest:
//   0 ascription `t :: T`
//   1 lambda / Pi / arrow
//   2 `+ n` sugar
//   3 application
//   4 atoms
namespace detail {

struct NameEnv {
  std::vector<std::string> names;  // back() = index 0
  std::set<std::string> used;

  std::string push(const std::string& hint) {
    std::string n = freshName(hint, used);
    names.push_back(n);
    used.insert(n);
    return n;
  }
  void pop() {
    used.erase(names.back());
    names.pop_back();
  }
  std::string at(int index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= names.size())
      return "#" + std::to_string(index);  // free variable without a name
    return names[names.size() - 1 - static_cast<std::size_t>(index)];
  }
};

inline void parens(std::ostringstream& o, bool need, const std::string& s) {
  if (need)
    o << '(' << s << ')';
  else
    o << s;
}

inline std::optional<unsigned> termNumeral(const TermPtr& t) {
  unsigned n = 0;
  const Term* cur = t.get();
  for (;;) {
    if (auto* c = std::get_if<TCtor>(&cur->node)) {
      if (c->ctor == Ctor::Zero && c->args.empty()) return n;
      if (c->ctor == Ctor::Succ && c->args.size() == 1) {
        ++n;
        cur = c->args[0].get();
        continue;
      }
    }
    return std::nullopt;
  }
}

inline std::optional<unsigned> canonNumeral(const CanonPtr& u) {
  unsigned n = 0;
  const Canon* cur = u.get();
  for (;;) {
    if (std::holds_alternative<CZero>(cur->node)) return n;
    if (auto* s = std::get_if<CSucc>(&cur->node)) {
      ++n;
      cur = s->pred.get();
      continue;
    }
    return std::nullopt;
  }
}

std::string termStr(const TermPtr& t, NameEnv& env, int prec);

inline std::string termAtomArgs(const char* head, const std::vector<TermPtr>& args, NameEnv& env,
                                int prec) {
  std::ostringstream o;
  std::ostringstream inner;
  inner << head;
  for (const auto& a : args) inner << ' ' << termStr(a, env, 4);
  parens(o, prec > 3 && !args.empty(), inner.str());
  return o.str();
}

inline std::string termStr(const TermPtr& t, NameEnv& env, int prec) {
  std::ostringstream o;
  struct V {
    NameEnv& env;
    int prec;
    std::ostringstream& o;
    const TermPtr& self;
    void operator()(const TVar& n) const { o << env.at(n.index); }
    void operator()(const TLam& n) const {
      NameEnv& e = env;
      std::string name = e.push(n.hint);
      std::string body = termStr(n.body, e, 1);
      e.pop();
      parens(o, prec > 1, "\\" + name + ". " + body);
    }
    void operator()(const TApp& n) const {
      std::string f = termStr(n.fn, env, 3);
      std::string a = termStr(n.arg, env, 4);
      parens(o, prec > 3, f + " " + a);
    }
    void operator()(const TPi& n) const {
      std::string dom = termStr(n.dom, env, 2);
      std::string name = env.push(n.hint);
      std::string cod = termStr(n.cod, env, 1);
      bool used = name != n.hint || true;  // conservatively always show binder when named
      env.pop();
      (void)used;
      if (n.hint.empty() || n.hint == "_") {
        parens(o, prec > 1, dom + " -> " + cod);
      } else {
        std::string domFull = termStr(n.dom, env, 0);
        parens(o, prec > 1, "(" + name + " : " + domFull + ") -> " + cod);
      }
    }
    void operator()(const TType& n) const {
      parens(o, prec > 3, "Type " + std::to_string(n.level));
    }
    void operator()(const TUnknown&) const { o << '?'; }
    void operator()(const TAscribe& n) const {
      std::string b = termStr(n.body, env, 1);
      std::string ty = termStr(n.type, env, 1);
      parens(o, prec > 0, b + " :: " + ty);
    }
    void operator()(const TCtor& n) const {
      if (auto num = termNumeral(self)) {
        o << *num;
        return;
      }
      o << termAtomArgs(ctorName(n.ctor), n.args, env, prec);
    }
  };
  std::visit(V{env, prec, o, t}, t->node);
  return o.str();
}

std::string canonStr(const CanonPtr& u, NameEnv& env, int prec, bool verbose);

inline std::string entryArgsStr(const char* head, std::initializer_list<const CanonPtr*> args,
                                const std::string& scrut, NameEnv& env, bool verbose) {
  std::ostringstream inner;
  inner << head;
  for (const CanonPtr* a : args) inner << ' ' << canonStr(*a, env, 4, verbose);
  inner << ' ' << scrut;
  return inner.str();
}

inline std::string canonStr(const CanonPtr& u, NameEnv& env, int prec, bool verbose) {
  std::ostringstream o;
  struct V {
    NameEnv& env;
    int prec;
    bool verbose;
    std::ostringstream& o;
    const CanonPtr& self;
    void operator()(const CLam& n) const {
      std::string name = env.push(n.hint);
      std::string body = canonStr(n.body, env, 1, verbose);
      env.pop();
      parens(o, prec > 1, "\\" + name + ". " + body);
    }
    void operator()(const CPi& n) const {
      std::string arrow = "->";
      if (verbose) {
        arrow = n.level.isOmega() ? "->[w]" : "->[" + std::to_string(n.level.v) + "]";
      }
      if (n.hint.empty() || n.hint == "_") {
        std::string dom = canonStr(n.dom, env, 2, verbose);
        env.push("_");
        std::string cod = canonStr(n.cod, env, 1, verbose);
        env.pop();
        parens(o, prec > 1, dom + " " + arrow + " " + cod);
      } else {
        std::string dom = canonStr(n.dom, env, 0, verbose);
        std::string name = env.push(n.hint);
        std::string cod = canonStr(n.cod, env, 1, verbose);
        env.pop();
        parens(o, prec > 1, "(" + name + " : " + dom + ") " + arrow + " " + cod);
      }
    }
    void operator()(const CType& n) const {
      parens(o, prec > 3, "Type " + std::to_string(n.level));
    }
    void operator()(const CUnknown&) const { o << '?'; }
    void operator()(const CNeutral& n) const {
      std::string cur = env.at(n.index);
      bool curAtomic = true;
      for (const auto& e : n.spine) {
        struct EV {
          NameEnv& env;
          bool verbose;
          std::string& cur;
          bool& curAtomic;
          void scrutinize() const {
            if (!curAtomic) cur = "(" + cur + ")";
          }
          void operator()(const SArg& a) const {
            scrutinize();
            if (curAtomic && cur.find(' ') != std::string::npos) cur = "(" + cur + ")";
            cur = cur + " " + canonStr(a.arg, env, 4, verbose);
            curAtomic = false;
          }
          void operator()(const SNatElim& a) const {
            scrutinize();
            cur = entryArgsStr("natElim", {&a.motive, &a.base, &a.step},
                               curAtomic ? cur : "(" + cur + ")", env, verbose);
            curAtomic = false;
          }
          void operator()(const SVecElim& a) const {
            scrutinize();
            cur = entryArgsStr("vecElim", {&a.elem, &a.len, &a.motive, &a.base, &a.step},
                               curAtomic ? cur : "(" + cur + ")", env, verbose);
            curAtomic = false;
          }
          void operator()(const SEqElim& a) const {
            scrutinize();
            cur = entryArgsStr("eqElim", {&a.type, &a.motive, &a.method, &a.lhs, &a.rhs},
                               curAtomic ? cur : "(" + cur + ")", env, verbose);
            curAtomic = false;
          }
        };
        std::visit(EV{env, verbose, cur, curAtomic}, e);
      }
      parens(o, prec > 3 && !curAtomic, cur);
    }
    void operator()(const CNat&) const { o << "Nat"; }
    void operator()(const CZero&) const { o << '0'; }
    void operator()(const CSucc&) const {
      if (auto num = canonNumeral(self)) {
        o << *num;
        return;
      }
      const auto& n = std::get<CSucc>(self->node);
      parens(o, prec > 3, "Succ " + canonStr(n.pred, env, 4, verbose));
    }
    void operator()(const CVec& n) const {
      parens(o, prec > 3, "Vec " + canonStr(n.elem, env, 4, verbose) + " " +
                              canonStr(n.len, env, 4, verbose));
    }
    void operator()(const CNil& n) const {
      parens(o, prec > 3, "Nil " + canonStr(n.elem, env, 4, verbose));
    }
    void operator()(const CCons& n) const {
      parens(o, prec > 3, "Cons " + canonStr(n.elem, env, 4, verbose) + " " +
                              canonStr(n.len, env, 4, verbose) + " " +
                              canonStr(n.head, env, 4, verbose) + " " +
                              canonStr(n.tail, env, 4, verbose));
    }
    void operator()(const CEq& n) const {
      parens(o, prec > 3, "Eq " + canonStr(n.type, env, 4, verbose) + " " +
                              canonStr(n.lhs, env, 4, verbose) + " " +
                              canonStr(n.rhs, env, 4, verbose));
    }
    void operator()(const CRefl& n) const {
      parens(o, prec > 3, "Refl " + canonStr(n.type, env, 4, verbose) + " " +
                              canonStr(n.value, env, 4, verbose));
    }
  };
  std::visit(V{env, prec, verbose, o, u}, u->node);
  return o.str();
}

inline std::optional<unsigned> evNumeral(const EvTermPtr& t) {
  unsigned n = 0;
  const EvTerm* cur = t.get();
  for (;;) {
    if (auto* c = std::get_if<ECtor>(&cur->node)) {
      if (c->ctor == Ctor::Zero && c->args.empty()) return n;
      if (c->ctor == Ctor::Succ && c->args.size() == 1) {
        ++n;
        cur = c->args[0].get();
        continue;
      }
    }
    return std::nullopt;
  }
}

inline std::string evStr(const EvTermPtr& t, NameEnv& env, int prec) {
  std::ostringstream o;
  struct V {
    NameEnv& env;
    int prec;
    std::ostringstream& o;
    const EvTermPtr& self;
    void operator()(const EVar& n) const { o << env.at(n.index); }
    void operator()(const ELam& n) const {
      std::string name = env.push(n.hint);
      std::string body = evStr(n.body, env, 1);
      env.pop();
      parens(o, prec > 1, "\\" + name + ". " + body);
    }
    void operator()(const EApp& n) const {
      parens(o, prec > 3, evStr(n.fn, env, 3) + " " + evStr(n.arg, env, 4));
    }
    void operator()(const EPi& n) const {
      std::string dom = evStr(n.dom, env, 0);
      std::string name = env.push(n.hint);
      std::string cod = evStr(n.cod, env, 1);
      env.pop();
      parens(o, prec > 1, "(" + name + " : " + dom + ") -> " + cod);
    }
    void operator()(const EType& n) const {
      parens(o, prec > 3, "Type " + std::to_string(n.level));
    }
    void operator()(const EUnknown&) const { o << '?'; }
    void operator()(const ECtor& n) const {
      if (auto num = evNumeral(self)) {
        o << *num;
        return;
      }
      std::ostringstream inner;
      inner << ctorName(n.ctor);
      for (const auto& a : n.args) inner << ' ' << evStr(a, env, 4);
      parens(o, prec > 3 && !n.args.empty(), inner.str());
    }
    void operator()(const EWithEv& n) const {
      parens(o, prec > 2,
             "⟨" + canonStr(n.ev.witness, env, 1, false) + "⟩ " + evStr(n.raw, env, 4));
    }
    void operator()(const EErr&) const { o << "err"; }
  };
  std::visit(V{env, prec, o, t}, t->node);
  return o.str();
}

}  // namespace detail

inline std::string prettyTerm(const TermPtr& t, std::vector<std::string> freeNames = {}) {
  detail::NameEnv env;
  for (auto& n : freeNames) {
    env.names.push_back(n);
    env.used.insert(n);
  }
  return detail::termStr(t, env, 0);
}

inline std::string prettyCanon(const CanonPtr& u, std::vector<std::string> freeNames = {},
                               bool verbose = false) {
  detail::NameEnv env;
  for (auto& n : freeNames) {
    env.names.push_back(n);
    env.used.insert(n);
  }
  return detail::canonStr(u, env, 0, verbose);
}

inline std::string prettyEv(const EvTermPtr& t, std::vector<std::string> freeNames = {}) {
  detail::NameEnv env;
  for (auto& n : freeNames) {
    env.names.push_back(n);
    env.used.insert(n);
  }
  return detail::evStr(t, env, 0);
}

inline std::string prettyEvidence(const Evidence& e) {
  return "⟨" + prettyCanon(e.witness) + "⟩";
}

}  // namespace gdtl

#endif  // GDTL_PRETTY_HPP
