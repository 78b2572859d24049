#ifndef GDTL_PARSE_HPP
#define GDTL_PARSE_HPP

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gdtl/syntax.hpp"

namespace gdtl {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
  int line = 1;
  int column = 1;
};

struct SourceFile {
  std::string path;
  // Declarations already resolved: bodies with earlier declarations inlined,
  // annotations applied as ascriptions. `main` is the final expression.
  std::vector<std::pair<std::string, TermPtr>> declarations;
  TermPtr main;  // may be null when the file has no final expression
};

struct ParseResult {
  std::optional<SourceFile> file;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return file.has_value(); }
};

namespace parsedetail {

enum class Tok {
  Ident,
  Number,
  Lambda,    // '\'
  Dot,       // '.'
  LParen,
  RParen,
  Colon,     // ':'
  Ascribe,   // '::'
  Arrow,     // '->'
  FatArrow,  // '=>'
  Equals,    // '='
  Question,  // '?'
  Plus,      // '+'
  KwFun,
  KwType,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  unsigned number = 0;
  int line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1, col = 1;
  std::vector<Diagnostic>& diags;

  void advance() {
    if (pos < src.size() && src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  std::vector<Token> lex() {
    std::vector<Token> out;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
        continue;
      }
      if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '-') {
        while (pos < src.size() && src[pos] != '\n') advance();
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        unsigned n = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
          n = n * 10 + static_cast<unsigned>(src[pos] - '0');
          advance();
        }
        t.kind = Tok::Number;
        t.number = n;
        out.push_back(t);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string s;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
                src[pos] == '\'')) {
          s += src[pos];
          advance();
        }
        if (s == "fun")
          t.kind = Tok::KwFun;
        else if (s == "Type")
          t.kind = Tok::KwType;
        else
          t.kind = Tok::Ident;
        t.text = s;
        out.push_back(t);
        continue;
      }
      switch (c) {
        case '\\': t.kind = Tok::Lambda; advance(); break;
        case '.': t.kind = Tok::Dot; advance(); break;
        case '(': t.kind = Tok::LParen; advance(); break;
        case ')': t.kind = Tok::RParen; advance(); break;
        case '?': t.kind = Tok::Question; advance(); break;
        case '+': t.kind = Tok::Plus; advance(); break;
        case ':':
          advance();
          if (pos < src.size() && src[pos] == ':') {
            advance();
            t.kind = Tok::Ascribe;
          } else {
            t.kind = Tok::Colon;
          }
          break;
        case '-':
          advance();
          if (pos < src.size() && src[pos] == '>') {
            advance();
            t.kind = Tok::Arrow;
          } else {
            diags.push_back({Diagnostic::Severity::Error, "stray '-'", t.line, t.col});
            continue;
          }
          break;
        case '=':
          advance();
          if (pos < src.size() && src[pos] == '>') {
            advance();
            t.kind = Tok::FatArrow;
          } else {
            t.kind = Tok::Equals;
          }
          break;
        default:
          diags.push_back({Diagnostic::Severity::Error,
                           std::string("unexpected character '") + c + "'", t.line, t.col});
          advance();
          continue;
      }
      out.push_back(t);
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
  }
};

inline std::optional<Ctor> ctorKeyword(const std::string& s) {
  if (s == "Nat") return Ctor::Nat;
  if (s == "Zero") return Ctor::Zero;
  if (s == "Succ") return Ctor::Succ;
  if (s == "Vec") return Ctor::Vec;
  if (s == "Nil") return Ctor::Nil;
  if (s == "Cons") return Ctor::Cons;
  if (s == "Eq") return Ctor::Eq;
  if (s == "Refl") return Ctor::Refl;
  if (s == "natElim") return Ctor::NatElim;
  if (s == "vecElim") return Ctor::VecElim;
  if (s == "eqElim") return Ctor::EqElim;
  return std::nullopt;
}

struct ParseError {
  Diagnostic diag;
};

struct Parser {
  const std::vector<Token>& toks;
  std::size_t pos = 0;
  std::size_t stmtStart = 0;  // a column-1 token after this index opens a new statement
  std::vector<std::string> scope;                 // back() = index 0
  std::map<std::string, TermPtr> globals;          // inlined bodies (closed terms)

  const Token& peek(int k = 0) const { return toks[std::min(pos + k, toks.size() - 1)]; }
  const Token& next() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what);
    return toks[pos++];
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError{{Diagnostic::Severity::Error, msg, peek().line, peek().col}};
  }
  Span here() const { return Span{peek().line, peek().col}; }

  std::optional<int> lookupLocal(const std::string& name) const {
    for (std::size_t i = 0; i < scope.size(); ++i) {
      if (scope[scope.size() - 1 - i] == name) return static_cast<int>(i);
    }
    return std::nullopt;
  }

  // expr := arrow ('::' arrow)*
  TermPtr parseExpr() {
    TermPtr t = parseArrow();
    while (at(Tok::Ascribe)) {
      next();
      TermPtr ty = parseArrow();
      t = tAscribe(t, ty);
    }
    return t;
  }

  // arrow := lambda | pi | sum ('->' arrow)?
  TermPtr parseArrow() {
    Span sp = here();
    if (at(Tok::Lambda)) {
      next();
      std::vector<std::string> binders;
      while (at(Tok::Ident)) binders.push_back(next().text);
      if (binders.empty()) fail("expected binder after '\\'");
      expect(Tok::Dot, "'.'");
      for (const auto& b : binders) scope.push_back(b);
      TermPtr body = parseArrow();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        scope.pop_back();
        body = mkTerm(TLam{*it, body}, sp);
      }
      return body;
    }
    if (at(Tok::KwFun)) {
      next();
      std::vector<std::string> binders;
      while (at(Tok::Ident)) binders.push_back(next().text);
      if (binders.empty()) fail("expected binder after 'fun'");
      expect(Tok::FatArrow, "'=>'");
      for (const auto& b : binders) scope.push_back(b);
      TermPtr body = parseArrow();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        scope.pop_back();
        body = mkTerm(TLam{*it, body}, sp);
      }
      return body;
    }
    // Dependent Pi: '(' IDENT ':' expr ')' '->' arrow
    if (at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
      next();
      std::string binder = next().text;
      next();  // ':'
      TermPtr dom = parseExpr();
      expect(Tok::RParen, "')'");
      expect(Tok::Arrow, "'->' after dependent binder");
      scope.push_back(binder);
      TermPtr cod = parseArrow();
      scope.pop_back();
      return mkTerm(TPi{binder, dom, cod}, sp);
    }
    TermPtr t = parseSum();
    if (at(Tok::Arrow)) {
      next();
      scope.push_back("_");
      TermPtr cod = parseArrow();
      scope.pop_back();
      return mkTerm(TPi{"_", t, cod}, sp);
    }
    return t;
  }

  // sum := app ('+' NUMBER)*
  TermPtr parseSum() {
    TermPtr t = parseApp();
    while (at(Tok::Plus)) {
      next();
      Token n = expect(Tok::Number, "numeral after '+'");
      for (unsigned i = 0; i < n.number; ++i) t = tSucc(t);
    }
    return t;
  }

  bool atAtomStart() const {
    // Layout rule: a token at column 1 starts a new top-level statement and
    // never continues an application from the previous line.
    if (peek().col == 1 && pos > stmtStart) return false;
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Number:
      case Tok::Question:
      case Tok::KwType:
      case Tok::LParen: return true;
      default: return false;
    }
  }

  // app := atom+, with builtin constructors consuming their arity
  TermPtr parseApp() {
    Span sp = here();
    // Constructor head: gather up to arity atoms as constructor arguments.
    if (at(Tok::Ident)) {
      if (auto c = ctorKeyword(peek().text)) {
        next();
        int arity = ctorArity(*c);
        std::vector<TermPtr> args;
        while (static_cast<int>(args.size()) < arity && atAtomStart()) args.push_back(parseAtom());
        TermPtr t = mkTerm(TCtor{*c, std::move(args)}, sp);
        while (atAtomStart()) t = mkTerm(TApp{t, parseAtom()}, sp);
        return t;
      }
    }
    TermPtr t = parseAtom();
    while (atAtomStart()) t = mkTerm(TApp{t, parseAtom()}, sp);
    return t;
  }

  TermPtr parseAtom() {
    Span sp = here();
    switch (peek().kind) {
      case Tok::Number: {
        unsigned n = next().number;
        TermPtr t = mkTerm(TCtor{Ctor::Zero, {}}, sp);
        for (unsigned i = 0; i < n; ++i) t = mkTerm(TCtor{Ctor::Succ, {t}}, sp);
        return t;
      }
      case Tok::Question:
        next();
        return mkTerm(TUnknown{}, sp);
      case Tok::KwType: {
        next();
        Token lvl = expect(Tok::Number, "universe level after 'Type'");
        if (lvl.number < 1) fail("universe levels start at 1");
        return mkTerm(TType{lvl.number}, sp);
      }
      case Tok::LParen: {
        next();
        TermPtr t = parseExpr();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::Ident: {
        std::string name = peek().text;
        if (auto c = ctorKeyword(name)) {
          // Bare constructor in argument position: zero explicit arguments.
          next();
          return mkTerm(TCtor{*c, {}}, sp);
        }
        next();
        if (auto idx = lookupLocal(name)) return mkTerm(TVar{*idx, name}, sp);
        auto g = globals.find(name);
        if (g != globals.end()) return g->second;
        throw ParseError{
            {Diagnostic::Severity::Error, "unbound identifier '" + name + "'", sp.line, sp.col}};
      }
      default: fail("expected expression");
    }
  }

  SourceFile parseFile(const std::string& path) {
    SourceFile f;
    f.path = path;
    std::map<std::string, TermPtr> annotations;
    while (!at(Tok::End)) {
      stmtStart = pos;
      if (at(Tok::Ident) && (peek(1).kind == Tok::Colon || peek(1).kind == Tok::Equals)) {
        std::string name = next().text;
        if (ctorKeyword(name))
          throw ParseError{{Diagnostic::Severity::Error,
                            "'" + name + "' is a reserved builtin name", peek().line, peek().col}};
        if (at(Tok::Colon)) {
          next();
          TermPtr ty = parseExpr();
          if (annotations.count(name))
            fail("duplicate type annotation for '" + name + "'");
          annotations[name] = ty;
        } else {
          next();  // '='
          TermPtr body = parseExpr();
          if (globals.count(name)) fail("duplicate definition of '" + name + "'");
          auto ann = annotations.find(name);
          TermPtr resolved = ann == annotations.end() ? body : tAscribe(body, ann->second);
          globals[name] = resolved;
          f.declarations.emplace_back(name, resolved);
        }
        continue;
      }
      if (f.main) fail("unexpected input after the final expression");
      f.main = parseExpr();
    }
    return f;
  }
};

}  // namespace parsedetail

inline ParseResult parse(const std::string& source, const std::string& path = "<input>") {
  ParseResult r;
  parsedetail::Lexer lex{source, 0, 1, 1, r.diagnostics};
  std::vector<parsedetail::Token> toks = lex.lex();
  if (!r.diagnostics.empty()) return r;
  parsedetail::Parser p{toks};
  try {
    SourceFile f = p.parseFile(path);
    r.file = std::move(f);
  } catch (const parsedetail::ParseError& e) {
    r.diagnostics.push_back(e.diag);
  }
  return r;
}

// Parses a single closed expression (used by tests).
inline TermPtr parseTerm(const std::string& source) {
  ParseResult r = parse(source);
  if (!r.ok() || !r.file->main) {
    std::string msg = "parse error";
    if (!r.diagnostics.empty()) msg += ": " + r.diagnostics.front().message;
    throw std::runtime_error(msg);
  }
  return r.file->main;
}

}  // namespace gdtl

#endif  // GDTL_PARSE_HPP
