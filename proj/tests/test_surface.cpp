#include <catch2/catch_amalgamated.hpp>

#include "gdtl/parse.hpp"
#include "gdtl/pretty.hpp"

using namespace gdtl;

TEST_CASE("parses the ascribed nil application") {
  ParseResult r = parse("head : (A : Type 1) -> (n : Nat) -> Vec A (Succ n) -> A\n"
                        "head = \\A. \\n. \\v. vecElim A (Succ n) (\\v2. A) (? :: A)"
                        " (\\n2. \\h. \\tl. \\rec. h) v\n"
                        "head Nat 0 ((Nil Nat) :: Vec Nat ?)\n");
  REQUIRE(r.ok());
  REQUIRE(r.file->main);
  // main is App(App(App(head-body, Nat), 0), Ascribe(Nil Nat, Vec Nat ?))
  auto* app = std::get_if<TApp>(&r.file->main->node);
  REQUIRE(app);
  auto* asc = std::get_if<TAscribe>(&app->arg->node);
  REQUIRE(asc);
  auto* nil = std::get_if<TCtor>(&asc->body->node);
  REQUIRE(nil);
  CHECK(nil->ctor == Ctor::Nil);
  auto* vec = std::get_if<TCtor>(&asc->type->node);
  REQUIRE(vec);
  CHECK(vec->ctor == Ctor::Vec);
  CHECK(std::holds_alternative<TUnknown>(vec->args[1]->node));
}

TEST_CASE("parses self application") {
  TermPtr t = parseTerm("\\x. x x");
  CHECK(alphaEqTerm(t, tLam("x", tApp(tVar(0), tVar(0)))));
}

TEST_CASE("Type 0 is a diagnostic") {
  ParseResult r = parse("Type 0");
  CHECK_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics[0].line == 1);
}

TEST_CASE("numerals desugar to Succ chains") {
  CHECK(alphaEqTerm(parseTerm("2"), tSucc(tSucc(tZero()))));
  CHECK(alphaEqTerm(parseTerm("0"), tZero()));
  CHECK(alphaEqTerm(parseTerm("Succ 1"), tSucc(tSucc(tZero()))));
}

TEST_CASE("plus sugar means iterated Succ") {
  TermPtr t = parseTerm("\\n. n + 1");
  CHECK(alphaEqTerm(t, tLam("n", tSucc(tVar(0)))));
}

TEST_CASE("precedence: ascription loosest, arrow right, application left") {
  CHECK(alphaEqTerm(parseTerm("\\f. \\x. f x x"),
                    tLam("f", tLam("x", tApp(tApp(tVar(1), tVar(0)), tVar(0))))));
  TermPtr arrows = parseTerm("Nat -> Nat -> Nat");
  auto* pi = std::get_if<TPi>(&arrows->node);
  REQUIRE(pi);
  CHECK(std::holds_alternative<TPi>(pi->cod->node));
  TermPtr asc = parseTerm("\\x. x :: ?");
  CHECK(std::holds_alternative<TAscribe>(asc->node));
}

TEST_CASE("fun-arrow lambda form") {
  CHECK(alphaEqTerm(parseTerm("fun x => x"), parseTerm("\\x. x")));
  CHECK(alphaEqTerm(parseTerm("fun x y => x"), parseTerm("\\x. \\y. x")));
}

TEST_CASE("comments and declarations inline") {
  ParseResult r = parse("-- identity on Nat\n"
                        "id : Nat -> Nat\n"
                        "id = \\x. x\n"
                        "id 1\n");
  REQUIRE(r.ok());
  auto* app = std::get_if<TApp>(&r.file->main->node);
  REQUIRE(app);
  CHECK(std::holds_alternative<TAscribe>(app->fn->node));
}

TEST_CASE("diagnostics carry positions") {
  ParseResult r = parse("\\x.\n  x @");
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics[0].line == 2);
  CHECK(r.diagnostics[0].column >= 1);
}

TEST_CASE("unbound identifiers are rejected") {
  ParseResult r = parse("foo 1");
  CHECK_FALSE(r.ok());
}

TEST_CASE("dependent pi binders") {
  TermPtr t = parseTerm("(A : Type 1) -> A -> A");
  auto* pi = std::get_if<TPi>(&t->node);
  REQUIRE(pi);
  CHECK(std::holds_alternative<TType>(pi->dom->node));
  auto* inner = std::get_if<TPi>(&pi->cod->node);
  REQUIRE(inner);
  auto* v = std::get_if<TVar>(&inner->dom->node);
  REQUIRE(v);
  CHECK(v->index == 0);
}

TEST_CASE("round trip: parse after prettyPrint is alpha-equal") {
  std::vector<std::string> sources = {
      "\\x. x x",
      "(A : Type 1) -> (n : Nat) -> Vec A (Succ n) -> A",
      "\\A. \\x. (Refl A x :: Eq A x x)",
      "natElim (\\n. Nat) 0 (\\n. \\r. Succ r) 3",
      "Cons Nat 1 0 (Cons Nat 0 1 (Nil Nat))",
      "?",
      "Type 3",
      "\\f. f (\\y. y) 2",
      "eqElim Nat (\\x. \\y. \\p. Nat) (\\z. z) 1 1 (Refl Nat 1)",
  };
  for (const auto& s : sources) {
    TermPtr t = parseTerm(s);
    TermPtr back = parseTerm(prettyTerm(t));
    INFO(s << "  printed as  " << prettyTerm(t));
    CHECK(alphaEqTerm(t, back));
  }
}
