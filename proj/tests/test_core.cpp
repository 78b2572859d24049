#include <catch2/catch_amalgamated.hpp>

#include "gdtl/pretty.hpp"
#include "gdtl/syntax.hpp"

using namespace gdtl;

TEST_CASE("alphaEq ignores binder names") {
  CanonPtr a = cLam("x", cVar(0, "x"));
  CanonPtr b = cLam("y", cVar(0, "y"));
  CHECK(alphaEq(a, b));
}

TEST_CASE("alphaEq distinguishes constructors") {
  CHECK_FALSE(alphaEq(cType(1), cType(2)));
  CHECK_FALSE(alphaEq(cNat(), cType(1)));
}

TEST_CASE("alphaEq on annotated arrows") {
  CanonPtr a = cPi("x", cNat(), Level::of(1), cNat());
  CanonPtr b = cPi("y", cNat(), Level::of(1), cNat());
  CHECK(alphaEq(a, b));
  CanonPtr c = cPi("x", cNat(), Level::omega(), cNat());
  CHECK_FALSE(alphaEq(a, c));
}

TEST_CASE("freshName scheme") {
  CHECK(freshName("x", {"x"}) == "x'");
  CHECK(freshName("x", {}) == "x");
  CHECK(freshName("x", {"x", "x'"}) == "x''");
}

TEST_CASE("prettyPrint basics") {
  CHECK(prettyTerm(tUnknown()) == "?");
  CHECK(prettyTerm(tPi("x", tNat(), tNat())) == "(x : Nat) -> Nat");
  CHECK(prettyTerm(tSucc(tSucc(tZero()))) == "2");
}

TEST_CASE("levels order with omega on top") {
  CHECK(Level::of(1) < Level::of(2));
  CHECK(Level::of(100) < Level::omega());
  CHECK_FALSE(Level::omega() < Level::of(100));
  CHECK_FALSE(Level::omega() < Level::omega());
}

TEST_CASE("context lookup shifts types into scope") {
  Context ctx;
  ctx = ctx.extended("A", cType(1));
  ctx = ctx.extended("x", cVar(0, "A"));
  // x : A where A is one binder out; looked up from full context the index
  // must point at A again.
  CanonPtr tyX = ctx.lookup(0);
  REQUIRE(tyX);
  auto* neu = std::get_if<CNeutral>(&tyX->node);
  REQUIRE(neu);
  CHECK(neu->index == 1);
  CanonPtr tyA = ctx.lookup(1);
  REQUIRE(tyA);
  CHECK(alphaEq(tyA, cType(1)));
}

TEST_CASE("shifting relocates only free indices") {
  CanonPtr u = cLam("x", cNeutral(1, "f", {SArg{cVar(0, "x")}}));
  CanonPtr shifted = shiftCanon(u, 2);
  auto* lam = std::get_if<CLam>(&shifted->node);
  REQUIRE(lam);
  auto* neu = std::get_if<CNeutral>(&lam->body->node);
  REQUIRE(neu);
  CHECK(neu->index == 3);
  CHECK(std::get_if<CNeutral>(&std::get<SArg>(neu->spine[0]).arg->node)->index == 0);
}

TEST_CASE("structural validator accepts spine forms") {
  CanonPtr u = cNeutral(0, "f", {SArg{cNumeral(2)}, SNatElim{cLam("n", cNat()), cZero(),
                                                            cLam("n", cLam("r", cVar(0, "r")))}});
  CHECK(canonWellShaped(u));
}

TEST_CASE("alphaEq is an equivalence on sample forms") {
  std::vector<CanonPtr> forms = {
      cNat(),
      cType(1),
      cUnknown(),
      cLam("x", cVar(0, "x")),
      cPi("x", cNat(), Level::of(1), cNat()),
      cVec(cNat(), cNumeral(2)),
      cNeutral(0, "f", {SArg{cZero()}}),
  };
  for (const auto& a : forms) CHECK(alphaEq(a, a));
  for (const auto& a : forms)
    for (const auto& b : forms)
      if (alphaEq(a, b)) CHECK(alphaEq(b, a));
}
