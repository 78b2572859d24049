#include <catch2/catch_amalgamated.hpp>

#include "gdtl/normalize.hpp"
#include "gdtl/parse.hpp"

using namespace gdtl;

namespace {
LevelMultiset ms(std::initializer_list<Level> ls) {
  LevelMultiset m(ls);
  std::sort(m.begin(), m.end(), [](Level a, Level b) { return a < b; });
  return m;
}
}  // namespace

TEST_CASE("level measure collects arrow annotations everywhere") {
  CanonPtr u = cPi("f", cPi("x", cNat(), Level::of(1), cNat()), Level::of(2),
                   cPi("y", cNat(), Level::omega(), cNat()));
  CHECK(levelMeasure(u) == ms({Level::of(1), Level::of(2), Level::omega()}));
  CHECK(levelMeasure(cNat()).empty());
}

TEST_CASE("multiset order basics") {
  CHECK(measureLess(ms({Level::of(1), Level::of(1), Level::of(1)}), ms({Level::of(2)})));
  CHECK_FALSE(measureLess(ms({Level::of(2)}), ms({Level::of(1), Level::of(1), Level::of(1)})));
  CHECK_FALSE(measureLess(ms({Level::of(2)}), ms({Level::of(2)})));
  CHECK(measureLess(ms({}), ms({Level::of(1)})));
  CHECK(measureLess(ms({Level::of(5), Level::of(5)}), ms({Level::omega()})));
  CHECK_FALSE(measureLess(ms({Level::omega()}), ms({Level::of(5), Level::of(5)})));
  CHECK(measureLess(ms({Level::of(1)}), ms({Level::of(1), Level::of(1)})));
}

TEST_CASE("eta expansion at a two-argument arrow") {
  CanonPtr ty = cPi("x", cNat(), Level::of(1), cPi("y", cNat(), Level::of(1), cNat()));
  CanonPtr got = etaExpandVar(0, "f", ty);
  CanonPtr want =
      cLam("x", cLam("y", cNeutral(2, "f", {SArg{cVar(1, "x")}, SArg{cVar(0, "y")}})));
  CHECK(alphaEq(got, want));
}

TEST_CASE("hsub substitutes and strengthens") {
  // [2 / x] Succ x  =  3
  CHECK(alphaEq(hsub(cNumeral(2), 0, cNat(), cSucc(cVar(0, "x"))), cNumeral(3)));
  // A free variable above the binder drops by one.
  CHECK(alphaEq(hsub(cZero(), 0, cNat(), cVar(1, "g")), cVar(0, "g")));
  // A variable under a passed binder is untouched.
  CanonPtr t = cLam("y", cVar(0, "y"));
  CHECK(alphaEq(hsub(cZero(), 0, cNat(), t), t));
}

TEST_CASE("hsub beta-reduces when the domain measure shrinks") {
  // x : Nat -> Nat applied to 1, with x := \n. Succ n.
  CanonPtr X = cPi("n", cNat(), Level::of(1), cNat());
  CanonPtr v = cLam("n", cSucc(cVar(0, "n")));
  CanonPtr target = cNeutral(0, "x", {SArg{cNumeral(1)}});
  CHECK(alphaEq(hsub(v, 0, X, target), cNumeral(2)));
}

TEST_CASE("hsub approximates when the measure does not shrink") {
  // x : (A : Type 2) -> A -> A, applied first to the type T = Nat -> Nat
  // (arrows at level 2) and then to an inhabitant. The second application's
  // domain has the same level multiset as x's own type, so the result of the
  // whole spine degrades to ?.
  CanonPtr X = cPi("A", cType(2), Level::of(2),
                   cPi("x", cVar(0, "A"), Level::of(2), cVar(1, "A")));
  CanonPtr v = cLam("A", cLam("x", cVar(0, "x")));
  CanonPtr T = cPi("n", cNat(), Level::of(2), cPi("m", cNat(), Level::of(2), cNat()));
  CanonPtr inhab = cLam("n", cLam("m", cVar(1, "n")));
  CanonPtr target = cNeutral(0, "x", {SArg{shiftCanon(T, 1)}, SArg{shiftCanon(inhab, 1)}});
  CHECK(isUnknown(hsub(v, 0, X, target)));
}

TEST_CASE("natElim computes") {
  CanonPtr m = cLam("n", cNat());
  CanonPtr s = cLam("n", cLam("r", cSucc(cVar(0, "r"))));
  Fuel f{1000};
  CHECK(alphaEq(reduceNat(m, cZero(), s, cNumeral(3), f), cNumeral(3)));
  CHECK(isUnknown(reduceNat(m, cZero(), s, cUnknown(), f)));
  // Neutral scrutinee re-emits the frame.
  CanonPtr r = reduceNat(m, cZero(), s, cVar(0, "n"), f);
  auto* neu = std::get_if<CNeutral>(&r->node);
  REQUIRE(neu);
  CHECK(std::holds_alternative<SNatElim>(neu->spine[0]));
}

TEST_CASE("vecElim computes length via the recursive branch") {
  // Fold a two-element vector to its length.
  CanonPtr vec = cCons(cNat(), cNumeral(1), cNumeral(5),
                       cCons(cNat(), cNumeral(0), cNumeral(7), cNil(cNat())));
  CanonPtr m = cLam("v", cNat());
  CanonPtr s = cLam("n2", cLam("h", cLam("tl", cLam("rec", cSucc(cVar(0, "rec"))))));
  Fuel f{1000};
  CHECK(alphaEq(reduceVec(cNat(), cNumeral(2), m, cZero(), s, vec, f), cNumeral(2)));
}

TEST_CASE("eqElim on Refl and on ?") {
  CanonPtr mth = cLam("z", cSucc(cVar(0, "z")));
  Fuel f{1000};
  CanonPtr viaRefl = reduceEq(cNat(), cLam("x", cLam("y", cLam("p", cNat()))), mth,
                              cNumeral(1), cNumeral(1), cRefl(cNat(), cNumeral(1)), f);
  CHECK(alphaEq(viaRefl, cNumeral(2)));
  CanonPtr viaUnknown = reduceEq(cNat(), cLam("x", cLam("y", cLam("p", cNat()))), mth,
                                 cNumeral(1), cNumeral(1), cUnknown(), f);
  CHECK(alphaEq(viaUnknown, cSucc(cUnknown())));
}

TEST_CASE("synthesis: variables eta-expand; ?-typed variables get one level") {
  Context ctx;
  ctx = ctx.extended("f", cPi("x", cNat(), Level::of(1), cNat()));
  auto [u, U] = normSynth(ctx, tVar(0, "f"));
  CHECK(alphaEq(u, cLam("x", cNeutral(1, "f", {SArg{cVar(0, "x")}}))));
  CHECK(alphaEq(U, cPi("x", cNat(), Level::of(1), cNat())));

  Context ctx2;
  ctx2 = ctx2.extended("g", cUnknown());
  auto [u2, U2] = normSynth(ctx2, tVar(0, "g"));
  CHECK(alphaEq(u2, cLam("y", cNeutral(1, "g", {SArg{cVar(0, "y")}}))));
  CHECK(isUnknown(U2));
}

TEST_CASE("synthesis: universes, ?, arrows") {
  Context ctx;
  auto [u, U] = normSynth(ctx, parseTerm("Type 1"));
  CHECK(alphaEq(u, cType(1)));
  CHECK(alphaEq(U, cType(2)));
  auto [q, Q] = normSynth(ctx, parseTerm("?"));
  CHECK(isUnknown(q));
  CHECK(isUnknown(Q));
  auto [p, P] = normSynth(ctx, parseTerm("Nat -> Nat"));
  CHECK(alphaEq(p, cPi("_", cNat(), Level::of(1), cNat())));
  CHECK(alphaEq(P, cType(1)));
}

TEST_CASE("addition by natElim normalizes") {
  TermPtr t = parseTerm("((\\a. \\b. natElim (\\n. Nat) b (\\n2. \\r. Succ r) a)"
                        " :: Nat -> Nat -> Nat) 2 3");
  auto [u, U] = normSynth(Context{}, t);
  CHECK(alphaEq(u, cNumeral(5)));
  CHECK(alphaEq(U, cNat()));
}

TEST_CASE("checking an imprecise term at a precise type approximates") {
  // \A. \x. (0 :: ?) :: A  at  (A : Type 1) -> A -> A: the body's synthesized
  // type is ?, which is not at least as precise as A, so the body becomes ?.
  TermPtr t = parseTerm("\\A. \\x. ((0 :: ?) :: A)");
  auto [target, lvl] = normTypeSynthLevel(Context{}, parseTerm("(A : Type 1) -> A -> A"));
  CHECK(lvl == Level::of(2));
  CanonPtr u = normCheck(Context{}, t, target);
  CHECK(alphaEq(u, cLam("A", cLam("x", cUnknown()))));
}

TEST_CASE("checking keeps precise terms") {
  CanonPtr u = normCheck(Context{}, parseTerm("Nil Nat"), cVec(cNat(), cUnknown()));
  CHECK(alphaEq(u, cNil(cNat())));
  CHECK_THROWS_AS(normCheck(Context{}, parseTerm("Nil Nat"), cVec(cNat(), cNumeral(1))),
                  TypeError);
}

TEST_CASE("cumulativity in checking") {
  CHECK(alphaEq(normCheck(Context{}, parseTerm("Nat"), cType(2)), cNat()));
  CHECK_THROWS_AS(normCheck(Context{}, parseTerm("Type 2"), cType(1)), TypeError);
}

TEST_CASE("self application through ? terminates") {
  TermPtr omega = parseTerm("((\\x. x x) :: ? -> ?) ((\\x. x x) :: ?)");
  auto [u, U] = normSynth(Context{}, omega);
  CHECK(isUnknown(u));
}

TEST_CASE("vector head of an imprecisely-typed nil normalizes to ? at Nat") {
  ParseResult r = parse("head : (A : Type 1) -> (n : Nat) -> Vec A (Succ n) -> A\n"
                        "head = \\A. \\n. \\v. vecElim A (Succ n) (\\v2. A) (? :: A)"
                        " (\\n2. \\h. \\tl. \\rec. h) v\n"
                        "head Nat 0 ((Nil Nat) :: Vec Nat ?)\n");
  REQUIRE(r.ok());
  auto [u, U] = normSynth(Context{}, r.file->main);
  CHECK(alphaEq(U, cNat()));
  CHECK(isUnknown(u));
}

TEST_CASE("normalization is idempotent on its outputs") {
  std::vector<std::string> sources = {
      "((\\a. \\b. natElim (\\n. Nat) b (\\n2. \\r. Succ r) a) :: Nat -> Nat -> Nat) 2 3",
      "Cons Nat 1 0 (Cons Nat 0 1 (Nil Nat))",
      "(\\x. x) :: (A : Type 1) -> ?",
      "Eq Nat 1 1",
      "Refl Nat 2",
  };
  for (const auto& s : sources) {
    auto [u, U] = normSynth(Context{}, parseTerm(s));
    auto [u2, U2] = normSynth(Context{}, tAscribe(quote(u), quote(U)));
    INFO(s);
    CHECK(alphaEq(u, u2));
    CHECK(alphaEq(U, U2));
  }
}

TEST_CASE("fuel exhaustion raises") {
  Fuel tiny{2};
  TermPtr t = parseTerm("natElim (\\n. Nat) 0 (\\n2. \\r. Succ r) 9");
  CHECK_THROWS_AS(normSynth(Context{}, t, tiny), FuelExhausted);
}

TEST_CASE("quote reads canonical forms back") {
  CHECK(alphaEqTerm(quote(cNumeral(2)), parseTerm("2")));
  CHECK(alphaEqTerm(quote(cLam("x", cVar(0, "x"))), parseTerm("\\x. x")));
  CanonPtr neu = cNeutral(0, "n", {SNatElim{cLam("k", cNat()), cZero(),
                                            cLam("k", cLam("r", cSucc(cVar(0, "r"))))}});
  TermPtr q = quote(neu);
  auto* c = std::get_if<TCtor>(&q->node);
  REQUIRE(c);
  CHECK(c->ctor == Ctor::NatElim);
  CHECK(std::holds_alternative<TVar>(c->args[3]->node));
}

TEST_CASE("application against an unknown-typed function") {
  // g : ? applied to an argument synthesizes at type ?.
  Context ctx;
  ctx = ctx.extended("g", cUnknown());
  auto [u, U] = normSynth(ctx, tApp(tVar(0, "g"), tZero()));
  CHECK(isUnknown(U));
  auto* neu = std::get_if<CNeutral>(&u->node);
  REQUIRE(neu);
  CHECK(neu->index == 0);
  REQUIRE(neu->spine.size() == 1);
}
