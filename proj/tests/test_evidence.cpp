#include <catch2/catch_amalgamated.hpp>

#include "gdtl/evidence.hpp"
#include "gdtl/parse.hpp"
#include "gdtl/static_lang.hpp"

using namespace gdtl;

namespace {
const std::string kHeadDecl =
    "head : (A : Type 1) -> (n : Nat) -> Vec A (Succ n) -> A\n"
    "head = \\A. \\n. \\v. vecElim A (Succ n) (\\v2. A) (? :: A)"
    " (\\n2. \\h. \\tl. \\rec. h) v\n";

EvTermPtr elabMain(const std::string& src) {
  ParseResult r = parse(src);
  REQUIRE(r.ok());
  REQUIRE(r.file->main);
  return elabSynth(Context{}, r.file->main).first;
}
}  // namespace

TEST_CASE("elaboration adds boundary evidence") {
  // Nil Nat :: Vec Nat ?  checked at  Vec Nat 1.
  Fuel f{kDefaultNormFuel};
  EvTermPtr e = elabCheck(Context{}, parseTerm("(Nil Nat) :: Vec Nat ?"),
                          cVec(cNat(), cNumeral(1)), f);
  auto* outer = std::get_if<EWithEv>(&e->node);
  REQUIRE(outer);
  CHECK(alphaEq(outer->ev.witness, cVec(cNat(), cNumeral(1))));
  auto* inner = std::get_if<EWithEv>(&outer->raw->node);
  REQUIRE(inner);
  CHECK(alphaEq(inner->ev.witness, cVec(cNat(), cZero())));
  CHECK(std::holds_alternative<ECtor>(inner->raw->node));
}

TEST_CASE("the unknown elaborates under ⟨?⟩ and lambdas at ? under ⟨?→?⟩") {
  auto [e, U] = elabSynth(Context{}, parseTerm("?"));
  auto* we = std::get_if<EWithEv>(&e->node);
  REQUIRE(we);
  CHECK(isUnknown(we->ev.witness));
  CHECK(std::holds_alternative<EUnknown>(we->raw->node));
  CHECK(isUnknown(U));

  Fuel f{kDefaultNormFuel};
  EvTermPtr lam = elabCheck(Context{}, parseTerm("\\x. x"), cUnknown(), f);
  auto* lw = std::get_if<EWithEv>(&lam->node);
  REQUIRE(lw);
  CHECK(alphaEq(lw->ev.witness, cPi("_", cUnknown(), Level::omega(), cUnknown())));
  CHECK(std::holds_alternative<ELam>(lw->raw->node));
}

TEST_CASE("evidence composition is the precision meet") {
  Evidence vUnk{cVec(cNat(), cUnknown())};
  Evidence v1{cVec(cNat(), cNumeral(1))};
  Evidence v0{cVec(cNat(), cZero())};
  auto c1 = composeEvidence(vUnk, v1);
  REQUIRE(c1);
  CHECK(alphaEq(c1->witness, v1.witness));
  CHECK_FALSE(composeEvidence(v0, v1));
  auto c2 = composeEvidence(v1, v1);
  REQUIRE(c2);
  CHECK(alphaEq(c2->witness, v1.witness));
}

TEST_CASE("evalSubst rewrites witnesses hereditarily") {
  // [0 / x] WithEv(⟨Vec Nat (Succ x)⟩, y)  has witness  Vec Nat 1.
  EvTermPtr body = eWithEv(Evidence{cVec(cNat(), cSucc(cVar(0, "x")))}, eVar(1, "y"));
  Fuel f{kDefaultNormFuel};
  EvTermPtr out = evalSubst(0, eCtor(Ctor::Zero, {}), cZero(), cNat(), body, f);
  auto* we = std::get_if<EWithEv>(&out->node);
  REQUIRE(we);
  CHECK(alphaEq(we->ev.witness, cVec(cNat(), cNumeral(1))));
  CHECK(std::get<EVar>(we->raw->node).index == 0);  // y strengthened past x
  // Term positions: x itself becomes the replacement, other variables stay.
  EvTermPtr self = evalSubst(0, eType(1), cType(1), cType(2), eVar(0, "x"), f);
  CHECK(std::holds_alternative<EType>(self->node));
}

TEST_CASE("double evidence collapses or fails") {
  EvTermPtr nil = eCtor(Ctor::Nil, {eCtor(Ctor::Nat, {})});
  EvTermPtr bad = eWithEv(Evidence{cVec(cNat(), cNumeral(1))},
                          eWithEv(Evidence{cVec(cNat(), cZero())}, nil));
  Fuel f{kDefaultNormFuel};
  StepOut s = step(bad, f);
  CHECK(s.kind == StepOut::Err);
  CHECK(std::string(s.rule) == "StepAscrFail");
  REQUIRE(s.errLeft);
  REQUIRE(s.errRight);
  CHECK(alphaEq(s.errLeft, cVec(cNat(), cZero())));
  CHECK(alphaEq(s.errRight, cVec(cNat(), cNumeral(1))));

  EvTermPtr good = eWithEv(Evidence{cVec(cNat(), cUnknown())},
                           eWithEv(Evidence{cVec(cNat(), cZero())}, nil));
  Fuel f2{kDefaultNormFuel};
  StepOut s2 = step(good, f2);
  REQUIRE(s2.kind == StepOut::Stepped);
  CHECK(std::string(s2.rule) == "StepAscr");
  auto* we = std::get_if<EWithEv>(&s2.term->node);
  REQUIRE(we);
  CHECK(alphaEq(we->ev.witness, cVec(cNat(), cZero())));
}

TEST_CASE("applying the unknown yields the unknown") {
  EvTermPtr fn = eWithEv(Evidence{cPi("_", cUnknown(), Level::omega(), cUnknown())},
                         eUnknown());
  EvTermPtr arg = eWithEv(Evidence{cUnknown()}, eCtor(Ctor::Zero, {}));
  Fuel f{kDefaultNormFuel};
  StepOut s = step(eApp(fn, arg), f);
  REQUIRE(s.kind == StepOut::Stepped);
  CHECK(std::string(s.rule) == "StepAppDyn");
  auto* we = std::get_if<EWithEv>(&s.term->node);
  REQUIRE(we);
  CHECK(isUnknown(we->ev.witness));
  CHECK(std::holds_alternative<EUnknown>(we->raw->node));
}

TEST_CASE("beta through evidence keeps the argument's composed evidence") {
  EvTermPtr fn = eWithEv(Evidence{cPi("_", cUnknown(), Level::omega(), cUnknown())},
                         eLam("x", eVar(0, "x")));
  EvTermPtr arg = eWithEv(Evidence{cUnknown()}, eCtor(Ctor::Zero, {}));
  RunResult r = run(eApp(fn, arg), 100);
  REQUIRE(r.status == RunResult::Value);
  auto* we = std::get_if<EWithEv>(&r.term->node);
  REQUIRE(we);
  CHECK(isUnknown(we->ev.witness));
  auto* raw = std::get_if<ECtor>(&we->raw->node);
  REQUIRE(raw);
  CHECK(raw->ctor == Ctor::Zero);
}

TEST_CASE("the imprecise head program fails at runtime with the Vec meet") {
  EvTermPtr prog = elabMain(kHeadDecl + "head Nat 0 ((Nil Nat) :: Vec Nat ?)\n");
  RunResult r = run(prog);
  REQUIRE(r.status == RunResult::Err);
  REQUIRE(r.errLeft);
  REQUIRE(r.errRight);
  CHECK(alphaEq(r.errLeft, cVec(cNat(), cZero())));
  CHECK(alphaEq(r.errRight, cVec(cNat(), cNumeral(1))));
}

TEST_CASE("the imprecise cons program succeeds at runtime") {
  EvTermPtr prog =
      elabMain(kHeadDecl + "head Nat 1 ((Cons Nat ? 0 (Nil Nat)) :: Vec Nat ?)\n");
  RunResult r = run(prog);
  REQUIRE(r.status == RunResult::Value);
  CHECK(alphaEqTerm(stripEv(r.term), tZero()));
}

TEST_CASE("embedded self-application exhausts fuel") {
  TermPtr omega = slang::untypedEmbed(parseTerm("(\\x. x x) (\\x. x x)"));
  auto [e, U] = elabSynth(Context{}, omega);
  RunResult r = run(e, 10000);
  CHECK(r.status == RunResult::Fuel);
}

TEST_CASE("runtime eliminators compute") {
  EvTermPtr add = elabMain("plus : Nat -> Nat -> Nat\n"
                           "plus = \\a. \\b. natElim (\\n. Nat) b (\\n2. \\r. Succ r) a\n"
                           "plus 2 3\n");
  RunResult r = run(add);
  REQUIRE(r.status == RunResult::Value);
  CHECK(alphaEqTerm(stripEv(r.term), tNumeral(5)));

  EvTermPtr eq = elabMain(
      "eqElim Nat (\\x. \\y. \\p. Nat) (\\z. z) 1 1 (Refl Nat 1)\n");
  RunResult r2 = run(eq);
  REQUIRE(r2.status == RunResult::Value);
  CHECK(alphaEqTerm(stripEv(r2.term), tNumeral(1)));

  EvTermPtr nil = elabMain(
      "vecElim Nat 0 (\\v. Nat) 7 (\\n2. \\h. \\tl. \\rec. h) (Nil Nat)\n");
  RunResult r3 = run(nil);
  REQUIRE(r3.status == RunResult::Value);
  CHECK(alphaEqTerm(stripEv(r3.term), tNumeral(7)));
}

TEST_CASE("evidence-term typing") {
  EvTermPtr nil0 = eWithEv(Evidence{cVec(cNat(), cZero())},
                           eCtor(Ctor::Nil, {eCtor(Ctor::Nat, {})}));
  CHECK(alphaEq(evSynth(Context{}, nil0), cVec(cNat(), cZero())));
  CHECK(evChecks(Context{}, nil0, cVec(cNat(), cUnknown())));
  CHECK_FALSE(evChecks(Context{}, nil0, cVec(cNat(), cNumeral(1))));
  CHECK(alphaEq(evSynth(Context{}, eType(1)), cType(2)));
  CHECK(isUnknown(evSynth(Context{}, eWithEv(Evidence{cUnknown()}, eUnknown()))));
  // err types at any type.
  CHECK(evChecks(Context{}, eErr(), cNat()));
  CHECK(evChecks(Context{}, eErr(), cType(1)));
}

TEST_CASE("preservation along traces") {
  std::vector<std::string> programs = {
      kHeadDecl + "head Nat 1 ((Cons Nat ? 0 (Nil Nat)) :: Vec Nat ?)\n",
      "plus : Nat -> Nat -> Nat\n"
      "plus = \\a. \\b. natElim (\\n. Nat) b (\\n2. \\r. Succ r) a\n"
      "plus 1 2\n",
      "((\\x. x) :: ? -> ?) (0 :: ?)\n",
      "eqElim Nat (\\x. \\y. \\p. Nat) (\\z. z) 1 1 (Refl Nat 1)\n",
  };
  for (const auto& src : programs) {
    ParseResult pr = parse(src);
    REQUIRE(pr.ok());
    auto [e, U] = elabSynth(Context{}, pr.file->main);
    INFO(src);
    CHECK(evChecks(Context{}, e, U));
    long guard = 0;
    while (guard++ < 500) {
      Fuel nf{kDefaultNormFuel};
      StepOut s = step(e, nf);
      if (s.kind != StepOut::Stepped) break;
      e = s.term;
      CHECK(evChecks(Context{}, e, U));
    }
    REQUIRE(guard < 500);
  }
}

TEST_CASE("stepping is deterministic") {
  std::string src = kHeadDecl + "head Nat 1 ((Cons Nat ? 0 (Nil Nat)) :: Vec Nat ?)\n";
  EvTermPtr a = elabMain(src);
  RunResult r1 = run(a);
  RunResult r2 = run(elabMain(src));
  REQUIRE(r1.status == RunResult::Value);
  REQUIRE(r2.status == RunResult::Value);
  CHECK(alphaEqEv(r1.term, r2.term));
  CHECK(r1.steps == r2.steps);
}

TEST_CASE("erasure inverts elaboration up to ascriptions") {
  TermPtr t = parseTerm("Cons Nat 1 0 (Cons Nat 0 1 (Nil Nat))");
  auto [e, U] = elabSynth(Context{}, t);
  CHECK(alphaEqTerm(stripEv(e), t));
  // The evidence-ascribed erasure still typechecks at the same type.
  auto [u2, U2] = normSynth(Context{}, eraseEv(e));
  CHECK(alphaEq(U2, U));
}

TEST_CASE("conservative extension: static programs run to their static values") {
  std::vector<std::string> sources = {
      "((\\x. x) :: Nat -> Nat) 2",
      "((\\A. \\x. x) :: (A : Type 1) -> A -> A) Nat 3",
      "((\\f. \\x. f (f x)) :: (Nat -> Nat) -> Nat -> Nat)"
      " ((\\n. Succ n) :: Nat -> Nat) 0",
  };
  for (const auto& s : sources) {
    TermPtr t = parseTerm(s);
    auto [e, U] = elabSynth(Context{}, t);
    RunResult r = run(e);
    REQUIRE(r.status == RunResult::Value);
    slang::SStep stat = slang::srun(t);
    REQUIRE(stat.cls == slang::StepClass::Value);
    INFO(s);
    CHECK(alphaEqTerm(stripEv(r.term), stat.term));
  }
}

TEST_CASE("trace callback reports rule names") {
  std::vector<std::string> rules;
  EvTermPtr prog = elabMain("((\\x. x) :: ? -> ?) (0 :: ?)\n");
  run(prog, 100, [&](const char* rule, const EvTermPtr&) { rules.push_back(rule); });
  REQUIRE_FALSE(rules.empty());
  bool sawApp = false;
  for (const auto& r : rules)
    if (r == "StepAppEv") sawApp = true;
  CHECK(sawApp);
}
