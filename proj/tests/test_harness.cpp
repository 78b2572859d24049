#include <catch2/catch_amalgamated.hpp>

#include "gdtl/harness.hpp"
#include "gdtl/parse.hpp"

using namespace gdtl;
using namespace gdtl::harness;

TEST_CASE("generated triples typecheck and are deterministic in the seed") {
  GenResult a = genWellTyped(1, 3);
  CHECK(checks(a.ctx, a.term, a.type));
  GenResult b = genWellTyped(1, 3);
  CHECK(alphaEqTerm(a.term, b.term));
  CHECK(alphaEq(a.type, b.type));
  REQUIRE(a.ctx.size() == b.ctx.size());
  CHECK_THROWS_AS(genWellTyped(2, 0), InternalError);
}

TEST_CASE("generator soundness across many seeds") {
  for (long seed = 0; seed < 150; ++seed) {
    GenResult g = genWellTyped(seed, 1 + static_cast<int>(seed % 4));
    INFO("seed " << seed << ": " << prettyTerm(g.term) << " : " << prettyCanon(g.type));
    CHECK(checks(g.ctx, g.term, g.type));
  }
}

TEST_CASE("lowerPrecision replaces one subterm with ?") {
  TermPtr vec = parseTerm("Vec Nat 0");
  bool sawChange = false;
  for (long s = 0; s < 20; ++s) {
    TermPtr out = lowerPrecision(vec, s);
    CHECK(termPrecision(vec, out));
    if (!alphaEqTerm(vec, out)) sawChange = true;
  }
  CHECK(sawChange);
  // ? is a fixpoint.
  CHECK(alphaEqTerm(lowerPrecision(tUnknown(), 7), tUnknown()));
}

TEST_CASE("the original term is always below its mutation") {
  for (long seed = 200; seed < 260; ++seed) {
    GenResult g = genWellTyped(seed, 3);
    TermPtr mut = lowerPrecision(g.term, seed);
    INFO(prettyTerm(g.term) << "  ~~>  " << prettyTerm(mut));
    CHECK(termPrecision(g.term, mut));
  }
}

TEST_CASE("precision modulo eta") {
  Context ctx;
  CanonPtr arrow = cPi("x", cNat(), Level::of(1), cNat());
  ctx = ctx.extended("f", arrow);
  // f at an arrow vs its eta-expansion at ? -> ?.
  CanonPtr bare = cVar(0, "f");
  CanonPtr expanded = cLam("x", cNeutral(1, "f", {SArg{cVar(0, "x")}}));
  CHECK(precisionModEta(bare, arrow, expanded, cPi("x", cUnknown(), Level::omega(), cUnknown())));
  CHECK(precisionModEta(expanded, arrow, bare, arrow));
  // Reflexivity.
  CHECK(precisionModEta(expanded, arrow, expanded, arrow));
  CHECK(precisionModEta(cNumeral(2), cNat(), cNumeral(2), cNat()));
  // Unrelated values stay unrelated.
  CHECK_FALSE(precisionModEta(cType(1), cType(2), cNat(), cType(1)));
  CHECK_FALSE(precisionModEta(cNumeral(1), cNat(), cNumeral(2), cNat()));
  // ? on the right absorbs anything.
  CHECK(precisionModEta(expanded, arrow, cUnknown(), cUnknown()));
}

TEST_CASE("the guarantee suite reports no counterexamples on honest lowering") {
  Report r = checkGuarantees(42, 100, 1000);
  for (const auto& e : r.entries) {
    INFO("seed " << e.seed << " " << e.property << ": " << e.counterexample);
    CHECK(e.ok);
  }
  CHECK(r.counterexampleCount() == 0);
  CHECK(r.entries.size() == 300);  // three properties per case
}

TEST_CASE("a broken mutation is detected with at least one counterexample") {
  // Replacing the whole program with Type 1 is not a precision lowering; the
  // suite must notice.
  Mutator bad = [](const TermPtr&, long) { return tType(1); };
  Report r = checkGuarantees(42, 50, 500, bad);
  CHECK(r.counterexampleCount() >= 1);
}

TEST_CASE("empty runs produce empty reports") {
  Report r = checkGuarantees(7, 0, 100);
  CHECK(r.entries.empty());
  CHECK(r.toJsonLines().empty());
}

TEST_CASE("reports serialize as JSON lines") {
  Report r;
  r.entries.push_back({3, "static-guarantee", true, ""});
  r.entries.push_back({4, "dynamic-guarantee", false, "\\x. \"quoted\""});
  std::string out = r.toJsonLines();
  CHECK(out == "{\"seed\":3,\"property\":\"static-guarantee\",\"verdict\":\"ok\"}\n"
               "{\"seed\":4,\"property\":\"dynamic-guarantee\",\"verdict\":\"counterexample\","
               "\"counterexample\":\"\\\\x. \\\"quoted\\\"\"}\n");
}

TEST_CASE("shrinking keeps the failure and reaches a local minimum") {
  // Predicate: the term contains a Succ node.
  std::function<bool(const TermPtr&)> hasSucc = [&](const TermPtr& t) -> bool {
    if (auto* c = std::get_if<TCtor>(&t->node)) {
      if (c->ctor == Ctor::Succ) return true;
      for (const auto& a : c->args)
        if (hasSucc(a)) return true;
      return false;
    }
    if (auto* l = std::get_if<TLam>(&t->node)) return hasSucc(l->body);
    if (auto* a = std::get_if<TApp>(&t->node)) return hasSucc(a->fn) || hasSucc(a->arg);
    if (auto* s = std::get_if<TAscribe>(&t->node)) return hasSucc(s->body) || hasSucc(s->type);
    return false;
  };
  // Note numerals above 0 desugar to Succ chains, so only the one written
  // Succ appears here.
  TermPtr big = parseTerm("Cons Nat 0 (Succ 0) (Cons Nat 0 0 (Nil Nat))");
  TermPtr small = shrinkWhile(big, hasSucc);
  CHECK(hasSucc(small));
  // Locally minimal: every remaining non-? node is on the path to the Succ,
  // and no further single replacement keeps it.
  CHECK(alphaEqTerm(small, parseTerm("Cons ? ? (Succ ?) ?")));
  long n = 0;
  std::vector<long> idx;
  gdtl::harness::detail_h::eligibleNodes(small, n, idx);
  for (long i : idx) {
    TermPtr c = gdtl::harness::detail_h::replaceNode(small, i);
    CHECK_FALSE(hasSucc(c));
  }
}
