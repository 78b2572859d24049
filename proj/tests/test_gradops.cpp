#include <catch2/catch_amalgamated.hpp>
#include <map>
#include <random>
#include <set>

#include "gdtl/gradops.hpp"
#include "gdtl/oracle.hpp"

using namespace gdtl;

namespace {
CanonPtr vecNat(const CanonPtr& len) { return cVec(cNat(), len); }
}  // namespace

TEST_CASE("consistency basics") {
  CHECK(consistent(vecNat(cNumeral(0)), vecNat(cUnknown())));
  CHECK(consistent(vecNat(cUnknown()), vecNat(cNumeral(1))));
  CHECK_FALSE(consistent(vecNat(cNumeral(0)), vecNat(cNumeral(1))));
  CHECK(consistent(cVar(0, "x"), cVar(0, "x")));
  CHECK_FALSE(consistent(cVar(0, "x"), cVar(1, "y")));
}

TEST_CASE("precision basics") {
  CHECK(precision(vecNat(cNumeral(0)), vecNat(cUnknown())));
  CHECK_FALSE(precision(vecNat(cUnknown()), vecNat(cNumeral(0))));
  for (const auto& u : oracle::enumGradual(1)) CHECK(precision(u, u));
}

TEST_CASE("meet basics") {
  CanonPtr m = meet(vecNat(cNumeral(0)), vecNat(cUnknown()));
  REQUIRE(m);
  CHECK(alphaEq(m, vecNat(cNumeral(0))));
  CHECK(meet(vecNat(cNumeral(0)), vecNat(cNumeral(1))) == nullptr);
  for (const auto& u : oracle::enumGradual(1)) {
    CanonPtr mm = meet(u, u);
    REQUIRE(mm);
    CHECK(alphaEq(mm, u));
  }
}

TEST_CASE("meet agrees with the bounded oracle on the motivating example") {
  CanonPtr a = vecNat(cNumeral(0));
  CanonPtr b = vecNat(cUnknown());
  auto ga = oracle::concretizeBounded(a, 3);
  auto gb = oracle::concretizeBounded(b, 3);
  std::set<std::string> keys;
  for (const auto& u : ga) keys.insert(oracle::key(u));
  std::vector<CanonPtr> inter;
  for (const auto& u : gb)
    if (keys.count(oracle::key(u))) inter.push_back(u);
  REQUIRE_FALSE(inter.empty());
  CHECK(alphaEq(oracle::abstractSet(inter), vecNat(cNumeral(0))));
}

TEST_CASE("dom of function types") {
  CanonPtr arrow = cPi("x", cNat(), Level::of(1), cNat());
  REQUIRE(domOf(arrow));
  CHECK(alphaEq(domOf(arrow), cNat()));
  REQUIRE(domOf(cUnknown()));
  CHECK(isUnknown(domOf(cUnknown())));
  CHECK(domOf(cType(1)) == nullptr);
}

TEST_CASE("concretization of precise terms is a singleton") {
  auto s = oracle::concretizeBounded(cNat(), 3);
  REQUIRE(s.size() == 1);
  CHECK(alphaEq(s[0], cNat()));
}

TEST_CASE("concretization of ? at depth 0 is the leaf alphabet") {
  auto s = oracle::concretizeBounded(cUnknown(), 0);
  CHECK(s.size() == 7);
}

TEST_CASE("concretization of Vec Nat ? includes numeral and type indices") {
  auto s = oracle::concretizeBounded(vecNat(cUnknown()), 2);
  std::set<std::string> keys;
  for (const auto& u : s) keys.insert(oracle::key(u));
  CHECK(keys.count(oracle::key(vecNat(cNumeral(0)))));
  CHECK(keys.count(oracle::key(vecNat(cNumeral(1)))));
  CHECK(keys.count(oracle::key(vecNat(cNumeral(2)))));
  CHECK(keys.count(oracle::key(vecNat(cNat()))));
}

TEST_CASE("abstraction examples") {
  CHECK(alphaEq(oracle::abstractSet({cType(1)}), cType(1)));
  CHECK(isUnknown(oracle::abstractSet({cNat(), cType(1)})));
  CanonPtr l0 = cLam("x", cNumeral(0));
  CanonPtr l1 = cLam("x", cNumeral(1));
  CanonPtr a = oracle::abstractSet({l0, l1});
  REQUIRE(std::holds_alternative<CLam>(a->node));
  CHECK(isUnknown(std::get<CLam>(a->node).body));
  CHECK_THROWS(oracle::abstractSet({}));
}

TEST_CASE("meet level rules") {
  CanonPtr a1 = cPi("x", cNat(), Level::of(1), cNat());
  CanonPtr a2 = cPi("x", cNat(), Level::of(2), cNat());
  CanonPtr aw = cPi("x", cNat(), Level::omega(), cNat());
  CanonPtr m = meet(a1, aw);
  REQUIRE(m);
  CHECK(std::get<CPi>(m->node).level == Level::of(1));
  CHECK(meet(a1, a2) == nullptr);
}

TEST_CASE("lattice laws on the bounded universe (depth 2)") {
  auto univ = oracle::enumGradual(2);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, univ.size() - 1);
  for (int i = 0; i < 4000; ++i) {
    const CanonPtr& a = univ[pick(rng)];
    const CanonPtr& b = univ[pick(rng)];
    CanonPtr mab = meet(a, b);
    CHECK(consistent(a, b) == (mab != nullptr));
    CHECK(consistent(a, b) == consistent(b, a));
    if (mab) {
      CanonPtr mba = meet(b, a);
      REQUIRE(mba);
      CHECK(alphaEq(mab, mba));
      CHECK(precision(mab, a));
      CHECK(precision(mab, b));
    }
    if (precision(a, b) && precision(b, a)) CHECK(alphaEq(a, b));
    const CanonPtr& c = univ[pick(rng)];
    if (precision(a, b) && precision(b, c)) CHECK(precision(a, c));
    // Associativity where everything is defined.
    if (mab) {
      CanonPtr l = meet(mab, c);
      CanonPtr bc = meet(b, c);
      CanonPtr r = bc ? meet(a, bc) : nullptr;
      if (l && r) CHECK(alphaEq(l, r));
    }
    // Greatest lower bound: any common lower bound is below the meet.
    if (precision(c, a) && precision(c, b)) {
      REQUIRE(mab);
      CHECK(precision(c, mab));
    }
  }
}

TEST_CASE("oracle agreement at depth 2: consistency is concretization overlap") {
  auto univ = oracle::enumGradual(1);
  // Index every static member reachable at depth <= 2.
  std::map<std::string, int> ids;
  for (const auto& u : oracle::enumStatic(2)) {
    std::string k = oracle::key(u);
    if (!ids.count(k)) ids.emplace(k, static_cast<int>(ids.size()));
  }
  auto bitsetOf = [&](const CanonPtr& u) {
    std::vector<std::uint64_t> bits((ids.size() + 63) / 64, 0);
    for (const auto& m : oracle::concretizeBounded(u, 2)) {
      auto it = ids.find(oracle::key(m));
      REQUIRE(it != ids.end());
      bits[it->second / 64] |= 1ull << (it->second % 64);
    }
    return bits;
  };
  std::vector<std::vector<std::uint64_t>> sets;
  sets.reserve(univ.size());
  for (const auto& u : univ) sets.push_back(bitsetOf(u));
  for (std::size_t i = 0; i < univ.size(); ++i)
    for (std::size_t j = 0; j < univ.size(); ++j) {
      bool overlap = false, subset = true;
      for (std::size_t w = 0; w < sets[i].size(); ++w) {
        if (sets[i][w] & sets[j][w]) overlap = true;
        if (sets[i][w] & ~sets[j][w]) subset = false;
      }
      INFO(oracle::key(univ[i]) << "  vs  " << oracle::key(univ[j]));
      CHECK(consistent(univ[i], univ[j]) == overlap);
      CHECK(precision(univ[i], univ[j]) == subset);
    }
}

TEST_CASE("abstraction soundness and optimality on sampled sets") {
  auto univ = oracle::enumGradual(1);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, univ.size() - 1);
  for (int i = 0; i < 300; ++i) {
    const CanonPtr& u = univ[pick(rng)];
    auto g = oracle::concretizeBounded(u, 2);
    REQUIRE_FALSE(g.empty());
    // Random non-empty subset.
    std::vector<CanonPtr> S;
    std::uniform_int_distribution<std::size_t> m(0, g.size() - 1);
    std::size_t count = 1 + m(rng) % std::min<std::size_t>(g.size(), 6);
    for (std::size_t k = 0; k < count; ++k) S.push_back(g[m(rng)]);
    CanonPtr a = oracle::abstractSet(S);
    // Optimality: the abstraction stays below u.
    CHECK(precision(a, u));
    // Soundness: every member is re-covered by concretizing the abstraction.
    std::set<std::string> cover;
    for (const auto& w : oracle::concretizeBounded(a, 3)) cover.insert(oracle::key(w));
    for (const auto& s : S) CHECK(cover.count(oracle::key(s)));
  }
}
