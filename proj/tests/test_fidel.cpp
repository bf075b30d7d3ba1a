#include <doctest.h>

#include "fsv/fidel.hpp"

using namespace fsv;

namespace {

// product of two chains: a small distributive lattice that is not a chain
Algebra grid(std::size_t m, std::size_t n) {
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      carrier.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
  auto id = [&](std::size_t i, std::size_t j) { return static_cast<uint32_t>(i * n + j); };
  std::vector<std::pair<uint32_t, uint32_t>> leq;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i + 1 < m) leq.emplace_back(id(i, j), id(i + 1, j));
      if (j + 1 < n) leq.emplace_back(id(i, j), id(i, j + 1));
    }
  auto built = build_algebra_from_order(std::move(carrier), leq, std::nullopt);
  REQUIRE(built.ok());
  return *built.algebra;
}

std::vector<Element> set_of(const Algebra& a, std::initializer_list<uint32_t> idx) {
  std::vector<Element> out;
  for (uint32_t i : idx) out.push_back(a.element(i));
  return out;
}

}  // namespace

TEST_CASE("saturation of the three-element chain") {
  Algebra a = chain(3);
  FidelStructure s = saturate(a);
  CHECK(s.neg_candidates(a.element(0)) == set_of(a, {2}));
  CHECK(s.neg_candidates(a.element(1)) == set_of(a, {2}));
  CHECK(s.neg_candidates(a.element(2)) == set_of(a, {0, 1, 2}));
  CHECK(validate_structure(s).ok());
}

TEST_CASE("saturation of the one-element algebra") {
  Algebra a = chain(1);
  FidelStructure s = saturate(a);
  CHECK(s.neg_candidates(a.element(0)) == set_of(a, {0}));
  CHECK(validate_structure(s).ok());
}

TEST_CASE("saturation of the four-element Boolean algebra at an atom") {
  Algebra b = boolean4();
  FidelStructure s = saturate(b);
  // the complement q and top join p up to top
  CHECK(s.neg_candidates(b.element(1)) == set_of(b, {2, 3}));
  CHECK(validate_structure(s).ok());
}

TEST_CASE("families missing a complementing candidate violate condition (i)") {
  Algebra a = chain(3);
  FidelStructure s = FidelStructure::from_sets(
      a, {{a.element(2)}, {a.element(1)}, {a.element(0), a.element(1), a.element(2)}});
  ValidationReport report = validate_structure(s);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().law == "condition (i)");
  CHECK(report.violations.front().witness == "(x=1/2)");
}

TEST_CASE("families with no value below x at the second level violate condition (ii)") {
  Algebra a = chain(3);
  FidelStructure s =
      FidelStructure::from_sets(a, {{a.element(2)}, {a.element(2)}, {a.element(2)}});
  ValidationReport report = validate_structure(s);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations)
    found |= v.law == "condition (ii)" && v.witness == "(x=0, x'=1)";
  CHECK(found);
}

TEST_CASE("every structure embeds in its saturation") {
  Algebra a = chain(3);
  FidelStructure m3 = saturate(a);
  std::vector<Element> identity{a.element(0), a.element(1), a.element(2)};
  CHECK(is_substructure(m3, m3, identity));

  FidelStructure smaller =
      FidelStructure::from_sets(a, {{a.element(2)}, {a.element(2)}, {a.element(0)}});
  CHECK(validate_structure(smaller).ok());
  CHECK(is_substructure(smaller, m3, identity));
}

TEST_CASE("two-element classical structure embeds into the saturated chain") {
  Algebra two = chain(2);
  Algebra three = chain(3);
  FidelStructure sub = FidelStructure::from_sets(two, {{two.element(1)}, {two.element(0)}});
  FidelStructure m3 = saturate(three);
  std::vector<Element> emb{three.element(0), three.element(2)};
  CHECK(is_substructure(sub, m3, emb));
}

TEST_CASE("substructure fails when a candidate set is not included") {
  Algebra a = chain(2);
  FidelStructure big = saturate(a);  // N_1 = {0, 1}
  FidelStructure classical = FidelStructure::from_sets(a, {{a.element(1)}, {a.element(0)}});
  std::vector<Element> identity{a.element(0), a.element(1)};
  CHECK(is_substructure(classical, big, identity));
  // N_1 = {0, 1} is not included in {0}
  CHECK_FALSE(is_substructure(big, classical, identity));
}

TEST_CASE("standard policy admissibility") {
  CHECK(admits_standard_policy(saturate(chain(3))));
  for (const Algebra& a : {chain(2), chain(3), chain(4), boolean4(), h3_star()})
    CHECK(admits_standard_policy(saturate(a)));
  Algebra two = chain(2);
  FidelStructure s = FidelStructure::from_sets(two, {{two.element(1)}, {two.element(1)}});
  CHECK_FALSE(admits_standard_policy(s));
  FidelStructure classical = FidelStructure::from_sets(two, {{two.element(1)}, {two.element(0)}});
  CHECK_FALSE(admits_standard_policy(classical));
}

TEST_CASE("saturation is well-formed over small distributive lattices") {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 3}}) {
    Algebra g = grid(m, n);
    CHECK(validate_algebra(g).ok());
    FidelStructure s = saturate(g);
    CHECK(validate_structure(s).ok());
    CHECK(admits_standard_policy(s));
    std::vector<Element> identity;
    for (uint32_t i = 0; i < g.size(); ++i) identity.push_back(g.element(i));
    CHECK(is_substructure(s, s, identity));
  }
}

TEST_CASE("saturation stays well-formed on random meet-join closed sublattices") {
  // random subsets of the 8-element Boolean algebra, closed under meet/join:
  // small distributive lattices beyond the chains and grids
  std::vector<std::pair<uint32_t, uint32_t>> cube_leq;
  for (uint32_t a = 0; a < 8; ++a)
    for (uint32_t b = 0; b < 8; ++b)
      if ((a & b) == a) cube_leq.emplace_back(a, b);
  uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<uint32_t>(state >> 33);
  };
  for (int trial = 0; trial < 20; ++trial) {
    // pick a random seed subset, then close it
    std::vector<bool> in(8, false);
    in[7] = true;  // keep the top
    for (int k = 0; k < 3; ++k) in[next() % 8] = true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (uint32_t a = 0; a < 8; ++a)
        for (uint32_t b = 0; b < 8; ++b)
          if (in[a] && in[b]) {
            if (!in[a & b]) in[a & b] = changed = true;
            if (!in[a | b]) in[a | b] = changed = true;
          }
    }
    std::vector<uint32_t> members;
    for (uint32_t a = 0; a < 8; ++a)
      if (in[a]) members.push_back(a);
    std::vector<std::string> carrier;
    for (uint32_t m : members) carrier.push_back("e" + std::to_string(m));
    std::vector<std::pair<uint32_t, uint32_t>> leq;
    for (uint32_t i = 0; i < members.size(); ++i)
      for (uint32_t j = 0; j < members.size(); ++j)
        if ((members[i] & members[j]) == members[i]) leq.emplace_back(i, j);
    auto built = build_algebra_from_order(std::move(carrier), leq, std::nullopt);
    REQUIRE(built.ok());
    FidelStructure s = saturate(*built.algebra);
    CHECK(validate_structure(s).ok());
    CHECK(admits_standard_policy(s));
  }
}

TEST_CASE("foreign or out-of-range elements are rejected") {
  Algebra a = chain(2);
  Algebra other = chain(2);
  CHECK_THROWS_AS(FidelStructure::from_sets(a, {{other.element(0)}, {a.element(1)}}),
                  UnknownElement);
  CHECK_THROWS_AS(FidelStructure::from_sets(a, {{a.element(0)}}), UnknownElement);
  CHECK_THROWS_AS(FidelStructure::from_masks(a, {0b100, 0b01}), UnknownElement);
}
