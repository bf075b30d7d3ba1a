#include <doctest.h>

#include <cmath>
#include <set>

#include "fsv/evaluator.hpp"
#include "fsv/names.hpp"

using namespace fsv;

namespace {

std::vector<Hf> hf_sets_up_to_depth(int depth) {
  std::vector<Hf> level{Hf::empty()};
  for (int d = 0; d < depth; ++d) {
    std::vector<Hf> next;
    const std::size_t n = level.size();
    for (uint32_t bits = 0; bits < (1u << n); ++bits) {
      Hf h;
      for (std::size_t i = 0; i < n; ++i)
        if (bits & (1u << i)) h.elems.push_back(level[i]);
      h.canonicalize();
      next.push_back(std::move(h));
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace

TEST_CASE("the empty name sits at rank 1") {
  NameStore store(chain(3));
  CHECK(store.rank(store.empty_name()) == 1);
  CHECK(store.entries(store.empty_name()).empty());
  CHECK(store.make_name({}) == store.empty_name());
}

TEST_CASE("names intern by their entry set") {
  Algebra a = chain(3);
  NameStore store(a);
  NameId e = store.empty_name();
  NameId u = store.make_name({{e, a.element(1)}});
  NameId v = store.make_name({{e, a.element(2)}});
  CHECK(u != v);
  CHECK(store.rank(u) == 2);
  CHECK(store.rank(v) == 2);

  NameId pair1 = store.make_name({{u, a.element(0)}, {v, a.element(2)}});
  NameId pair2 = store.make_name({{v, a.element(2)}, {u, a.element(0)}});
  CHECK(pair1 == pair2);
  CHECK(store.rank(pair1) == 3);

  CHECK_THROWS_AS(store.make_name({{e, a.element(0)}, {e, a.element(1)}}), Error);
  Algebra foreign = chain(3);
  CHECK_THROWS_AS(store.make_name({{e, foreign.element(0)}}), MixedAlgebras);
}

TEST_CASE("universe counts follow the closed-form recurrence") {
  SUBCASE("three-element algebra") {
    NameStore store(chain(3));
    CHECK(store.universe(1).size() == 1);
    CHECK(store.universe(2).size() == 4);
    CHECK(store.universe(3).size() == 256);
    auto counts = store.rank_counts(3);
    CHECK(counts == std::vector<std::size_t>{1, 3, 252});
    // |V_<=k| = (|A|+1)^{|V_<=k-1|}
    CHECK(store.universe(2).size() == std::pow(4, store.universe(1).size()));
    CHECK(store.universe(3).size() == std::pow(4, store.universe(2).size()));
  }
  SUBCASE("two-element algebra") {
    NameStore store(chain(2));
    CHECK(store.universe(2).size() == 3);
    CHECK(store.universe(3).size() == 27);
    CHECK(store.universe(3).size() == std::pow(3, store.universe(2).size()));
  }
}

TEST_CASE("the ceiling guards the rank-4 explosion") {
  NameStore store(chain(3));
  CHECK_THROWS_AS(store.universe(4), UniverseTooLarge);
  NameStore tight(chain(3), 100);
  CHECK_THROWS_AS(tight.universe(3), UniverseTooLarge);
}

TEST_CASE("universe enumeration is stable across stores") {
  NameStore a(chain(3));
  NameStore b(chain(3));
  const auto& ua = a.universe(3);
  const auto& ub = b.universe(3);
  REQUIRE(ua.size() == ub.size());
  for (std::size_t i = 0; i < ua.size(); ++i) CHECK(a.to_string(ua[i]) == b.to_string(ub[i]));
  // ranks never decrease along the enumeration
  for (std::size_t i = 1; i < ua.size(); ++i) CHECK(a.rank(ua[i - 1]) <= a.rank(ua[i]));
}

TEST_CASE("rank is strictly above every child rank") {
  NameStore store(chain(3));
  for (NameId id : store.universe(3))
    for (const NameEntry& e : store.entries(id)) CHECK(store.rank(id) > store.rank(e.child));
}

TEST_CASE("hat embedding sends finite sets to all-top names") {
  Algebra a = chain(3);
  NameStore store(a);
  CHECK(store.hat_embed(Hf::empty()) == store.empty_name());

  Hf singleton;
  singleton.elems.push_back(Hf::empty());
  NameId s = store.hat_embed(singleton);
  REQUIRE(store.entries(s).size() == 1);
  CHECK(store.entries(s)[0].child == store.empty_name());
  CHECK(store.entries(s)[0].value == a.top().index);

  NameId two = store.hat_embed(Hf::nat(2));
  CHECK(store.rank(two) == 3);
  CHECK(store.entries(two).size() == 2);
  for (const NameEntry& e : store.entries(two)) CHECK(e.value == a.top().index);
}

TEST_CASE("hat embedding is injective up to depth 3") {
  NameStore store(chain(3));
  auto sets = hf_sets_up_to_depth(3);
  CHECK(sets.size() == 16);
  std::set<NameId> ids;
  for (const Hf& h : sets) ids.insert(store.hat_embed(h));
  CHECK(ids.size() == sets.size());
}

TEST_CASE("mixtures blend weighted memberships") {
  Algebra a = chain(3);
  FidelStructure m3 = saturate(a);
  NameStore store(a);
  EvalContext ctx(m3, store, NegationPolicy::StandardLeibniz, 2);
  auto membership = [&](NameId x, NameId u) { return ctx.truth_membership(x, u); };

  NameId e = store.empty_name();
  NameId u = store.make_name({{e, a.element(1)}});
  NameId v = store.make_name({{e, a.element(2)}});

  SUBCASE("unit mixture bumps values to memberships") {
    std::vector<std::pair<Element, NameId>> fam{{a.top(), u}};
    NameId mix = mixture(store, fam, membership);
    REQUIRE(store.entries(mix).size() == 1);
    CHECK(store.entries(mix)[0].value == ctx.truth_membership(e, u).index);
    for (const NameEntry& entry : store.entries(u))
      CHECK(a.leq(a.element(entry.value), ctx.truth_membership(entry.child, mix)));
  }
  SUBCASE("the weighted pair of the rank-2 names joins to top") {
    std::vector<std::pair<Element, NameId>> fam{{a.element(1), u}, {a.element(2), v}};
    NameId mix = mixture(store, fam, membership);
    REQUIRE(store.entries(mix).size() == 1);
    CHECK(store.entries(mix)[0].child == e);
    CHECK(store.entries(mix)[0].value == a.top().index);
  }
  SUBCASE("zero weights flatten everything") {
    std::vector<std::pair<Element, NameId>> fam{{a.bottom(), u}, {a.bottom(), v}};
    NameId mix = mixture(store, fam, membership);
    for (const NameEntry& entry : store.entries(mix)) CHECK(entry.value == a.bottom().index);
  }
  SUBCASE("empty families are rejected") {
    CHECK_THROWS_AS(mixture(store, {}, membership), Error);
  }
}

TEST_CASE("universal names cover the enumerated universe at top") {
  Algebra a = chain(3);
  FidelStructure m3 = saturate(a);
  NameStore store(a);
  NameId u1 = store.universal_name(1);
  REQUIRE(store.entries(u1).size() == 1);
  CHECK(store.entries(u1)[0].child == store.empty_name());
  CHECK(store.entries(u1)[0].value == a.top().index);
  CHECK(store.rank(u1) == 2);

  NameId u2 = store.universal_name(2);
  CHECK(store.entries(u2).size() == 4);
  CHECK(store.rank(u2) == 3);
  EvalContext ctx(m3, store, NegationPolicy::StandardLeibniz, 2);
  for (NameId x : store.universe(2)) CHECK(ctx.truth_membership(x, u2) == a.top());
}

TEST_CASE("name literals print in input syntax") {
  Algebra a = chain(3);
  NameStore store(a);
  NameId e = store.empty_name();
  CHECK(store.to_string(e) == "{}");
  NameId u = store.make_name({{e, a.element(1)}});
  CHECK(store.to_string(u) == "{{}: 1/2}");
  NameId nest = store.make_name({{e, a.element(2)}, {u, a.element(0)}});
  CHECK(store.to_string(nest) == "{{}: 1, {{}: 1/2}: 0}");
}
