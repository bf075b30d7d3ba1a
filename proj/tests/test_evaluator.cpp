#include <doctest.h>

#include <thread>

#include "fsv/evaluator.hpp"
#include "fsv/zfcheck.hpp"
#include "test_util.hpp"

using namespace fsv;

namespace {

struct M3Fixture {
  Algebra alg = chain(3);
  FidelStructure s = saturate(alg);
  NameStore store{alg};
  EvalContext ctx{s, store, NegationPolicy::StandardLeibniz, 2};

  NameId e = store.empty_name();
  NameId u = store.make_name({{e, alg.element(1)}});  // {<{}, 1/2>}
  NameId v = store.make_name({{e, alg.element(2)}});  // {<{}, 1>}
};

struct H3Fixture {
  Algebra alg = h3_star();
  FidelStructure s = saturate(alg);
  NameStore store{alg};
  EvalContext ctx{s, store, NegationPolicy::AlgebraicOp, 2};

  NameId e = store.empty_name();
  NameId u = store.make_name({{e, alg.element(1)}});
  NameId v = store.make_name({{e, alg.element(2)}});
};

FormulaPtr member_of(NameId w, const std::string& var) {
  return f_member(Term::constant(w), Term::variable(var));
}

}  // namespace

TEST_CASE("equality of the two rank-2 names is 1/2") {
  M3Fixture fx;
  CHECK(fx.ctx.truth_equality(fx.u, fx.v) == fx.alg.element(1));
  CHECK(fx.ctx.truth_equality(fx.v, fx.u) == fx.alg.element(1));
}

TEST_CASE("equality is reflexive at top and membership in the empty name is bottom") {
  M3Fixture fx;
  for (NameId id : fx.store.universe(2)) {
    CHECK(fx.ctx.truth_equality(id, id) == fx.alg.top());
    CHECK(fx.ctx.truth_membership(id, fx.e) == fx.alg.bottom());
  }
}

TEST_CASE("the memoized evaluator matches the direct recursion") {
  SUBCASE("exhaustive at rank 2 on several structures") {
    for (Algebra alg : {chain(3), chain(4), h3_star()}) {
      FidelStructure s = saturate(alg);
      NameStore store(alg);
      EvalContext ctx(s, store, NegationPolicy::StandardLeibniz, 2);
      const auto univ = store.universe(2);
      for (NameId a : univ)
        for (NameId b : univ) {
          CHECK(ctx.truth_membership(a, b).index == testutil::ref_member(store, a, b));
          CHECK(ctx.truth_equality(a, b).index == testutil::ref_equal(store, a, b));
        }
    }
  }
  SUBCASE("sampled at rank 3") {
    M3Fixture fx;
    const auto univ = fx.store.universe(3);
    uint64_t state = 42;
    auto next = [&] {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      return (state >> 33) % univ.size();
    };
    for (int i = 0; i < 300; ++i) {
      NameId a = univ[next()];
      NameId b = univ[next()];
      CHECK(fx.ctx.truth_membership(a, b).index == testutil::ref_member(fx.store, a, b));
      CHECK(fx.ctx.truth_equality(a, b).index == testutil::ref_equal(fx.store, a, b));
    }
  }
}

TEST_CASE("membership formulas reproduce the rank-2 example values") {
  M3Fixture fx;
  FormulaPtr psi = member_of(fx.e, "x");  // {} in x
  CHECK(fx.ctx.eval(psi, Env{}.extended("x", fx.v)) == fx.alg.element(2));
  CHECK(fx.ctx.eval(psi, Env{}.extended("x", fx.u)) == fx.alg.element(1));

  FormulaPtr refl = f_implies(f_equal(Term::constant(fx.u), Term::constant(fx.u)),
                              f_equal(Term::constant(fx.u), Term::constant(fx.u)));
  CHECK(fx.ctx.eval(refl) == fx.alg.top());

  FormulaPtr ex = f_exists("x", f_equal(Term::variable("x"), Term::constant(fx.e)));
  CHECK(fx.ctx.eval(ex) == fx.alg.top());
}

TEST_CASE("standard negation keys on the parity of the leading stack") {
  M3Fixture fx;
  FormulaPtr psi_u = f_member(Term::constant(fx.e), Term::constant(fx.u));
  FormulaPtr psi_v = f_member(Term::constant(fx.e), Term::constant(fx.v));
  CHECK(fx.ctx.eval(f_not(psi_u)) == fx.alg.top());
  CHECK(fx.ctx.eval(f_not(psi_v)) == fx.alg.top());
  CHECK(fx.ctx.eval(f_not(f_not(psi_u))) == fx.ctx.eval(psi_u));
  CHECK(fx.ctx.eval(f_not(f_not(f_not(psi_u)))) == fx.alg.top());
  CHECK(fx.ctx.eval(f_not(f_not(f_not(f_not(psi_u))))) == fx.ctx.eval(psi_u));
  // negation of a connective- or quantifier-rooted body counts as parity one
  FormulaPtr conn = f_and(psi_u, psi_v);
  CHECK(fx.ctx.eval(f_not(conn)) == fx.alg.top());
  CHECK(fx.ctx.negation_constraint_violations() == 0);
}

TEST_CASE("algebraic negation applies the unary table") {
  H3Fixture fx;
  FormulaPtr psi_u = f_member(Term::constant(fx.e), Term::constant(fx.u));
  FormulaPtr psi_v = f_member(Term::constant(fx.e), Term::constant(fx.v));
  CHECK(fx.ctx.eval(psi_u) == fx.alg.element(1));
  CHECK(fx.ctx.eval(psi_v) == fx.alg.element(2));
  CHECK(fx.ctx.eval(f_not(psi_u)) == fx.alg.element(2));
  CHECK(fx.ctx.eval(f_not(psi_v)) == fx.alg.element(0));
  CHECK(fx.ctx.negation_constraint_violations() == 0);
}

TEST_CASE("policy preconditions are enforced") {
  Algebra two = chain(2);
  FidelStructure classical = FidelStructure::from_sets(two, {{two.element(1)}, {two.element(0)}});
  NameStore store(two);
  CHECK_THROWS_AS(EvalContext(classical, store, NegationPolicy::StandardLeibniz, 1),
                  PolicyInadmissible);

  Algebra three = chain(3);
  FidelStructure m3 = saturate(three);
  NameStore store3(three);
  CHECK_THROWS_AS(EvalContext(m3, store3, NegationPolicy::AlgebraicOp, 1), PolicyInadmissible);
}

TEST_CASE("structures failing their conditions refuse to enter the evaluator") {
  Algebra a = chain(3);
  FidelStructure bad =
      FidelStructure::from_sets(a, {{a.element(2)}, {a.element(1)}, {a.element(2)}});
  NameStore store(a);
  CHECK_THROWS_AS(EvalContext(bad, store, NegationPolicy::StandardLeibniz, 1), InvalidStructure);
}

TEST_CASE("the admissibility audit flags escaped negation values") {
  Algebra base = chain(4);
  auto built = build_algebra_from_tables(base.carrier(), base.meet_table(), base.join_table(),
                                         base.imp_table(), OpTable{3, 2, 3, 0});
  REQUIRE(built.ok());
  Algebra alg = *built.algebra;
  FidelStructure s = saturate(alg);
  NameStore store(alg);
  EvalContext ctx(s, store, NegationPolicy::AlgebraicOp, 2);
  NameId u = store.make_name({{store.empty_name(), alg.element(1)}});
  FormulaPtr psi = f_member(Term::constant(store.empty_name()), Term::constant(u));
  // neg(1/3) = 2/3 is not in the saturated N at 1/3 = {1}
  CHECK(ctx.eval(f_not(psi)) == alg.element(2));
  CHECK(ctx.negation_constraint_violations() == 1);
  REQUIRE(ctx.first_violation().has_value());
}

TEST_CASE("bounded quantifiers follow the domain clause") {
  M3Fixture fx;
  FormulaPtr anything = f_member(Term::variable("y"), Term::constant(fx.u));
  CHECK(fx.ctx.bounded_quantifier_eval(Formula::Kind::BoundedExists, fx.e, "y", anything, Env{}) ==
        fx.alg.bottom());
  CHECK(fx.ctx.bounded_quantifier_eval(Formula::Kind::BoundedForall, fx.e, "y", anything, Env{}) ==
        fx.alg.top());

  // forall y in v (y in u) = 1 -> ||{} in u|| = 1/2
  FormulaPtr body = f_member(Term::variable("y"), Term::constant(fx.u));
  CHECK(fx.ctx.bounded_quantifier_eval(Formula::Kind::BoundedForall, fx.v, "y", body, Env{}) ==
        fx.alg.element(1));
}

TEST_CASE("bounded quantifiers agree with their unfolded forms at sufficient rank") {
  M3Fixture fx;
  auto templates = generate_templates(1, 2, fx.ctx);
  Term xvar = Term::variable("x");
  for (const FormulaPtr& phi : templates) {
    FormulaPtr body = rename_free_var(phi, "x", "y");
    for (NameId u : fx.store.universe(2)) {
      Term cu = Term::constant(u);
      FormulaPtr bounded_e = f_bexists("y", cu, body);
      FormulaPtr unfolded_e =
          f_exists("y", f_and(f_member(Term::variable("y"), cu), body));
      CHECK(fx.ctx.eval(bounded_e) == fx.ctx.eval(unfolded_e));
      FormulaPtr bounded_a = f_bforall("y", cu, body);
      FormulaPtr unfolded_a =
          f_forall("y", f_implies(f_member(Term::variable("y"), cu), body));
      CHECK(fx.ctx.eval(bounded_a) == fx.ctx.eval(unfolded_a));
    }
  }
}

TEST_CASE("the five technical identities hold") {
  M3Fixture fx;
  const Algebra& a = fx.alg;
  const auto univ = fx.store.universe(2);
  for (NameId u : univ) {
    CHECK(fx.ctx.truth_equality(u, u) == a.top());  // (i)
    for (const NameEntry& e : fx.store.entries(u))  // (ii)
      CHECK(a.leq(a.element(e.value), fx.ctx.truth_membership(e.child, u)));
    for (NameId v : univ) {
      CHECK(fx.ctx.truth_equality(u, v) == fx.ctx.truth_equality(v, u));  // (iii)
      for (NameId w : univ) {
        Element uv = fx.ctx.truth_equality(u, v);
        Element vw = fx.ctx.truth_equality(v, w);
        Element uw = fx.ctx.truth_equality(u, w);
        CHECK(a.leq(a.meet(uv, vw), uw));  // (iv)
        Element u_in_w = fx.ctx.truth_membership(u, w);
        Element v_in_w = fx.ctx.truth_membership(v, w);
        CHECK(a.leq(a.meet(uv, u_in_w), v_in_w));  // (v)
      }
    }
  }
}

TEST_CASE("rank-bounded quantifiers are monotone in the bound") {
  Algebra alg = chain(3);
  FidelStructure s = saturate(alg);
  NameStore store(alg);
  EvalContext ctx1(s, store, NegationPolicy::StandardLeibniz, 1);
  EvalContext ctx2(s, store, NegationPolicy::StandardLeibniz, 2);
  EvalContext ctx3(s, store, NegationPolicy::StandardLeibniz, 3);

  auto templates = generate_templates(1, 1, ctx1);
  for (const FormulaPtr& phi : templates) {
    FormulaPtr ex = f_exists("x", phi);
    FormulaPtr fa = f_forall("x", phi);
    CHECK(alg.leq(ctx1.eval(ex), ctx2.eval(ex)));
    CHECK(alg.leq(ctx2.eval(fa), ctx1.eval(fa)));
  }
  // sampled between ranks 2 and 3
  auto t2 = generate_templates(1, 2, ctx2);
  for (std::size_t i = 0; i < t2.size(); i += 17) {
    FormulaPtr ex = f_exists("x", t2[i]);
    FormulaPtr fa = f_forall("x", t2[i]);
    CHECK(alg.leq(ctx2.eval(ex), ctx3.eval(ex)));
    CHECK(alg.leq(ctx3.eval(fa), ctx2.eval(fa)));
  }
}

TEST_CASE("negation-free evaluation is policy-independent") {
  Algebra alg = h3_star();
  FidelStructure s = saturate(alg);
  NameStore store(alg);
  EvalContext standard(s, store, NegationPolicy::StandardLeibniz, 2);
  EvalContext algebraic(s, store, NegationPolicy::AlgebraicOp, 2);
  auto templates = generate_templates(1, 2, standard);
  const auto univ = store.universe(2);
  for (const FormulaPtr& phi : templates) {
    if (testutil::has_negation(phi)) continue;
    for (NameId u : univ) {
      Element lhs = standard.eval(phi, Env{}.extended("x", u));
      Element rhs = algebraic.eval(phi, Env{}.extended("x", u));
      CHECK(lhs.index == rhs.index);
    }
  }
}

TEST_CASE("restricted negation-free values are absolute for substructures") {
  Algebra two = chain(2);
  Algebra three = chain(3);
  FidelStructure sub = saturate(two);
  FidelStructure sup = saturate(three);
  NameStore sub_store(two);
  NameStore sup_store(three);
  EvalContext sub_ctx(sub, sub_store, NegationPolicy::StandardLeibniz, 2);
  EvalContext sup_ctx(sup, sup_store, NegationPolicy::StandardLeibniz, 2);
  std::vector<Element> emb{three.element(0), three.element(2)};
  REQUIRE(is_subalgebra(two, three, emb));

  const auto univ = sub_store.universe(2);
  for (NameId u : univ) {
    NameId tu = testutil::transport_name(sub_store, sup_store, emb, u);
    for (NameId v : univ) {
      NameId tv = testutil::transport_name(sub_store, sup_store, emb, v);
      CHECK(emb[sub_ctx.truth_membership(u, v).index] == sup_ctx.truth_membership(tu, tv));
      CHECK(emb[sub_ctx.truth_equality(u, v).index] == sup_ctx.truth_equality(tu, tv));
      FormulaPtr all_in = f_bforall("y", Term::constant(u),
                                    f_member(Term::variable("y"), Term::constant(v)));
      FormulaPtr t_all_in = f_bforall("y", Term::constant(tu),
                                      f_member(Term::variable("y"), Term::constant(tv)));
      CHECK(emb[sub_ctx.eval(all_in).index] == sup_ctx.eval(t_all_in));
      FormulaPtr some_in = f_bexists("y", Term::constant(u),
                                     f_member(Term::variable("y"), Term::constant(v)));
      FormulaPtr t_some_in = f_bexists("y", Term::constant(tu),
                                       f_member(Term::variable("y"), Term::constant(tv)));
      CHECK(emb[sub_ctx.eval(some_in).index] == sup_ctx.eval(t_some_in));
    }
  }
}

TEST_CASE("hat names reflect real membership and equality") {
  M3Fixture fx;
  std::vector<Hf> level{Hf::empty()};
  for (int d = 0; d < 3; ++d) {
    std::vector<Hf> next;
    for (uint32_t bits = 0; bits < (1u << level.size()); ++bits) {
      Hf h;
      for (std::size_t i = 0; i < level.size(); ++i)
        if (bits & (1u << i)) h.elems.push_back(level[i]);
      h.canonicalize();
      next.push_back(std::move(h));
    }
    level = std::move(next);
  }
  REQUIRE(level.size() == 16);

  for (const Hf& hu : level) {
    NameId nu = fx.store.hat_embed(hu);
    for (const Hf& hv : level) {
      NameId nv = fx.store.hat_embed(hv);
      CHECK((fx.ctx.truth_membership(nu, nv) == fx.alg.top()) == hv.contains(hu));
      CHECK((fx.ctx.truth_equality(nu, nv) == fx.alg.top()) == (hu == hv));
    }
  }

  // || u in hat(v) || = join over members of || u ~ hat(x) ||
  for (const Hf& hv : level) {
    NameId nv = fx.store.hat_embed(hv);
    for (NameId u : fx.store.universe(2)) {
      Element joined = fx.alg.bottom();
      for (const Hf& hx : hv.elems)
        joined = fx.alg.join(joined, fx.ctx.truth_equality(u, fx.store.hat_embed(hx)));
      CHECK(fx.ctx.truth_membership(u, nv) == joined);
    }
  }
}

TEST_CASE("memoization does not affect results") {
  Algebra alg = chain(3);
  FidelStructure s = saturate(alg);
  NameStore store(alg);
  EvalContext cold(s, store, NegationPolicy::StandardLeibniz, 2);
  EvalContext warm(s, store, NegationPolicy::StandardLeibniz, 2);
  const auto univ = store.universe(2);
  // warm in reverse order first
  for (auto it = univ.rbegin(); it != univ.rend(); ++it)
    for (auto jt = univ.rbegin(); jt != univ.rend(); ++jt) warm.truth_equality(*it, *jt);
  for (NameId a : univ)
    for (NameId b : univ) {
      CHECK(cold.truth_equality(a, b) == warm.truth_equality(a, b));
      CHECK(cold.truth_membership(a, b) == warm.truth_membership(a, b));
    }
  warm.reset_memo();
  for (NameId a : univ)
    for (NameId b : univ) CHECK(cold.truth_equality(a, b) == warm.truth_equality(a, b));
}

TEST_CASE("the biconditional expands to both implications") {
  M3Fixture fx;
  FormulaPtr l = f_member(Term::constant(fx.e), Term::constant(fx.u));
  FormulaPtr r = f_member(Term::constant(fx.e), Term::constant(fx.v));
  Element via_iff = fx.ctx.eval(f_iff(l, r));
  Element manual = fx.alg.meet(fx.ctx.eval(f_implies(l, r)), fx.ctx.eval(f_implies(r, l)));
  CHECK(via_iff == manual);
}

TEST_CASE("open formulas raise a scope error") {
  M3Fixture fx;
  FormulaPtr open = f_member(Term::variable("z"), Term::constant(fx.u));
  CHECK_THROWS_AS(fx.ctx.eval(open), ScopeError);
}

TEST_CASE("concurrent top-level queries agree with the sequential values") {
  Algebra alg = chain(3);
  FidelStructure s = saturate(alg);
  NameStore store(alg);
  EvalContext ctx(s, store, NegationPolicy::StandardLeibniz, 3);
  const auto univ = store.universe(3);

  EvalContext reference(s, store, NegationPolicy::StandardLeibniz, 3);
  std::vector<uint32_t> expected;
  for (std::size_t i = 0; i < 64; ++i)
    expected.push_back(reference.truth_equality(univ[i * 3], univ[i * 5 % univ.size()]).index);

  std::vector<uint32_t> got(64);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < 64; i += 4)
        got[i] = ctx.truth_equality(univ[i * 3], univ[i * 5 % univ.size()]).index;
    });
  for (auto& w : workers) w.join();
  CHECK(got == expected);

  // concurrent interning of equal names lands on one id
  std::vector<NameId> made(8);
  std::vector<std::thread> makers;
  for (int t = 0; t < 8; ++t)
    makers.emplace_back([&, t] {
      made[t] = store.make_name({{store.empty_name(), alg.element(1)}});
    });
  for (auto& w : makers) w.join();
  for (NameId id : made) CHECK(id == made[0]);
}
