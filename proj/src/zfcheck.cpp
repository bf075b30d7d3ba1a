#include "fsv/zfcheck.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>

#include "fsv/frontend.hpp"

namespace fsv {

namespace {

uint64_t next_rand(uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::size_t rand_below(uint64_t& s, std::size_t n) {
  return static_cast<std::size_t>(next_rand(s) % n);
}

const std::string kFreeVar = "x";
const std::string kInnerVar = "y";

}  // namespace

std::vector<FormulaPtr> generate_templates(int depth, unsigned K, EvalContext& ctx) {
  std::vector<std::vector<FormulaPtr>> by_cost(depth + 1);
  std::unordered_set<std::string> seen;
  auto add = [&](int cost, FormulaPtr f) {
    if (seen.insert(pretty_print(f, ctx.store())).second) by_cost[cost].push_back(std::move(f));
  };

  Term x = Term::variable(kFreeVar);
  for (NameId p : ctx.store().universe(K)) {
    Term cp = Term::constant(p);
    add(0, f_member(cp, x));
    add(0, f_member(x, cp));
    add(0, f_equal(x, cp));
    add(0, f_equal(cp, x));
  }
  for (int c = 1; c <= depth; ++c) {
    for (const FormulaPtr& phi : by_cost[c - 1]) add(c, f_not(phi));
    for (const FormulaPtr& phi : by_cost[c - 1]) add(c, f_not(f_not(phi)));
    for (int l = 0; l < c; ++l) {
      int r = c - 1 - l;
      for (const FormulaPtr& phi : by_cost[l])
        for (const FormulaPtr& psi : by_cost[r]) {
          add(c, f_and(phi, psi));
          add(c, f_or(phi, psi));
          add(c, f_implies(phi, psi));
        }
    }
    for (const FormulaPtr& phi : by_cost[c - 1]) {
      FormulaPtr body = rename_free_var(phi, kFreeVar, kInnerVar);
      add(c, f_bexists(kInnerVar, x, body));
      add(c, f_bforall(kInnerVar, x, body));
    }
  }

  std::vector<FormulaPtr> out;
  for (auto& level : by_cost) out.insert(out.end(), level.begin(), level.end());
  return out;
}

std::vector<FormulaPtr> generate_binary_templates(int depth, unsigned K, EvalContext& ctx) {
  std::unordered_set<std::string> seen;
  std::vector<FormulaPtr> out;
  auto add = [&](FormulaPtr f) {
    if (seen.insert(pretty_print(f, ctx.store())).second) out.push_back(std::move(f));
  };

  Term x = Term::variable(kFreeVar);
  Term y = Term::variable(kInnerVar);
  std::vector<FormulaPtr> cross{f_member(x, y), f_member(y, x), f_equal(x, y)};
  std::vector<FormulaPtr> in_y;
  for (NameId p : ctx.store().universe(K)) {
    Term cp = Term::constant(p);
    in_y.push_back(f_member(cp, y));
    in_y.push_back(f_member(y, cp));
    in_y.push_back(f_equal(y, cp));
    in_y.push_back(f_equal(cp, y));
  }
  for (const FormulaPtr& f : cross) add(f);
  for (const FormulaPtr& f : in_y) add(f);
  for (const FormulaPtr& f : in_y) add(rename_free_var(f, kInnerVar, kFreeVar));
  if (depth >= 1) {
    for (const FormulaPtr& f : cross) add(f_not(f));
    for (const FormulaPtr& c : cross)
      for (const FormulaPtr& f : in_y) {
        add(f_and(c, f));
        add(f_or(c, f));
        add(f_implies(c, f));
      }
  }
  return out;
}

FormulaPtr random_template(EvalContext& ctx, unsigned K, int depth, uint64_t& rng_state) {
  const auto& univ = ctx.store().universe(K);
  auto atom = [&](const std::string& var) -> FormulaPtr {
    Term cp = Term::constant(univ[rand_below(rng_state, univ.size())]);
    Term tv = Term::variable(var);
    switch (rand_below(rng_state, 4)) {
      case 0:
        return f_member(cp, tv);
      case 1:
        return f_member(tv, cp);
      case 2:
        return f_equal(tv, cp);
      default:
        return f_equal(cp, tv);
    }
  };
  std::function<FormulaPtr(int, const std::string&)> gen =
      [&](int budget, const std::string& var) -> FormulaPtr {
    if (budget <= 0) return atom(var);
    switch (rand_below(rng_state, 7)) {
      case 0:
        return f_not(gen(budget - 1, var));
      case 1:
        return f_not(f_not(gen(budget - 1, var)));
      case 2:
      case 3:
      case 4: {
        int l = static_cast<int>(rand_below(rng_state, static_cast<std::size_t>(budget)));
        int r = budget - 1 - l;
        FormulaPtr a = gen(l, var);
        FormulaPtr b = gen(r, var);
        std::size_t op = rand_below(rng_state, 3);
        if (op == 0) return f_and(a, b);
        if (op == 1) return f_or(a, b);
        return f_implies(a, b);
      }
      case 5:
        return f_bexists(var + "'", Term::variable(var), gen(budget - 1, var + "'"));
      default:
        return f_bforall(var + "'", Term::variable(var), gen(budget - 1, var + "'"));
    }
  };
  return gen(depth, kFreeVar);
}

LeibnizResult check_leibniz(EvalContext& ctx, std::span<const FormulaPtr> templates, unsigned K) {
  const Algebra& alg = ctx.algebra();
  const auto univ = ctx.store().universe(K);  // copy: evaluation may extend the store
  LeibnizResult result;

  std::vector<std::vector<Element>> vals(templates.size());
  for (std::size_t t = 0; t < templates.size(); ++t) {
    vals[t].reserve(univ.size());
    for (NameId u : univ) vals[t].push_back(ctx.eval(templates[t], Env{}.extended(kFreeVar, u)));
  }

  for (std::size_t ui = 0; ui < univ.size(); ++ui) {
    for (std::size_t vi = 0; vi < univ.size(); ++vi) {
      Element eq = ctx.truth_equality(univ[ui], univ[vi]);
      for (std::size_t t = 0; t < templates.size(); ++t) {
        ++result.checked;
        Element pu = vals[t][ui];
        Element pv = vals[t][vi];
        if (!alg.leq(alg.meet(eq, pu), pv)) {
          result.valid = false;
          result.counterexample =
              LeibnizCounterexample{univ[ui], univ[vi], templates[t], eq, pu, pv};
          return result;
        }
      }
    }
  }
  return result;
}

LeibnizResult check_leibniz_sampled(EvalContext& ctx, unsigned K, int depth, std::size_t samples,
                                    uint64_t seed) {
  const Algebra& alg = ctx.algebra();
  const auto univ = ctx.store().universe(K);
  LeibnizResult result;
  result.seed = seed;
  uint64_t rng = seed;
  for (std::size_t i = 0; i < samples; ++i) {
    NameId u = univ[rand_below(rng, univ.size())];
    NameId v = univ[rand_below(rng, univ.size())];
    FormulaPtr phi = random_template(ctx, K, depth, rng);
    Element eq = ctx.truth_equality(u, v);
    Element pu = ctx.eval(phi, Env{}.extended(kFreeVar, u));
    Element pv = ctx.eval(phi, Env{}.extended(kFreeVar, v));
    ++result.checked;
    if (!alg.leq(alg.meet(eq, pu), pv)) {
      result.valid = false;
      result.counterexample = LeibnizCounterexample{u, v, phi, eq, pu, pv};
      return result;
    }
  }
  return result;
}

namespace {

constexpr Axiom kAxioms[] = {
    Axiom::Extensionality, Axiom::Pairing,    Axiom::Collection,
    Axiom::Powerset,       Axiom::Separation, Axiom::EmptySet,
    Axiom::Union,          Axiom::Infinity,   Axiom::Induction,
};

}  // namespace

std::span<const Axiom> all_axioms() { return kAxioms; }

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Extensionality:
      return "extensionality";
    case Axiom::Pairing:
      return "pairing";
    case Axiom::Collection:
      return "collection";
    case Axiom::Powerset:
      return "powerset";
    case Axiom::Separation:
      return "separation";
    case Axiom::EmptySet:
      return "empty-set";
    case Axiom::Union:
      return "union";
    case Axiom::Infinity:
      return "infinity";
    case Axiom::Induction:
      return "induction";
  }
  return "?";
}

std::optional<Axiom> axiom_by_name(std::string_view name) {
  for (Axiom a : kAxioms)
    if (name == axiom_name(a)) return a;
  return std::nullopt;
}

const char* AxiomCheckResult::verdict_name() const {
  switch (verdict) {
    case Verdict::Valid:
      return "valid";
    case Verdict::ValidUpToBound:
      return "valid-up-to-bound";
    case Verdict::Counterexample:
      return "counterexample";
  }
  return "?";
}

namespace {

struct Checker {
  EvalContext& ctx;
  unsigned K;
  const AxiomOptions& opts;
  AxiomCheckResult result;
  std::vector<NameId> univ;
  uint64_t rng;
  bool sampling;

  Checker(Axiom axiom, EvalContext& c, unsigned k, const AxiomOptions& o)
      : ctx(c), K(k), opts(o), rng(o.seed), sampling(o.samples > 0) {
    result.axiom = axiom_name(axiom);
    result.rank = K;
    result.policy = policy_name(ctx.policy());
    if (sampling) result.seed = opts.seed;
    univ = ctx.store().universe(K);
  }

  NameId draw() { return univ[rand_below(rng, univ.size())]; }

  // Visits the full product universe^arity, or `samples` random tuples when
  // sampling. fn returns false to stop.
  void tuples(unsigned arity, const std::function<bool(std::span<const NameId>)>& fn) {
    std::vector<NameId> tuple(arity);
    if (sampling) {
      for (std::size_t s = 0; s < opts.samples; ++s) {
        for (auto& t : tuple) t = draw();
        if (!fn(tuple)) return;
      }
      return;
    }
    std::vector<std::size_t> idx(arity, 0);
    while (true) {
      for (unsigned i = 0; i < arity; ++i) tuple[i] = univ[idx[i]];
      if (!fn(tuple)) return;
      std::size_t i = 0;
      while (i < arity && ++idx[i] == univ.size()) idx[i++] = 0;
      if (i == arity) break;
    }
  }

  void counterexample(FormulaPtr lhs_f, FormulaPtr rhs_f, Element lhs, Element rhs,
                      std::optional<NameId> u, std::optional<NameId> z, std::optional<NameId> w,
                      FormulaPtr phi) {
    result.verdict = AxiomCheckResult::Verdict::Counterexample;
    result.raw.lhs_formula = std::move(lhs_f);
    result.raw.rhs_formula = std::move(rhs_f);
    result.raw.lhs = lhs;
    result.raw.rhs = rhs;
    result.raw.u = u;
    result.raw.z = z;
    result.raw.w = w;
    result.raw.phi = phi;
    const Algebra& alg = ctx.algebra();
    auto& st = ctx.store();
    if (u) result.witness.emplace_back("u", st.to_string(*u));
    if (z) result.witness.emplace_back("z", st.to_string(*z));
    if (w) result.witness.emplace_back("w", st.to_string(*w));
    if (phi) result.witness.emplace_back("template", pretty_print(phi, st));
    result.values.emplace_back("lhs", alg.label(lhs));
    result.values.emplace_back("rhs", alg.label(rhs));
  }
};

}  // namespace

AxiomCheckResult check_axiom(Axiom axiom, EvalContext& ctx, unsigned K, const AxiomOptions& opts) {
  Checker ck(axiom, ctx, K, opts);
  const Algebra& alg = ctx.algebra();
  NameStore& store = ctx.store();
  Element top = alg.top();
  Term x = Term::variable(kFreeVar);

  auto eval_at = [&](const FormulaPtr& f, NameId u) {
    return ctx.eval(f, Env{}.extended(kFreeVar, u));
  };
  auto cn = [](NameId id) { return Term::constant(id); };

  switch (axiom) {
    case Axiom::Extensionality: {
      ck.result.note = "pairs range over V<=K; the proof needs only z in dom(u) u dom(v)";
      ck.tuples(2, [&](std::span<const NameId> t) {
        NameId u = t[0], v = t[1];
        FormulaPtr same_members = f_forall(
            "z", f_iff(f_member(Term::variable("z"), cn(u)), f_member(Term::variable("z"), cn(v))));
        Element lhs = ctx.eval(same_members);
        Element eq = ctx.truth_equality(u, v);
        ++ck.result.checks;
        if (!alg.leq(lhs, eq)) {
          ck.counterexample(same_members, f_equal(cn(u), cn(v)), lhs, eq, u, v, std::nullopt,
                            nullptr);
          return false;
        }
        for (NameId z : ck.univ) {
          FormulaPtr bi = f_iff(f_member(cn(z), cn(u)), f_member(cn(z), cn(v)));
          Element biv = ctx.eval(bi);
          ++ck.result.checks;
          if (!alg.leq(eq, biv)) {
            ck.counterexample(f_equal(cn(u), cn(v)), bi, eq, biv, u, z, std::nullopt, nullptr);
            return false;
          }
        }
        return true;
      });
      return ck.result;
    }

    case Axiom::Pairing: {
      ck.result.note = "witness pair name lives one rank above the window; z over V<=K";
      ck.tuples(2, [&](std::span<const NameId> t) {
        NameId u = t[0], v = t[1];
        std::vector<std::pair<NameId, Element>> es{{u, top}};
        if (v != u) es.emplace_back(v, top);
        NameId w = store.make_name(std::move(es));
        for (NameId z : ck.univ) {
          Element lhs = ctx.truth_membership(z, w);
          Element rhs = alg.join(ctx.truth_equality(z, u), ctx.truth_equality(z, v));
          ++ck.result.checks;
          if (!(lhs == rhs)) {
            ck.counterexample(f_member(cn(z), cn(w)),
                              f_or(f_equal(cn(z), cn(u)), f_equal(cn(z), cn(v))), lhs, rhs, u, z, w,
                              nullptr);
            return false;
          }
        }
        return true;
      });
      return ck.result;
    }

    case Axiom::Collection: {
      ck.result.note = "dual routes for y: the rank bound vs the universal name";
      NameId univ_name = store.universal_name(K);
      auto binaries = generate_binary_templates(opts.depth, K, ctx);
      for (const FormulaPtr& phi : binaries) {
        bool stop = false;
        ck.tuples(1, [&](std::span<const NameId> t) {
          NameId u = t[0];
          FormulaPtr unbounded = f_bforall(kFreeVar, cn(u), f_exists(kInnerVar, phi));
          FormulaPtr bounded = f_bforall(kFreeVar, cn(u), f_bexists(kInnerVar, cn(univ_name), phi));
          Element lhs = ctx.eval(unbounded);
          Element rhs = ctx.eval(bounded);
          ++ck.result.checks;
          if (!(lhs == rhs)) {
            ck.counterexample(unbounded, bounded, lhs, rhs, u, std::nullopt, univ_name, phi);
            stop = true;
            return false;
          }
          return true;
        });
        if (stop) break;
      }
      return ck.result;
    }

    case Axiom::Powerset: {
      ck.result.note = "witness domain enumerates all functions dom(u)->A; v over V<=K";
      ck.tuples(1, [&](std::span<const NameId> t) {
        NameId u = t[0];
        std::vector<NameId> dom;
        for (const NameEntry& e : store.entries(u)) dom.push_back(e.child);
        std::vector<NameId> functions;
        std::vector<uint32_t> slot(dom.size(), 0);
        while (true) {
          std::vector<std::pair<NameId, Element>> es;
          for (std::size_t i = 0; i < dom.size(); ++i) es.emplace_back(dom[i], alg.element(slot[i]));
          functions.push_back(store.make_name(std::move(es)));
          std::size_t i = 0;
          while (i < dom.size() && ++slot[i] == alg.size()) slot[i++] = 0;
          if (i == dom.size()) break;
        }
        std::vector<std::pair<NameId, Element>> wes;
        for (NameId f : functions) {
          FormulaPtr inside = f_bforall(kInnerVar, cn(f), f_member(Term::variable(kInnerVar), cn(u)));
          wes.emplace_back(f, ctx.eval(inside));
        }
        NameId w = store.make_name(std::move(wes));
        for (NameId v : ck.univ) {
          FormulaPtr rhs_f = f_bforall(kInnerVar, cn(v), f_member(Term::variable(kInnerVar), cn(u)));
          Element lhs = ctx.truth_membership(v, w);
          Element rhs = ctx.eval(rhs_f);
          ++ck.result.checks;
          if (!(lhs == rhs)) {
            ck.counterexample(f_member(cn(v), cn(w)), rhs_f, lhs, rhs, u, v, w, nullptr);
            return false;
          }
        }
        return true;
      });
      return ck.result;
    }

    case Axiom::Separation: {
      ck.result.note =
          "set parameter ranges over V<=K plus the universal name one rank above, where transport "
          "failures first appear";
      auto templates = generate_templates(opts.depth, K, ctx);
      std::vector<NameId> params = ck.univ;
      params.push_back(store.universal_name(K));

      auto check_one = [&](const FormulaPtr& phi, NameId u, NameId z) -> bool {
        std::vector<std::pair<NameId, Element>> wes;
        for (const NameEntry& e : store.entries(u)) {
          Element val = alg.meet(ctx.truth_membership(e.child, u), eval_at(phi, e.child));
          wes.emplace_back(e.child, val);
        }
        NameId w = store.make_name(std::move(wes));
        Element lhs = ctx.truth_membership(z, w);
        Element rhs = alg.meet(ctx.truth_membership(z, u), eval_at(phi, z));
        ++ck.result.checks;
        if (lhs == rhs) return true;
        FormulaPtr rhs_f = f_and(f_member(cn(z), cn(u)), substitute_name(phi, kFreeVar, z));
        ck.counterexample(f_member(cn(z), cn(w)), rhs_f, lhs, rhs, u, z, w, phi);
        return false;
      };

      if (ck.sampling) {
        for (std::size_t s = 0; s < opts.samples; ++s) {
          const FormulaPtr& phi = templates[rand_below(ck.rng, templates.size())];
          NameId u = params[rand_below(ck.rng, params.size())];
          NameId z = ck.draw();
          if (!check_one(phi, u, z)) return ck.result;
        }
        return ck.result;
      }
      for (const FormulaPtr& phi : templates)
        for (NameId u : params)
          for (NameId z : ck.univ)
            if (!check_one(phi, u, z)) return ck.result;
      return ck.result;
    }

    case Axiom::EmptySet: {
      ck.result.note = "uniform witness carries ||~(z~z)||, constant per policy";
      NameId e = store.empty_name();
      Element c = ctx.eval(f_not(f_equal(cn(e), cn(e))));
      std::vector<std::pair<NameId, Element>> wes;
      for (NameId z : ck.univ) wes.emplace_back(z, c);
      NameId w = store.make_name(std::move(wes));
      for (NameId z : ck.univ) {
        FormulaPtr bi = f_iff(f_member(cn(z), cn(w)), f_not(f_equal(cn(z), cn(z))));
        Element v = ctx.eval(bi);
        ++ck.result.checks;
        if (!(v == top)) {
          ck.counterexample(bi, f_equal(cn(e), cn(e)), v, top, std::nullopt, z, w, nullptr);
          return ck.result;
        }
      }
      // the per-element witness shape: dom = {u}, value ||~(u~u)||
      for (NameId u : ck.univ) {
        Element cu = ctx.eval(f_not(f_equal(cn(u), cn(u))));
        NameId wu = store.make_name({{u, cu}});
        Element got = ctx.truth_membership(u, wu);
        ++ck.result.checks;
        if (!(got == cu)) {
          ck.counterexample(f_member(cn(u), cn(wu)), f_not(f_equal(cn(u), cn(u))), got, cu, u,
                            std::nullopt, wu, nullptr);
          return ck.result;
        }
      }
      ck.result.witness.emplace_back("w", store.to_string(w));
      return ck.result;
    }

    case Axiom::Union: {
      ck.result.note =
          "witness values join u(v) meet v(x); the unweighted join overshoots for non-top u(v)";
      ck.tuples(1, [&](std::span<const NameId> t) {
        NameId u = t[0];
        std::map<NameId, Element> wmap;
        for (const NameEntry& ve : store.entries(u)) {
          for (const NameEntry& xe : store.entries(ve.child)) {
            Element val = alg.meet(alg.element(ve.value), alg.element(xe.value));
            auto it = wmap.find(xe.child);
            if (it == wmap.end())
              wmap.emplace(xe.child, val);
            else
              it->second = alg.join(it->second, val);
          }
        }
        std::vector<std::pair<NameId, Element>> wes(wmap.begin(), wmap.end());
        NameId w = store.make_name(std::move(wes));
        for (NameId y : ck.univ) {
          Element lhs = ctx.truth_membership(y, w);
          FormulaPtr rhs_f = f_bexists("v", cn(u), f_member(cn(y), Term::variable("v")));
          Element rhs = ctx.eval(rhs_f);
          ++ck.result.checks;
          if (!(lhs == rhs)) {
            ck.counterexample(f_member(cn(y), cn(w)), rhs_f, lhs, rhs, u, y, w, nullptr);
            return false;
          }
        }
        return true;
      });
      return ck.result;
    }

    case Axiom::Infinity: {
      ck.result.note = "lazy omega unfolded to the bound; the last level has no successor inside";
      ck.result.bound = opts.infinity_bound;
      std::vector<std::pair<NameId, Element>> entries;
      std::vector<NameId> nats;
      for (int n = 0; n <= opts.infinity_bound; ++n) {
        nats.push_back(store.hat_embed(Hf::nat(static_cast<unsigned>(n))));
        entries.emplace_back(nats.back(), top);
      }
      NameId omega = store.make_name(std::move(entries));
      ck.result.witness.emplace_back("omega-entries", std::to_string(opts.infinity_bound + 1));
      Element base = ctx.truth_membership(nats[0], omega);
      ++ck.result.checks;
      if (!(base == top)) {
        ck.counterexample(f_member(cn(nats[0]), cn(omega)), f_equal(cn(nats[0]), cn(nats[0])), base,
                          top, std::nullopt, nats[0], omega, nullptr);
        return ck.result;
      }
      for (int n = 0; n < opts.infinity_bound; ++n) {
        Element stepped = ctx.truth_membership(nats[n + 1], omega);
        ++ck.result.checks;
        if (!(stepped == top)) {
          ck.counterexample(f_member(cn(nats[n + 1]), cn(omega)),
                            f_equal(cn(nats[n + 1]), cn(nats[n + 1])), stepped, top, std::nullopt,
                            nats[n + 1], omega, nullptr);
          return ck.result;
        }
      }
      ck.result.verdict = AxiomCheckResult::Verdict::ValidUpToBound;
      return ck.result;
    }

    case Axiom::Induction: {
      ck.result.note = "premise meet bounded at K; instances in V<=K follow by rank recursion";
      auto templates = generate_templates(opts.depth, K, ctx);

      auto check_one = [&](const FormulaPtr& phi, NameId u) -> bool {
        FormulaPtr below = f_bforall(kInnerVar, x, rename_free_var(phi, kFreeVar, kInnerVar));
        FormulaPtr premise = f_forall(kFreeVar, f_implies(below, phi));
        Element a = ctx.eval(premise);
        Element inst = eval_at(phi, u);
        ++ck.result.checks;
        if (alg.leq(a, inst)) return true;
        ck.counterexample(premise, substitute_name(phi, kFreeVar, u), a, inst, u, std::nullopt,
                          std::nullopt, phi);
        return false;
      };

      if (ck.sampling) {
        for (std::size_t s = 0; s < opts.samples; ++s) {
          const FormulaPtr& phi = templates[rand_below(ck.rng, templates.size())];
          if (!check_one(phi, ck.draw())) return ck.result;
        }
        return ck.result;
      }
      for (const FormulaPtr& phi : templates)
        for (NameId u : ck.univ)
          if (!check_one(phi, u)) return ck.result;
      return ck.result;
    }
  }
  throw Error("unreachable axiom kind");
}

bool reverify(const AxiomCheckResult& r, EvalContext& ctx) {
  if (r.verdict != AxiomCheckResult::Verdict::Counterexample) return true;
  if (!r.raw.lhs_formula || !r.raw.rhs_formula || !r.raw.lhs || !r.raw.rhs) return false;
  return ctx.eval(r.raw.lhs_formula) == *r.raw.lhs && ctx.eval(r.raw.rhs_formula) == *r.raw.rhs;
}

std::optional<NameId> separation_witness_search(EvalContext& ctx, const FormulaPtr& phi, NameId u,
                                                unsigned K, unsigned search_rank) {
  Element top = ctx.algebra().top();
  const auto candidates = ctx.store().universe(search_rank);
  const auto zs = ctx.store().universe(K);
  for (NameId w : candidates) {
    bool good = true;
    for (NameId z : zs) {
      FormulaPtr bi = f_iff(f_member(Term::constant(z), Term::constant(w)),
                            f_and(f_member(Term::constant(z), Term::constant(u)),
                                  substitute_name(phi, kFreeVar, z)));
      if (!(ctx.eval(bi) == top)) {
        good = false;
        break;
      }
    }
    if (good) return w;
  }
  return std::nullopt;
}

MixingOutcome check_mixing(EvalContext& ctx, std::size_t trials, uint64_t seed) {
  MixingOutcome out;
  const Algebra& alg = ctx.algebra();
  NameStore& store = ctx.store();
  const auto univ = store.universe(ctx.rank_bound());
  uint64_t rng = seed;
  auto membership = [&](NameId a, NameId b) { return ctx.truth_membership(a, b); };

  uint64_t safety = 0;
  while (out.families < trials && safety++ < trials * 1000 + 1000) {
    std::size_t size = 1 + rand_below(rng, 3);
    std::vector<std::pair<Element, NameId>> family;
    for (std::size_t i = 0; i < size; ++i)
      family.emplace_back(alg.element(static_cast<uint32_t>(rand_below(rng, alg.size()))),
                          univ[rand_below(rng, univ.size())]);
    bool pre = true;
    for (std::size_t i = 0; i < size && pre; ++i)
      for (std::size_t j = i + 1; j < size && pre; ++j)
        pre = alg.leq(alg.meet(family[i].first, family[j].first),
                      ctx.truth_equality(family[i].second, family[j].second));
    if (!pre) {
      ++out.skipped;
      continue;
    }
    NameId mix = mixture(store, family, membership);
    for (const auto& [a_i, u_i] : family) {
      ++out.checked;
      if (!alg.leq(a_i, ctx.truth_equality(u_i, mix))) {
        out.failure = "a_i = " + alg.label(a_i) + ", u_i = " + store.to_string(u_i) +
                      ", mixture = " + store.to_string(mix);
        return out;
      }
    }
    ++out.families;
  }
  return out;
}

std::optional<NameId> maximum_principle_witness(EvalContext& ctx, const FormulaPtr& psi,
                                                unsigned K) {
  const Algebra& alg = ctx.algebra();
  NameStore& store = ctx.store();
  const auto univ = store.universe(K);
  std::vector<Element> vals;
  vals.reserve(univ.size());
  for (NameId u : univ) vals.push_back(ctx.eval(psi, Env{}.extended(kFreeVar, u)));
  if (!(alg.big_join(vals) == alg.top())) return std::nullopt;

  std::vector<Element> distinct;
  for (Element v : vals)
    if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) distinct.push_back(v);
  std::vector<Element> antichain = alg.refine_antichain(distinct);

  std::vector<std::pair<Element, NameId>> family;
  for (Element a : antichain)
    for (std::size_t i = 0; i < univ.size(); ++i)
      if (alg.leq(a, vals[i])) {
        family.emplace_back(a, univ[i]);
        break;
      }
  NameId mix = mixture(store, family, [&](NameId a, NameId b) { return ctx.truth_membership(a, b); });
  if (ctx.eval(psi, Env{}.extended(kFreeVar, mix)) == alg.top()) return mix;
  return std::nullopt;
}

}  // namespace fsv
