#include "fsv/proplogic.hpp"

#include <algorithm>

namespace fsv {

int PropFormula::add_var(int var_index) {
  if (var_index < 0 || var_index >= num_vars()) throw Error("variable index out of range");
  nodes_.push_back({Kind::Var, -1, -1, var_index});
  return static_cast<int>(nodes_.size()) - 1;
}

int PropFormula::add_not(int a) {
  if (a < 0 || a >= static_cast<int>(nodes_.size())) throw Error("child node out of range");
  nodes_.push_back({Kind::Not, a, -1, -1});
  return static_cast<int>(nodes_.size()) - 1;
}

int PropFormula::add_and(int a, int b) {
  nodes_.push_back({Kind::And, a, b, -1});
  return static_cast<int>(nodes_.size()) - 1;
}

int PropFormula::add_or(int a, int b) {
  nodes_.push_back({Kind::Or, a, b, -1});
  return static_cast<int>(nodes_.size()) - 1;
}

int PropFormula::add_imp(int a, int b) {
  nodes_.push_back({Kind::Imp, a, b, -1});
  return static_cast<int>(nodes_.size()) - 1;
}

std::vector<int> PropFormula::negation_nodes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].kind == Kind::Not) out.push_back(static_cast<int>(i));
  return out;
}

Element PropValuation::neg_value(int node) const {
  for (const auto& [idx, value] : negations)
    if (idx == node) return value;
  throw InvalidNegationChoice("no negation value assigned to occurrence " + std::to_string(node));
}

namespace {

// Values for all nodes under the valuation; children precede parents, so a
// single forward pass suffices.
std::vector<Element> node_values(const PropFormula& f, const FidelStructure& s,
                                 const PropValuation& v) {
  const Algebra& alg = s.algebra();
  const auto& nodes = f.nodes();
  std::vector<Element> val(nodes.size(), alg.top());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    switch (nd.kind) {
      case PropFormula::Kind::Var:
        val[i] = v.vars.at(nd.var);
        break;
      case PropFormula::Kind::Not: {
        Element chosen = v.neg_value(static_cast<int>(i));
        if (!s.neg_admits(val[nd.a], chosen))
          throw InvalidNegationChoice("negation value outside N at occurrence " +
                                      std::to_string(i));
        if (nodes[nd.a].kind == PropFormula::Kind::Not &&
            !alg.leq(chosen, val[nodes[nd.a].a]))
          throw InvalidNegationChoice("double negation must stay below the inner value");
        val[i] = chosen;
        break;
      }
      case PropFormula::Kind::And:
        val[i] = alg.meet(val[nd.a], val[nd.b]);
        break;
      case PropFormula::Kind::Or:
        val[i] = alg.join(val[nd.a], val[nd.b]);
        break;
      case PropFormula::Kind::Imp:
        val[i] = alg.imp(val[nd.a], val[nd.b]);
        break;
    }
  }
  return val;
}

}  // namespace

Element eval_prop(const PropFormula& f, const FidelStructure& s, const PropValuation& v) {
  if (f.root() < 0) throw Error("formula has no root");
  return node_values(f, s, v).at(f.root());
}

bool for_each_valuation(const PropFormula& f, const FidelStructure& s,
                        const std::function<bool(const PropValuation&)>& fn) {
  const Algebra& alg = s.algebra();
  const auto& nodes = f.nodes();
  const int nvars = f.num_vars();
  const std::size_t ncarrier = alg.size();

  std::vector<uint32_t> vm(nvars, 0);
  std::vector<Element> val(nodes.size(), alg.top());

  while (true) {
    PropValuation v;
    v.vars.clear();
    for (int i = 0; i < nvars; ++i) v.vars.push_back(alg.element(vm[i]));

    // choose negation values occurrence by occurrence, children first
    std::function<bool(std::size_t)> go = [&](std::size_t idx) -> bool {
      if (idx == nodes.size()) return fn(v);
      const auto& nd = nodes[idx];
      switch (nd.kind) {
        case PropFormula::Kind::Var:
          val[idx] = v.vars[nd.var];
          return go(idx + 1);
        case PropFormula::Kind::And:
          val[idx] = alg.meet(val[nd.a], val[nd.b]);
          return go(idx + 1);
        case PropFormula::Kind::Or:
          val[idx] = alg.join(val[nd.a], val[nd.b]);
          return go(idx + 1);
        case PropFormula::Kind::Imp:
          val[idx] = alg.imp(val[nd.a], val[nd.b]);
          return go(idx + 1);
        case PropFormula::Kind::Not: {
          for (uint32_t c = 0; c < ncarrier; ++c) {
            Element cand = alg.element(c);
            if (!s.neg_admits(val[nd.a], cand)) continue;
            if (nodes[nd.a].kind == PropFormula::Kind::Not && !alg.leq(cand, val[nodes[nd.a].a]))
              continue;
            val[idx] = cand;
            v.negations.emplace_back(static_cast<int>(idx), cand);
            bool keep_going = go(idx + 1);
            v.negations.pop_back();
            if (!keep_going) return false;
          }
          return true;
        }
      }
      return true;
    };
    if (!go(0)) return false;

    int i = nvars - 1;
    while (i >= 0 && ++vm[i] == ncarrier) vm[i--] = 0;
    if (i < 0) break;
  }
  return true;
}

uint64_t count_valuations(const PropFormula& f, const FidelStructure& s) {
  uint64_t n = 0;
  for_each_valuation(f, s, [&](const PropValuation&) {
    ++n;
    return true;
  });
  return n;
}

std::string SchemaId::name() const {
  switch (kind) {
    case Kind::A:
      return "A" + std::to_string(index);
    case Kind::G:
      return "G" + std::to_string(index);
    case Kind::L:
      return "L";
  }
  return "?";
}

PropFormula schema_formula(SchemaId id) {
  auto vars = [](int n) {
    std::vector<std::string> out;
    const char* base[] = {"a", "b", "c"};
    for (int i = 0; i < n; ++i)
      out.push_back(n <= 3 ? base[i] : "a" + std::to_string(i + 1));
    return out;
  };
  if (id.kind == SchemaId::Kind::L) {
    PropFormula f(vars(2));
    int a = f.add_var(0), b = f.add_var(1);
    int ba = f.add_imp(b, a);
    int a2 = f.add_var(0), b2 = f.add_var(1);
    int ab = f.add_imp(a2, b2);
    f.set_root(f.add_or(ba, ab));
    return f;
  }
  if (id.kind == SchemaId::Kind::G) {
    // (a1 -> a2) v ... v (a_{n-1} -> a_n): fails exactly on a strictly
    // descending chain of n values, so it is valid on chains of at most
    // n-1 elements.
    int n = id.index;
    if (n < 2) throw Error("G_n needs n >= 2");
    PropFormula f(vars(n));
    int acc = -1;
    for (int i = 0; i + 1 < n; ++i) {
      int x = f.add_var(i), y = f.add_var(i + 1);
      int imp = f.add_imp(x, y);
      acc = acc < 0 ? imp : f.add_or(acc, imp);
    }
    f.set_root(acc);
    return f;
  }
  switch (id.index) {
    case 1: {  // a -> (b -> a)
      PropFormula f(vars(2));
      int a = f.add_var(0), b = f.add_var(1), a2 = f.add_var(0);
      f.set_root(f.add_imp(a, f.add_imp(b, a2)));
      return f;
    }
    case 2: {  // (a -> (b -> c)) -> ((a -> b) -> (a -> c))
      PropFormula f(vars(3));
      int lhs = f.add_imp(f.add_var(0), f.add_imp(f.add_var(1), f.add_var(2)));
      int ab = f.add_imp(f.add_var(0), f.add_var(1));
      int ac = f.add_imp(f.add_var(0), f.add_var(2));
      f.set_root(f.add_imp(lhs, f.add_imp(ab, ac)));
      return f;
    }
    case 3: {  // (a & b) -> a
      PropFormula f(vars(2));
      f.set_root(f.add_imp(f.add_and(f.add_var(0), f.add_var(1)), f.add_var(0)));
      return f;
    }
    case 4: {  // (a & b) -> b
      PropFormula f(vars(2));
      f.set_root(f.add_imp(f.add_and(f.add_var(0), f.add_var(1)), f.add_var(1)));
      return f;
    }
    case 5: {  // a -> (b -> (a & b))
      PropFormula f(vars(2));
      int inner = f.add_imp(f.add_var(1), f.add_and(f.add_var(0), f.add_var(1)));
      f.set_root(f.add_imp(f.add_var(0), inner));
      return f;
    }
    case 6: {  // a -> (a v b)
      PropFormula f(vars(2));
      f.set_root(f.add_imp(f.add_var(0), f.add_or(f.add_var(0), f.add_var(1))));
      return f;
    }
    case 7: {  // b -> (a v b)
      PropFormula f(vars(2));
      f.set_root(f.add_imp(f.add_var(1), f.add_or(f.add_var(0), f.add_var(1))));
      return f;
    }
    case 8: {  // (a -> c) -> ((b -> c) -> ((a & b) -> c))
      PropFormula f(vars(3));
      int ac = f.add_imp(f.add_var(0), f.add_var(2));
      int bc = f.add_imp(f.add_var(1), f.add_var(2));
      int abc = f.add_imp(f.add_and(f.add_var(0), f.add_var(1)), f.add_var(2));
      f.set_root(f.add_imp(ac, f.add_imp(bc, abc)));
      return f;
    }
    case 9: {  // a v ~a
      PropFormula f(vars(1));
      int a = f.add_var(0);
      f.set_root(f.add_or(a, f.add_not(a)));
      return f;
    }
    case 10: {  // ~~a -> a
      PropFormula f(vars(1));
      int a = f.add_var(0);
      f.set_root(f.add_imp(f.add_not(f.add_not(a)), f.add_var(0)));
      return f;
    }
    default:
      throw Error("unknown axiom schema index");
  }
}

namespace {

// Instantiation pool: formulas over the schema's metavariables built with at
// most `depth` connectives, deduplicated by shape.
struct PoolEntry {
  // a small prefix encoding for dedup and deterministic ordering
  std::string shape;
  // builds this entry inside `target`, returns the node index
  std::function<int(PropFormula&)> build;
};

std::vector<PoolEntry> instantiation_pool(int nvars, int depth) {
  std::vector<std::vector<PoolEntry>> by_cost(depth + 1);
  for (int v = 0; v < nvars; ++v)
    by_cost[0].push_back({"v" + std::to_string(v),
                          [v](PropFormula& f) { return f.add_var(v); }});
  for (int c = 1; c <= depth; ++c) {
    for (const PoolEntry& e : by_cost[c - 1]) {
      by_cost[c].push_back({"~" + e.shape, [build = e.build](PropFormula& f) {
                              return f.add_not(build(f));
                            }});
    }
    for (int left = 0; left < c; ++left) {
      int right = c - 1 - left;
      for (const PoolEntry& x : by_cost[left])
        for (const PoolEntry& y : by_cost[right]) {
          auto bx = x.build;
          auto by = y.build;
          by_cost[c].push_back({"(" + x.shape + "&" + y.shape + ")",
                                [bx, by](PropFormula& f) { return f.add_and(bx(f), by(f)); }});
          by_cost[c].push_back({"(" + x.shape + "|" + y.shape + ")",
                                [bx, by](PropFormula& f) { return f.add_or(bx(f), by(f)); }});
          by_cost[c].push_back({"(" + x.shape + ">" + y.shape + ")",
                                [bx, by](PropFormula& f) { return f.add_imp(bx(f), by(f)); }});
        }
    }
  }
  std::vector<PoolEntry> out;
  std::vector<std::string> seen;
  for (auto& level : by_cost)
    for (auto& e : level) {
      if (std::find(seen.begin(), seen.end(), e.shape) != seen.end()) continue;
      seen.push_back(e.shape);
      out.push_back(std::move(e));
    }
  return out;
}

// Copy of `schema` with metavariable i replaced by pool entry choice[i].
// Each metavariable's replacement is built once and shared, so every
// occurrence of the same instance formula reads the same negation values.
PropFormula instantiate(const PropFormula& schema, const std::vector<PoolEntry>& pool,
                        const std::vector<std::size_t>& choice) {
  PropFormula out(schema.var_names());
  std::vector<int> mapped(schema.nodes().size(), -1);
  std::vector<int> metavar_node(schema.var_names().size(), -1);
  for (std::size_t i = 0; i < schema.nodes().size(); ++i) {
    const auto& nd = schema.nodes()[i];
    switch (nd.kind) {
      case PropFormula::Kind::Var: {
        int& cached = metavar_node[nd.var];
        if (cached < 0) cached = pool[choice[nd.var]].build(out);
        mapped[i] = cached;
        break;
      }
      case PropFormula::Kind::Not:
        mapped[i] = out.add_not(mapped[nd.a]);
        break;
      case PropFormula::Kind::And:
        mapped[i] = out.add_and(mapped[nd.a], mapped[nd.b]);
        break;
      case PropFormula::Kind::Or:
        mapped[i] = out.add_or(mapped[nd.a], mapped[nd.b]);
        break;
      case PropFormula::Kind::Imp:
        mapped[i] = out.add_imp(mapped[nd.a], mapped[nd.b]);
        break;
    }
  }
  out.set_root(mapped[schema.root()]);
  return out;
}

}  // namespace

SchemaVerdict check_schema(SchemaId id, const FidelStructure& s, int depth) {
  PropFormula schema = schema_formula(id);
  SchemaVerdict verdict;
  Element top = s.algebra().top();

  auto run_instance = [&](const PropFormula& instance) {
    bool completed = for_each_valuation(instance, s, [&](const PropValuation& v) {
      ++verdict.valuations;
      Element value = eval_prop(instance, s, v);
      if (value == top) return true;
      verdict.valid = false;
      verdict.countermodel = SchemaCountermodel{instance, v, value};
      return false;
    });
    return completed;
  };

  if (depth <= 0) {
    run_instance(schema);
    return verdict;
  }

  auto pool = instantiation_pool(schema.num_vars(), depth);
  std::vector<std::size_t> choice(schema.num_vars(), 0);
  while (true) {
    if (!run_instance(instantiate(schema, pool, choice))) return verdict;
    std::size_t i = 0;
    while (i < choice.size() && ++choice[i] == pool.size()) choice[i++] = 0;
    if (i == choice.size()) break;
  }
  return verdict;
}

std::optional<ParaconsistencyWitness> find_paraconsistency_witness(const FidelStructure& s) {
  PropFormula f({"a", "b"});
  int a = f.add_var(0);
  int na = f.add_not(a);
  int prem = f.add_and(na, a);
  int b = f.add_var(1);
  int root = f.add_imp(prem, b);
  f.set_root(root);

  std::optional<ParaconsistencyWitness> witness;
  Element top = s.algebra().top();
  for_each_valuation(f, s, [&](const PropValuation& v) {
    Element value = eval_prop(f, s, v);
    if (value == top) return true;
    witness = ParaconsistencyWitness{v.vars[0], v.neg_value(na), v.vars[1], value, v};
    return false;
  });
  return witness;
}

}  // namespace fsv
