#include "fsv/evaluator.hpp"

#include <vector>

namespace fsv {

namespace {

FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

bool term_equal(const Term& x, const Term& y) {
  if (x.kind != y.kind) return false;
  return x.kind == Term::Kind::Variable ? x.var == y.var : x.name == y.name;
}

}  // namespace

FormulaPtr f_member(Term t1, Term t2) {
  return node({Formula::Kind::Member, std::move(t1), std::move(t2), nullptr, nullptr, {}});
}
FormulaPtr f_equal(Term t1, Term t2) {
  return node({Formula::Kind::Equal, std::move(t1), std::move(t2), nullptr, nullptr, {}});
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return node({Formula::Kind::And, {}, {}, std::move(a), std::move(b), {}});
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return node({Formula::Kind::Or, {}, {}, std::move(a), std::move(b), {}});
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return node({Formula::Kind::Implies, {}, {}, std::move(a), std::move(b), {}});
}
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return node({Formula::Kind::Iff, {}, {}, std::move(a), std::move(b), {}});
}
FormulaPtr f_not(FormulaPtr a) {
  return node({Formula::Kind::Not, {}, {}, std::move(a), nullptr, {}});
}
FormulaPtr f_forall(std::string var, FormulaPtr body) {
  return node({Formula::Kind::Forall, {}, {}, std::move(body), nullptr, std::move(var)});
}
FormulaPtr f_exists(std::string var, FormulaPtr body) {
  return node({Formula::Kind::Exists, {}, {}, std::move(body), nullptr, std::move(var)});
}
FormulaPtr f_bforall(std::string var, Term range, FormulaPtr body) {
  return node(
      {Formula::Kind::BoundedForall, {}, std::move(range), std::move(body), nullptr, std::move(var)});
}
FormulaPtr f_bexists(std::string var, Term range, FormulaPtr body) {
  return node(
      {Formula::Kind::BoundedExists, {}, std::move(range), std::move(body), nullptr, std::move(var)});
}

FormulaPtr rename_free_var(const FormulaPtr& f, const std::string& from, const std::string& to) {
  if (!f) return f;
  auto rename_term = [&](const Term& t) {
    if (t.kind == Term::Kind::Variable && t.var == from) return Term::variable(to);
    return t;
  };
  switch (f->kind) {
    case Formula::Kind::Member:
      return f_member(rename_term(f->t1), rename_term(f->t2));
    case Formula::Kind::Equal:
      return f_equal(rename_term(f->t1), rename_term(f->t2));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      Formula out = *f;
      out.a = rename_free_var(f->a, from, to);
      out.b = rename_free_var(f->b, from, to);
      return node(std::move(out));
    }
    case Formula::Kind::Not: {
      Formula out = *f;
      out.a = rename_free_var(f->a, from, to);
      return node(std::move(out));
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (f->var == from) return f;
      Formula out = *f;
      out.a = rename_free_var(f->a, from, to);
      return node(std::move(out));
    }
    case Formula::Kind::BoundedForall:
    case Formula::Kind::BoundedExists: {
      Formula out = *f;
      out.t2 = rename_term(f->t2);
      if (f->var != from) out.a = rename_free_var(f->a, from, to);
      return node(std::move(out));
    }
  }
  return f;
}

FormulaPtr substitute_name(const FormulaPtr& f, const std::string& var, NameId name) {
  if (!f) return f;
  auto subst_term = [&](const Term& t) {
    if (t.kind == Term::Kind::Variable && t.var == var) return Term::constant(name);
    return t;
  };
  switch (f->kind) {
    case Formula::Kind::Member:
      return f_member(subst_term(f->t1), subst_term(f->t2));
    case Formula::Kind::Equal:
      return f_equal(subst_term(f->t1), subst_term(f->t2));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      Formula out = *f;
      out.a = substitute_name(f->a, var, name);
      out.b = substitute_name(f->b, var, name);
      return node(std::move(out));
    }
    case Formula::Kind::Not: {
      Formula out = *f;
      out.a = substitute_name(f->a, var, name);
      return node(std::move(out));
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (f->var == var) return f;
      Formula out = *f;
      out.a = substitute_name(f->a, var, name);
      return node(std::move(out));
    }
    case Formula::Kind::BoundedForall:
    case Formula::Kind::BoundedExists: {
      Formula out = *f;
      out.t2 = subst_term(f->t2);
      if (f->var != var) out.a = substitute_name(f->a, var, name);
      return node(std::move(out));
    }
  }
  return f;
}

bool formula_equal(const FormulaPtr& x, const FormulaPtr& y) {
  if (x == y) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case Formula::Kind::Member:
    case Formula::Kind::Equal:
      return term_equal(x->t1, y->t1) && term_equal(x->t2, y->t2);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return formula_equal(x->a, y->a) && formula_equal(x->b, y->b);
    case Formula::Kind::Not:
      return formula_equal(x->a, y->a);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return x->var == y->var && formula_equal(x->a, y->a);
    case Formula::Kind::BoundedForall:
    case Formula::Kind::BoundedExists:
      return x->var == y->var && term_equal(x->t2, y->t2) && formula_equal(x->a, y->a);
  }
  return false;
}

const char* policy_name(NegationPolicy p) {
  return p == NegationPolicy::StandardLeibniz ? "standard" : "algebraic";
}

Env Env::extended(const std::string& var, NameId id) const {
  Env out = *this;
  out.binds_.emplace_back(var, id);
  return out;
}

std::optional<NameId> Env::lookup(const std::string& var) const {
  for (auto it = binds_.rbegin(); it != binds_.rend(); ++it)
    if (it->first == var) return it->second;
  return std::nullopt;
}

EvalContext::EvalContext(const FidelStructure& s, NameStore& store, NegationPolicy policy,
                         unsigned rank_bound)
    : structure_(s), store_(store), policy_(policy), rank_bound_(rank_bound) {
  if (store.algebra().id() != s.algebra().id())
    throw MixedAlgebras("name store and structure use different algebras");
  ValidationReport report = validate_structure(s);
  if (!report.ok())
    throw InvalidStructure("structure fails its defining conditions:\n" + report.to_string());
  if (policy == NegationPolicy::StandardLeibniz && !admits_standard_policy(s))
    throw PolicyInadmissible(
        "standard policy needs top admissible everywhere and N_top = carrier");
  if (policy == NegationPolicy::AlgebraicOp && !s.algebra().has_neg_op())
    throw PolicyInadmissible("algebraic policy needs a negation table");
}

void EvalContext::reset_memo() {
  std::lock_guard<std::mutex> lock(memo_mutex_);
  member_memo_.clear();
  equal_memo_.clear();
}

namespace {
inline uint64_t memo_key(NameId u, NameId v) { return (uint64_t(u) << 32) | v; }
}  // namespace

Element EvalContext::truth_membership(NameId u, NameId v) {
  const uint64_t key = memo_key(u, v);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (auto it = member_memo_.find(key); it != member_memo_.end())
      return algebra().element(it->second);
  }
  const Algebra& a = algebra();
  Element acc = a.bottom();
  for (const NameEntry& e : store_.entries(v))
    acc = a.join(acc, a.meet(a.element(e.value), truth_equality(e.child, u)));
  std::lock_guard<std::mutex> lock(memo_mutex_);
  member_memo_.emplace(key, acc.index);
  return acc;
}

Element EvalContext::truth_equality(NameId u, NameId v) {
  const uint64_t key = memo_key(u, v);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (auto it = equal_memo_.find(key); it != equal_memo_.end())
      return algebra().element(it->second);
  }
  const Algebra& a = algebra();
  Element acc = a.top();
  for (const NameEntry& e : store_.entries(u))
    acc = a.meet(acc, a.imp(a.element(e.value), truth_membership(e.child, v)));
  for (const NameEntry& e : store_.entries(v))
    acc = a.meet(acc, a.imp(a.element(e.value), truth_membership(e.child, u)));
  std::lock_guard<std::mutex> lock(memo_mutex_);
  equal_memo_.emplace(key, acc.index);
  return acc;
}

NameId EvalContext::resolve(const Term& t, const Env& env) const {
  if (t.kind == Term::Kind::Constant) return t.name;
  if (auto id = env.lookup(t.var)) return *id;
  throw ScopeError("unbound variable '" + t.var + "'", {});
}

Element EvalContext::eval(const FormulaPtr& f) { return eval(f, Env{}); }

Element EvalContext::eval(const FormulaPtr& f, const Env& env) {
  if (!f) throw Error("empty formula");
  const Algebra& a = algebra();
  switch (f->kind) {
    case Formula::Kind::Member:
      return truth_membership(resolve(f->t1, env), resolve(f->t2, env));
    case Formula::Kind::Equal:
      return truth_equality(resolve(f->t1, env), resolve(f->t2, env));
    case Formula::Kind::And:
      return a.meet(eval(f->a, env), eval(f->b, env));
    case Formula::Kind::Or:
      return a.join(eval(f->a, env), eval(f->b, env));
    case Formula::Kind::Implies:
      return a.imp(eval(f->a, env), eval(f->b, env));
    case Formula::Kind::Iff: {
      Element x = eval(f->a, env);
      Element y = eval(f->b, env);
      return a.meet(a.imp(x, y), a.imp(y, x));
    }
    case Formula::Kind::Not:
      return negation_value(f, env);
    case Formula::Kind::Forall: {
      Element acc = a.top();
      for (NameId u : store_.universe(rank_bound_))
        acc = a.meet(acc, eval(f->a, env.extended(f->var, u)));
      return acc;
    }
    case Formula::Kind::Exists: {
      Element acc = a.bottom();
      for (NameId u : store_.universe(rank_bound_))
        acc = a.join(acc, eval(f->a, env.extended(f->var, u)));
      return acc;
    }
    case Formula::Kind::BoundedForall:
    case Formula::Kind::BoundedExists:
      return bounded_quantifier_eval(f->kind, resolve(f->t2, env), f->var, f->a, env);
  }
  throw Error("unreachable formula kind");
}

Element EvalContext::negation_value(const FormulaPtr& f, const Env& env) {
  if (!f || f->kind != Formula::Kind::Not) throw Error("negation_value needs a Not-rooted formula");
  const Algebra& a = algebra();
  Element body_value = eval(f->a, env);
  Element value = a.top();
  if (policy_ == NegationPolicy::StandardLeibniz) {
    unsigned negs = 0;
    FormulaPtr body = f;
    while (body->kind == Formula::Kind::Not) {
      ++negs;
      body = body->a;
    }
    value = (negs % 2 == 1) ? a.top() : eval(body, env);
  } else {
    value = a.neg_op(body_value);
  }
  // audit the admissibility constraint at the immediate body
  if (!structure_.neg_admits(body_value, value)) {
    neg_violations_.fetch_add(1);
    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (!first_violation_)
      first_violation_ = "negation value " + a.label(value) + " outside N at " +
                         a.label(body_value);
  }
  return value;
}

Element EvalContext::bounded_quantifier_eval(Formula::Kind kind, NameId range,
                                             const std::string& var, const FormulaPtr& body,
                                             const Env& env) {
  const Algebra& a = algebra();
  if (kind == Formula::Kind::BoundedForall) {
    Element acc = a.top();
    for (const NameEntry& e : store_.entries(range))
      acc = a.meet(acc, a.imp(a.element(e.value), eval(body, env.extended(var, e.child))));
    return acc;
  }
  if (kind == Formula::Kind::BoundedExists) {
    Element acc = a.bottom();
    for (const NameEntry& e : store_.entries(range))
      acc = a.join(acc, a.meet(a.element(e.value), eval(body, env.extended(var, e.child))));
    return acc;
  }
  throw Error("bounded_quantifier_eval needs a bounded quantifier kind");
}

}  // namespace fsv
