#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsv/fidel.hpp"
#include "fsv/names.hpp"

namespace fsv {

struct Term {
  enum class Kind : uint8_t { Variable, Constant };
  Kind kind = Kind::Variable;
  std::string var;
  NameId name = 0;

  static Term variable(std::string v) { return {Kind::Variable, std::move(v), 0}; }
  static Term constant(NameId id) { return {Kind::Constant, {}, id}; }
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Set-theoretic formula AST. Iff is sugar for the conjunction of two
/// implications and is expanded before evaluation.
class Formula {
 public:
  enum class Kind : uint8_t {
    Member,
    Equal,
    And,
    Or,
    Implies,
    Iff,
    Not,
    Forall,
    Exists,
    BoundedForall,
    BoundedExists,
  };

  Kind kind;
  Term t1, t2;       // atoms; t2 is the range term of bounded quantifiers
  FormulaPtr a, b;   // subformulas
  std::string var;   // quantified variable
};

FormulaPtr f_member(Term t1, Term t2);
FormulaPtr f_equal(Term t1, Term t2);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_forall(std::string var, FormulaPtr body);
FormulaPtr f_exists(std::string var, FormulaPtr body);
FormulaPtr f_bforall(std::string var, Term range, FormulaPtr body);
FormulaPtr f_bexists(std::string var, Term range, FormulaPtr body);

/// Renames free occurrences of a variable (quantifier shadowing respected).
FormulaPtr rename_free_var(const FormulaPtr& f, const std::string& from, const std::string& to);
/// Substitutes a name constant for free occurrences of a variable.
FormulaPtr substitute_name(const FormulaPtr& f, const std::string& var, NameId name);
bool formula_equal(const FormulaPtr& x, const FormulaPtr& y);

enum class NegationPolicy : uint8_t {
  /// Odd stack of negations evaluates to top, even stack to the stripped
  /// body; requires a structure admitting top as negation everywhere.
  StandardLeibniz,
  /// Negation by the algebra's unary table; requires neg_op.
  AlgebraicOp,
};

const char* policy_name(NegationPolicy p);

class Env {
 public:
  Env() = default;
  Env extended(const std::string& var, NameId id) const;
  std::optional<NameId> lookup(const std::string& var) const;

 private:
  std::vector<std::pair<std::string, NameId>> binds_;
};

/// Evaluates closed formulas to algebra elements. Membership and equality
/// recurse on name rank and are memoized by interned id, so results are
/// independent of evaluation order and cache state. Unbounded quantifiers
/// range over universe(rank_bound): exists under-approximates the unbounded
/// value and forall over-approximates it; bounded quantifiers are exact.
class EvalContext {
 public:
  /// Throws InvalidStructure when the structure fails validation and
  /// PolicyInadmissible when the policy's precondition fails.
  EvalContext(const FidelStructure& s, NameStore& store, NegationPolicy policy,
              unsigned rank_bound);

  Element truth_membership(NameId u, NameId v);
  Element truth_equality(NameId u, NameId v);

  Element eval(const FormulaPtr& f);
  Element eval(const FormulaPtr& f, const Env& env);

  /// Value of a Not-rooted formula under the active policy. Also audits the
  /// admissibility constraint (the value must lie in N at the body's value);
  /// violations are counted, not fatal.
  Element negation_value(const FormulaPtr& f, const Env& env);

  /// Domain-restricted quantifier value; exact, independent of rank_bound.
  Element bounded_quantifier_eval(Formula::Kind kind, NameId range, const std::string& var,
                                  const FormulaPtr& body, const Env& env);

  const FidelStructure& structure() const { return structure_; }
  const Algebra& algebra() const { return structure_.algebra(); }
  NameStore& store() { return store_; }
  NegationPolicy policy() const { return policy_; }
  unsigned rank_bound() const { return rank_bound_; }

  uint64_t negation_constraint_violations() const { return neg_violations_.load(); }
  const std::optional<std::string>& first_violation() const { return first_violation_; }

  void reset_memo();

 private:
  const FidelStructure& structure_;
  NameStore& store_;
  NegationPolicy policy_;
  unsigned rank_bound_;
  // insert-if-absent under a lock; racing writers would agree anyway since
  // evaluation is deterministic
  mutable std::mutex memo_mutex_;
  std::unordered_map<uint64_t, uint32_t> member_memo_;
  std::unordered_map<uint64_t, uint32_t> equal_memo_;
  std::atomic<uint64_t> neg_violations_{0};
  std::optional<std::string> first_violation_;

  NameId resolve(const Term& t, const Env& env) const;
};

}  // namespace fsv
