#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fsv/fidel.hpp"

namespace fsv {

/// Propositional formula over a declared finite variable list, stored as a
/// flat node vector with children preceding parents. Negation choices attach
/// to node indices, so two occurrences of the same subformula may receive
/// different values.
class PropFormula {
 public:
  enum class Kind : uint8_t { Var, Not, And, Or, Imp };

  struct Node {
    Kind kind;
    int32_t a = -1;
    int32_t b = -1;
    int32_t var = -1;
  };

  explicit PropFormula(std::vector<std::string> var_names) : var_names_(std::move(var_names)) {}

  int add_var(int var_index);
  int add_not(int a);
  int add_and(int a, int b);
  int add_or(int a, int b);
  int add_imp(int a, int b);
  void set_root(int r) { root_ = r; }

  int root() const { return root_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::string>& var_names() const { return var_names_; }
  int num_vars() const { return static_cast<int>(var_names_.size()); }
  std::vector<int> negation_nodes() const;

 private:
  std::vector<std::string> var_names_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

struct PropValuation {
  std::vector<Element> vars;                        // by variable index
  std::vector<std::pair<int, Element>> negations;   // (node index, value), ascending

  Element neg_value(int node) const;
};

/// Value of f under v, reading negation values from the valuation. Throws
/// InvalidNegationChoice when a negation entry is missing or inadmissible.
Element eval_prop(const PropFormula& f, const FidelStructure& s, const PropValuation& v);

/// Visits every admissible valuation exactly once, in deterministic order:
/// variable maps as an odometer (last variable fastest, carrier order), then
/// negation choices per occurrence bottom-up in carrier order. Stops early
/// when fn returns false; returns false iff stopped.
bool for_each_valuation(const PropFormula& f, const FidelStructure& s,
                        const std::function<bool(const PropValuation&)>& fn);

/// Number of admissible valuations.
uint64_t count_valuations(const PropFormula& f, const FidelStructure& s);

struct SchemaId {
  enum class Kind : uint8_t { A, G, L };
  Kind kind = Kind::A;
  int index = 1;  // A1..A10; G_n

  static SchemaId a(int i) { return {Kind::A, i}; }
  static SchemaId g(int n) { return {Kind::G, n}; }
  static SchemaId l() { return {Kind::L, 0}; }
  std::string name() const;
};

/// Axiom schema over fresh metavariables.
PropFormula schema_formula(SchemaId id);

struct SchemaCountermodel {
  PropFormula instance;
  PropValuation valuation;
  Element value;
};

struct SchemaVerdict {
  bool valid = true;
  uint64_t valuations = 0;
  std::optional<SchemaCountermodel> countermodel;
};

/// Valid iff every instance evaluates to top under every admissible
/// valuation. depth 0 instantiates metavariables with atoms; depth > 0 also
/// substitutes compound formulas built from at most `depth` connectives.
SchemaVerdict check_schema(SchemaId id, const FidelStructure& s, int depth = 0);

struct ParaconsistencyWitness {
  Element alpha, neg_alpha, beta, value;
  PropValuation valuation;
};

/// First admissible valuation with value((~a & a) -> b) below top, or
/// nothing when the structure is explosive.
std::optional<ParaconsistencyWitness> find_paraconsistency_witness(const FidelStructure& s);

}  // namespace fsv
