#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fsv/errors.hpp"

namespace fsv {

/// A carrier element of one specific algebra. The tag makes accidental
/// mixing of elements from different algebras a checked error.
struct Element {
  uint32_t index = 0;
  uint32_t algebra = 0;

  friend bool operator==(const Element&, const Element&) = default;
};

struct LawViolation {
  std::string law;
  std::string witness;
};

struct ValidationReport {
  std::vector<LawViolation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string law, std::string witness) {
    violations.push_back({std::move(law), std::move(witness)});
  }
  std::string to_string() const;
};

/// n*n row-major operation table over carrier indices.
using OpTable = std::vector<uint32_t>;

struct NoResiduum {
  uint32_t a = 0;
  uint32_t b = 0;
};

/// Relative pseudo-complement table derived from the lattice order:
/// imp(a,b) = max { c : meet(a,c) <= b }, where x <= y iff meet(x,y) = x.
/// Returns NoResiduum naming the first pair whose candidate set has no
/// maximum.
std::variant<OpTable, NoResiduum> residuum_from_order(std::size_t n, const OpTable& meet);

/// Finite generalized Heyting algebra: distributive lattice with top and
/// residuation. Immutable once built; all operations are pure.
class Algebra {
 public:
  std::size_t size() const { return carrier_.size(); }
  uint32_t id() const { return id_; }

  Element element(uint32_t index) const;
  std::optional<Element> find(std::string_view label) const;
  const std::string& label(Element e) const;

  bool leq(Element a, Element b) const;
  Element meet(Element a, Element b) const;
  Element join(Element a, Element b) const;
  Element imp(Element a, Element b) const;

  Element top() const;
  Element bottom() const;

  bool has_neg_op() const { return neg_op_.has_value(); }
  Element neg_op(Element a) const;

  /// Infimum of a finite set; empty set yields top.
  Element big_meet(std::span<const Element> xs) const;
  /// Supremum of a finite set; empty set yields bottom.
  Element big_join(std::span<const Element> xs) const;

  /// Maximal elements of a nonempty set: an antichain refining the input
  /// with the same supremum.
  std::vector<Element> refine_antichain(std::span<const Element> xs) const;

  const std::vector<std::string>& carrier() const { return carrier_; }
  const OpTable& meet_table() const { return meet_; }
  const OpTable& join_table() const { return join_; }
  const OpTable& imp_table() const { return imp_; }
  const std::optional<OpTable>& neg_op_table() const { return neg_op_; }

 private:
  friend struct AlgebraBuilder;

  uint32_t id_ = 0;
  std::vector<std::string> carrier_;
  OpTable meet_, join_, imp_;
  std::optional<OpTable> neg_op_;
  std::optional<uint32_t> top_;
  std::optional<uint32_t> bottom_;

  void check(Element e) const;
  uint32_t at(const OpTable& t, uint32_t a, uint32_t b) const { return t[a * size() + b]; }
};

struct AlgebraBuildResult {
  std::optional<Algebra> algebra;
  ValidationReport report;
  bool ok() const { return algebra.has_value() && report.ok(); }
};

/// Builds from explicit tables; imp is derived by residuation when absent.
/// Throws MalformedTables on shape or range errors; law violations land in
/// the report.
AlgebraBuildResult build_algebra_from_tables(std::vector<std::string> carrier, OpTable meet,
                                             OpTable join, std::optional<OpTable> imp,
                                             std::optional<OpTable> neg_op);

/// Builds from an order relation (any generating set of pairs; the
/// reflexive-transitive closure is taken). Meet, join and imp are derived.
AlgebraBuildResult build_algebra_from_order(std::vector<std::string> carrier,
                                            const std::vector<std::pair<uint32_t, uint32_t>>& leq,
                                            std::optional<OpTable> neg_op);

/// Checks every algebra law and reports each violation with a witness.
ValidationReport validate_algebra(const Algebra& candidate);

/// True iff the embedding commutes with meet, join and imp and maps top to
/// top. `embedding[i]` is the image of sub element i.
bool is_subalgebra(const Algebra& sub, const Algebra& sup, std::span<const Element> embedding);

/// Every finite algebra admits antichain refinements (maximal elements).
inline bool is_refinable(const Algebra&) { return true; }

/// n-element chain with min/max and the residuation implication.
Algebra chain(std::size_t n);
/// Two-element Boolean algebra (same algebra as chain(2)).
Algebra boolean2();
/// Four-element Boolean algebra with atoms p, q.
Algebra boolean4();
/// Three-element chain extended with the dual pseudo-complement unary table
/// (not0 = 1, not half = 1, not1 = 0).
Algebra h3_star();

}  // namespace fsv
