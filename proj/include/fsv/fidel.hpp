#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fsv/lattice.hpp"

namespace fsv {

/// An algebra together with a family N assigning to each element the set of
/// its admissible negation values. N sets are bitmasks over the carrier, so
/// carriers are capped at 64 elements.
class FidelStructure {
 public:
  static constexpr std::size_t kMaxCarrier = 64;

  /// Throws UnknownElement when a set references an element outside the
  /// carrier (or belongs to another algebra), Error when the carrier is too
  /// large or the family does not cover every element.
  static FidelStructure from_sets(Algebra algebra, const std::vector<std::vector<Element>>& neg_sets);
  static FidelStructure from_masks(Algebra algebra, std::vector<uint64_t> neg_masks);

  const Algebra& algebra() const { return algebra_; }

  uint64_t neg_mask(Element x) const;
  bool neg_admits(Element x, Element candidate) const;
  /// Candidates in ascending carrier order.
  std::vector<Element> neg_candidates(Element x) const;

 private:
  FidelStructure(Algebra algebra, std::vector<uint64_t> masks)
      : algebra_(std::move(algebra)), neg_masks_(std::move(masks)) {}

  Algebra algebra_;
  std::vector<uint64_t> neg_masks_;
};

/// Largest admissible family over an algebra: N_x = { y : x v y = top }.
FidelStructure saturate(const Algebra& algebra);

/// Empty report iff the two defining conditions hold: every x has a
/// candidate joining to top, and every candidate x' in N_x has some
/// x'' in N_{x'} below x.
ValidationReport validate_structure(const FidelStructure& s);

/// Subalgebra embedding whose N sets are pointwise included.
bool is_substructure(const FidelStructure& sub, const FidelStructure& sup,
                     std::span<const Element> embedding);

/// True iff top is an admissible negation of every element and N_top is the
/// whole carrier; precondition of the standard Leibniz negation policy.
bool admits_standard_policy(const FidelStructure& s);

}  // namespace fsv
