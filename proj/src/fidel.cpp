#include "fsv/fidel.hpp"

namespace fsv {

FidelStructure FidelStructure::from_sets(Algebra algebra,
                                         const std::vector<std::vector<Element>>& neg_sets) {
  const std::size_t n = algebra.size();
  if (n > kMaxCarrier) throw Error("carrier too large for bitmask negation sets");
  if (neg_sets.size() != n) throw UnknownElement("negation family must cover every carrier element");
  std::vector<uint64_t> masks(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (Element e : neg_sets[x]) {
      if (e.algebra != algebra.id() || e.index >= n)
        throw UnknownElement("negation set references an element outside the carrier");
      masks[x] |= uint64_t{1} << e.index;
    }
  }
  return FidelStructure(std::move(algebra), std::move(masks));
}

FidelStructure FidelStructure::from_masks(Algebra algebra, std::vector<uint64_t> neg_masks) {
  const std::size_t n = algebra.size();
  if (n > kMaxCarrier) throw Error("carrier too large for bitmask negation sets");
  if (neg_masks.size() != n) throw UnknownElement("negation family must cover every carrier element");
  uint64_t valid = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
  for (uint64_t m : neg_masks)
    if (m & ~valid) throw UnknownElement("negation set references an element outside the carrier");
  return FidelStructure(std::move(algebra), std::move(neg_masks));
}

uint64_t FidelStructure::neg_mask(Element x) const {
  if (x.algebra != algebra_.id() || x.index >= algebra_.size())
    throw UnknownElement("element outside the carrier");
  return neg_masks_[x.index];
}

bool FidelStructure::neg_admits(Element x, Element candidate) const {
  if (candidate.algebra != algebra_.id() || candidate.index >= algebra_.size())
    throw UnknownElement("element outside the carrier");
  return (neg_mask(x) >> candidate.index) & 1;
}

std::vector<Element> FidelStructure::neg_candidates(Element x) const {
  uint64_t m = neg_mask(x);
  std::vector<Element> out;
  for (uint32_t i = 0; i < algebra_.size(); ++i)
    if ((m >> i) & 1) out.push_back(algebra_.element(i));
  return out;
}

FidelStructure saturate(const Algebra& algebra) {
  const std::size_t n = algebra.size();
  std::vector<uint64_t> masks(n, 0);
  for (uint32_t x = 0; x < n; ++x)
    for (uint32_t y = 0; y < n; ++y)
      if (algebra.join(algebra.element(x), algebra.element(y)) == algebra.top())
        masks[x] |= uint64_t{1} << y;
  return FidelStructure::from_masks(algebra, std::move(masks));
}

ValidationReport validate_structure(const FidelStructure& s) {
  ValidationReport report;
  const Algebra& a = s.algebra();
  for (uint32_t x = 0; x < a.size(); ++x) {
    Element ex = a.element(x);
    bool has_complementing = false;
    for (Element cand : s.neg_candidates(ex))
      if (a.join(ex, cand) == a.top()) {
        has_complementing = true;
        break;
      }
    if (!has_complementing)
      report.add("condition (i)", "(x=" + a.label(ex) + ")");
    for (Element cand : s.neg_candidates(ex)) {
      bool has_below = false;
      for (Element second : s.neg_candidates(cand))
        if (a.leq(second, ex)) {
          has_below = true;
          break;
        }
      if (!has_below)
        report.add("condition (ii)", "(x=" + a.label(ex) + ", x'=" + a.label(cand) + ")");
    }
  }
  return report;
}

bool is_substructure(const FidelStructure& sub, const FidelStructure& sup,
                     std::span<const Element> embedding) {
  if (!is_subalgebra(sub.algebra(), sup.algebra(), embedding)) return false;
  for (uint32_t x = 0; x < sub.algebra().size(); ++x) {
    Element ex = sub.algebra().element(x);
    for (Element cand : sub.neg_candidates(ex))
      if (!sup.neg_admits(embedding[x], embedding[cand.index])) return false;
  }
  return true;
}

bool admits_standard_policy(const FidelStructure& s) {
  const Algebra& a = s.algebra();
  Element top = a.top();
  for (uint32_t x = 0; x < a.size(); ++x)
    if (!s.neg_admits(a.element(x), top)) return false;
  uint64_t full = a.size() == 64 ? ~uint64_t{0} : (uint64_t{1} << a.size()) - 1;
  return s.neg_mask(top) == full;
}

}  // namespace fsv
