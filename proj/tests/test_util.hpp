#pragma once

#include <cstdint>
#include <vector>

#include "fsv/evaluator.hpp"
#include "fsv/names.hpp"

namespace fsv::testutil {

// Reference truth-value computation: direct recursion on the defining
// clauses, no memoization. Kept independent of EvalContext so the two code
// paths can be compared.
inline uint32_t ref_equal(NameStore& st, NameId u, NameId v);

inline uint32_t ref_member(NameStore& st, NameId u, NameId v) {
  const Algebra& a = st.algebra();
  uint32_t acc = a.bottom().index;
  for (const NameEntry& e : st.entries(v)) {
    uint32_t term = a.meet(a.element(e.value), a.element(ref_equal(st, e.child, u))).index;
    acc = a.join(a.element(acc), a.element(term)).index;
  }
  return acc;
}

inline uint32_t ref_equal(NameStore& st, NameId u, NameId v) {
  const Algebra& a = st.algebra();
  uint32_t acc = a.top().index;
  for (const NameEntry& e : st.entries(u)) {
    uint32_t term = a.imp(a.element(e.value), a.element(ref_member(st, e.child, v))).index;
    acc = a.meet(a.element(acc), a.element(term)).index;
  }
  for (const NameEntry& e : st.entries(v)) {
    uint32_t term = a.imp(a.element(e.value), a.element(ref_member(st, e.child, u))).index;
    acc = a.meet(a.element(acc), a.element(term)).index;
  }
  return acc;
}

inline bool has_negation(const FormulaPtr& f) {
  if (!f) return false;
  if (f->kind == Formula::Kind::Not) return true;
  return has_negation(f->a) || has_negation(f->b);
}

// Transports a name across an algebra embedding (sub element index ->
// sup element), preserving the hereditary graph.
inline NameId transport_name(NameStore& sub, NameStore& sup, std::span<const Element> embedding,
                             NameId id) {
  std::vector<std::pair<NameId, Element>> entries;
  for (const NameEntry& e : sub.entries(id))
    entries.emplace_back(transport_name(sub, sup, embedding, e.child), embedding[e.value]);
  return sup.make_name(std::move(entries));
}

}  // namespace fsv::testutil
