#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsv/lattice.hpp"

namespace fsv {

using NameId = uint32_t;

/// Hereditarily finite set literal, kept in canonical (sorted, deduplicated)
/// form.
struct Hf {
  std::vector<Hf> elems;

  static Hf empty() { return {}; }
  /// von Neumann natural.
  static Hf nat(unsigned n);
  /// x united with {x}.
  Hf succ() const;

  void canonicalize();
  bool contains(const Hf& x) const;
  std::string to_string() const;

  friend bool operator==(const Hf&, const Hf&);
  friend bool operator<(const Hf&, const Hf&);
};

struct NameEntry {
  NameId child = 0;
  uint32_t value = 0;  // element index in the owning store's algebra

  friend bool operator==(const NameEntry&, const NameEntry&) = default;
};

/// Interning store for names: hereditarily built finite maps from earlier
/// names into algebra elements. Structurally equal names share one id, and
/// ids never move once assigned. Insertions are serialized; reads of
/// existing names need no lock.
class NameStore {
 public:
  explicit NameStore(Algebra algebra, uint64_t ceiling = 1'000'000);

  const Algebra& algebra() const { return algebra_; }
  uint64_t ceiling() const { return ceiling_; }
  void set_ceiling(uint64_t c) { ceiling_ = c; }

  /// Interns the name with the given graph. Entries may come in any order;
  /// duplicate children are rejected, as are values from foreign algebras.
  NameId make_name(std::vector<std::pair<NameId, Element>> entries);

  NameId empty_name() const { return 0; }

  std::span<const NameEntry> entries(NameId id) const;
  unsigned rank(NameId id) const;
  std::size_t name_count() const;

  /// All names of rank <= k, in deterministic order: by rank, then
  /// lexicographically on the sorted (child id, value index) entry list.
  /// Throws UniverseTooLarge when the projected level size exceeds the
  /// ceiling.
  const std::vector<NameId>& universe(unsigned k);

  /// Count of names of exact rank r among universe(k), r = 1..k.
  std::vector<std::size_t> rank_counts(unsigned k);

  /// Canonical image of a hereditarily finite set: every value is top.
  NameId hat_embed(const Hf& h);

  /// Name whose domain is the whole of universe(k), all values top.
  NameId universal_name(unsigned k);

  /// Name literal in the input syntax, e.g. "{{}: 1/2}".
  std::string to_string(NameId id) const;

 private:
  struct NameData {
    std::vector<NameEntry> entries;  // sorted by child id
    unsigned rank = 1;
  };

  Algebra algebra_;
  uint64_t ceiling_;
  // deque keeps element references stable, so reads of published names need
  // no lock; the atomic count publishes them
  std::deque<NameData> names_;
  std::atomic<std::size_t> published_{0};
  std::unordered_map<std::string, NameId> intern_;  // packed entry bytes -> id
  // deques again: universe() hands out references that must survive later
  // enumeration of higher ranks
  std::deque<std::vector<NameId>> per_rank_;    // per_rank_[k] = names of exact rank k
  std::deque<std::vector<NameId>> cumulative_;  // cumulative_[k] = universe(k)
  mutable std::mutex mutex_;

  NameId intern_locked(std::vector<NameEntry> entries);
  void enumerate_locked(unsigned k);
  const NameData& data(NameId id) const;
  static std::string pack(const std::vector<NameEntry>& entries);
};

/// Weighted blend of names: the domain is the union of the input domains and
/// the value at x is the join over i of a_i meet ||x in u_i||, with the
/// membership values supplied by the caller.
NameId mixture(NameStore& store, std::span<const std::pair<Element, NameId>> weighted,
               const std::function<Element(NameId, NameId)>& membership);

}  // namespace fsv
