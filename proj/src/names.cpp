#include "fsv/names.hpp"

#include <algorithm>
#include <map>

namespace fsv {

Hf Hf::nat(unsigned n) {
  Hf x = Hf::empty();
  for (unsigned i = 0; i < n; ++i) x = x.succ();
  return x;
}

Hf Hf::succ() const {
  Hf out = *this;
  out.elems.push_back(*this);
  out.canonicalize();
  return out;
}

void Hf::canonicalize() {
  for (Hf& e : elems) e.canonicalize();
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
}

bool Hf::contains(const Hf& x) const {
  return std::find(elems.begin(), elems.end(), x) != elems.end();
}

std::string Hf::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ", ";
    out += elems[i].to_string();
  }
  return out + "}";
}

bool operator==(const Hf& x, const Hf& y) { return x.elems == y.elems; }

bool operator<(const Hf& x, const Hf& y) {
  return std::lexicographical_compare(x.elems.begin(), x.elems.end(), y.elems.begin(),
                                      y.elems.end());
}

NameStore::NameStore(Algebra algebra, uint64_t ceiling)
    : algebra_(std::move(algebra)), ceiling_(ceiling) {
  NameData empty;
  names_.push_back(empty);
  published_.store(1);
  intern_.emplace(pack(empty.entries), 0);
  per_rank_.resize(2);
  per_rank_[1] = {0};
  cumulative_.resize(2);
  cumulative_[1] = {0};
}

std::string NameStore::pack(const std::vector<NameEntry>& entries) {
  std::string key;
  key.reserve(entries.size() * 8);
  for (const NameEntry& e : entries) {
    for (int i = 0; i < 4; ++i) key.push_back(static_cast<char>((e.child >> (8 * i)) & 0xff));
    for (int i = 0; i < 4; ++i) key.push_back(static_cast<char>((e.value >> (8 * i)) & 0xff));
  }
  return key;
}

const NameStore::NameData& NameStore::data(NameId id) const {
  if (id >= published_.load(std::memory_order_acquire))
    throw UnknownElement("unknown name id");
  return names_[id];
}

NameId NameStore::intern_locked(std::vector<NameEntry> entries) {
  std::string key = pack(entries);
  auto it = intern_.find(key);
  if (it != intern_.end()) return it->second;
  NameData nd;
  nd.entries = std::move(entries);
  unsigned rank = 1;
  for (const NameEntry& e : nd.entries) rank = std::max(rank, names_[e.child].rank + 1);
  nd.rank = rank;
  NameId id = static_cast<NameId>(names_.size());
  names_.push_back(std::move(nd));
  published_.store(names_.size(), std::memory_order_release);
  intern_.emplace(std::move(key), id);
  return id;
}

NameId NameStore::make_name(std::vector<std::pair<NameId, Element>> entries) {
  std::vector<NameEntry> es;
  es.reserve(entries.size());
  for (auto& [child, value] : entries) {
    if (value.algebra != algebra_.id()) throw MixedAlgebras("name value from a different algebra");
    if (value.index >= algebra_.size()) throw UnknownElement("name value outside the carrier");
    if (child >= name_count()) throw UnknownElement("unknown child name id");
    es.push_back(NameEntry{child, value.index});
  }
  std::sort(es.begin(), es.end(),
            [](const NameEntry& x, const NameEntry& y) { return x.child < y.child; });
  for (std::size_t i = 1; i < es.size(); ++i)
    if (es[i].child == es[i - 1].child) throw Error("duplicate child in name entries");
  std::lock_guard<std::mutex> lock(mutex_);
  return intern_locked(std::move(es));
}

std::span<const NameEntry> NameStore::entries(NameId id) const { return data(id).entries; }

unsigned NameStore::rank(NameId id) const { return data(id).rank; }

std::size_t NameStore::name_count() const {
  return published_.load(std::memory_order_acquire);
}

void NameStore::enumerate_locked(unsigned k) {
  for (unsigned level = static_cast<unsigned>(per_rank_.size()); level <= k; ++level) {
    const std::vector<NameId> prev = cumulative_[level - 1];
    const std::size_t m = prev.size();
    const uint64_t digits = algebra_.size() + 1;
    uint64_t projected = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (projected > ceiling_ / digits) {
        throw UniverseTooLarge("projected universe size at rank " + std::to_string(level) +
                               " exceeds ceiling " + std::to_string(ceiling_));
      }
      projected *= digits;
    }

    std::vector<NameId> batch;
    std::vector<uint32_t> slot(m, 0);  // 0 = absent, d > 0 = value index d-1
    while (true) {
      std::vector<NameEntry> es;
      unsigned rank = 1;
      for (std::size_t i = 0; i < m; ++i)
        if (slot[i]) {
          es.push_back(NameEntry{prev[i], slot[i] - 1});
          rank = std::max(rank, names_[prev[i]].rank + 1);
        }
      if (rank == level) {
        std::sort(es.begin(), es.end(),
                  [](const NameEntry& x, const NameEntry& y) { return x.child < y.child; });
        batch.push_back(intern_locked(std::move(es)));
      }
      std::size_t i = 0;
      while (i < m && ++slot[i] == digits) slot[i++] = 0;
      if (i == m) break;
    }
    std::sort(batch.begin(), batch.end(), [&](NameId x, NameId y) {
      const auto& ex = names_[x].entries;
      const auto& ey = names_[y].entries;
      return std::lexicographical_compare(
          ex.begin(), ex.end(), ey.begin(), ey.end(), [](const NameEntry& p, const NameEntry& q) {
            return p.child != q.child ? p.child < q.child : p.value < q.value;
          });
    });
    per_rank_.push_back(batch);
    std::vector<NameId> cum = cumulative_[level - 1];
    cum.insert(cum.end(), batch.begin(), batch.end());
    cumulative_.push_back(std::move(cum));
  }
}

const std::vector<NameId>& NameStore::universe(unsigned k) {
  if (k == 0) {
    static const std::vector<NameId> empty;
    return empty;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  enumerate_locked(k);
  return cumulative_[k];
}

std::vector<std::size_t> NameStore::rank_counts(unsigned k) {
  std::lock_guard<std::mutex> lock(mutex_);
  enumerate_locked(k);
  std::vector<std::size_t> out;
  for (unsigned r = 1; r <= k; ++r) out.push_back(per_rank_[r].size());
  return out;
}

NameId NameStore::hat_embed(const Hf& h) {
  Element top = algebra_.top();
  std::vector<std::pair<NameId, Element>> entries;
  for (const Hf& e : h.elems) entries.emplace_back(hat_embed(e), top);
  return make_name(std::move(entries));
}

NameId NameStore::universal_name(unsigned k) {
  const std::vector<NameId>& u = universe(k);
  Element top = algebra_.top();
  std::vector<std::pair<NameId, Element>> entries;
  entries.reserve(u.size());
  for (NameId id : u) entries.emplace_back(id, top);
  return make_name(std::move(entries));
}

std::string NameStore::to_string(NameId id) const {
  auto es = entries(id);
  if (es.empty()) return "{}";
  std::string out = "{";
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (i) out += ", ";
    out += to_string(es[i].child);
    out += ": ";
    out += algebra_.carrier()[es[i].value];
  }
  return out + "}";
}

NameId mixture(NameStore& store, std::span<const std::pair<Element, NameId>> weighted,
               const std::function<Element(NameId, NameId)>& membership) {
  if (weighted.empty()) throw Error("mixture needs a nonempty family");
  const Algebra& a = store.algebra();
  std::map<NameId, bool> dom;
  for (const auto& [weight, name] : weighted) {
    (void)weight;
    for (const NameEntry& e : store.entries(name)) dom[e.child] = true;
  }
  std::vector<std::pair<NameId, Element>> entries;
  for (const auto& [x, unused] : dom) {
    (void)unused;
    Element value = a.bottom();
    for (const auto& [weight, name] : weighted)
      value = a.join(value, a.meet(weight, membership(x, name)));
    entries.emplace_back(x, value);
  }
  return store.make_name(std::move(entries));
}

}  // namespace fsv
