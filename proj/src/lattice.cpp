#include "fsv/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>

namespace fsv {

namespace {

std::atomic<uint32_t> g_next_algebra_id{1};

std::string witness1(const std::vector<std::string>& c, uint32_t a) {
  return "(a=" + c[a] + ")";
}
std::string witness2(const std::vector<std::string>& c, uint32_t a, uint32_t b) {
  return "(a=" + c[a] + ", b=" + c[b] + ")";
}
std::string witness3(const std::vector<std::string>& c, uint32_t a, uint32_t b, uint32_t x) {
  return "(a=" + c[a] + ", b=" + c[b] + ", c=" + c[x] + ")";
}

std::string reduced_fraction(std::size_t num, std::size_t den) {
  std::size_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace

std::string ValidationReport::to_string() const {
  if (ok()) return "valid";
  std::ostringstream os;
  for (const auto& v : violations) os << v.law << " " << v.witness << "\n";
  return os.str();
}

std::variant<OpTable, NoResiduum> residuum_from_order(std::size_t n, const OpTable& meet) {
  auto leq = [&](uint32_t a, uint32_t b) { return meet[a * n + b] == a; };
  OpTable imp(n * n);
  for (uint32_t a = 0; a < n; ++a) {
    for (uint32_t b = 0; b < n; ++b) {
      std::vector<uint32_t> candidates;
      for (uint32_t c = 0; c < n; ++c)
        if (leq(meet[a * n + c], b)) candidates.push_back(c);
      // the set always contains bottom candidates; a maximum may still fail
      std::optional<uint32_t> max;
      for (uint32_t c : candidates) {
        bool dominates = true;
        for (uint32_t d : candidates)
          if (!leq(d, c)) {
            dominates = false;
            break;
          }
        if (dominates) {
          max = c;
          break;
        }
      }
      if (!max) return NoResiduum{a, b};
      imp[a * n + b] = *max;
    }
  }
  return imp;
}

Element Algebra::element(uint32_t index) const {
  if (index >= size()) throw UnknownElement("element index out of range");
  return Element{index, id_};
}

std::optional<Element> Algebra::find(std::string_view label) const {
  for (uint32_t i = 0; i < size(); ++i)
    if (carrier_[i] == label) return Element{i, id_};
  return std::nullopt;
}

const std::string& Algebra::label(Element e) const {
  check(e);
  return carrier_[e.index];
}

void Algebra::check(Element e) const {
  if (e.algebra != id_) throw MixedAlgebras("element belongs to a different algebra");
  if (e.index >= size()) throw UnknownElement("element index out of range");
}

bool Algebra::leq(Element a, Element b) const {
  check(a);
  check(b);
  return at(meet_, a.index, b.index) == a.index;
}

Element Algebra::meet(Element a, Element b) const {
  check(a);
  check(b);
  return Element{at(meet_, a.index, b.index), id_};
}

Element Algebra::join(Element a, Element b) const {
  check(a);
  check(b);
  return Element{at(join_, a.index, b.index), id_};
}

Element Algebra::imp(Element a, Element b) const {
  check(a);
  check(b);
  return Element{at(imp_, a.index, b.index), id_};
}

Element Algebra::top() const {
  if (!top_) throw Error("algebra has no greatest element");
  return Element{*top_, id_};
}

Element Algebra::bottom() const {
  if (!bottom_) throw Error("algebra has no least element");
  return Element{*bottom_, id_};
}

Element Algebra::neg_op(Element a) const {
  check(a);
  if (!neg_op_) throw Error("algebra has no negation table");
  return Element{(*neg_op_)[a.index], id_};
}

Element Algebra::big_meet(std::span<const Element> xs) const {
  Element acc = top();
  for (Element x : xs) acc = meet(acc, x);
  return acc;
}

Element Algebra::big_join(std::span<const Element> xs) const {
  Element acc = bottom();
  for (Element x : xs) acc = join(acc, x);
  return acc;
}

std::vector<Element> Algebra::refine_antichain(std::span<const Element> xs) const {
  if (xs.empty()) throw Error("refine_antichain needs a nonempty set");
  std::vector<uint32_t> idx;
  for (Element x : xs) {
    check(x);
    idx.push_back(x.index);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  std::vector<Element> out;
  for (uint32_t m : idx) {
    bool maximal = true;
    for (uint32_t s : idx)
      if (s != m && at(meet_, m, s) == m) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(Element{m, id_});
  }
  return out;
}

struct AlgebraBuilder {
  static Algebra make(std::vector<std::string> carrier, OpTable meet, OpTable join, OpTable imp,
                      std::optional<OpTable> neg_op) {
    Algebra a;
    a.id_ = g_next_algebra_id.fetch_add(1);
    a.carrier_ = std::move(carrier);
    a.meet_ = std::move(meet);
    a.join_ = std::move(join);
    a.imp_ = std::move(imp);
    a.neg_op_ = std::move(neg_op);
    const std::size_t n = a.carrier_.size();
    for (uint32_t t = 0; t < n; ++t) {
      bool greatest = true;
      for (uint32_t x = 0; x < n && greatest; ++x) greatest = a.meet_[x * n + t] == x;
      if (greatest) {
        a.top_ = t;
        break;
      }
    }
    for (uint32_t b = 0; b < n; ++b) {
      bool least = true;
      for (uint32_t x = 0; x < n && least; ++x) least = a.meet_[x * n + b] == b;
      if (least) {
        a.bottom_ = b;
        break;
      }
    }
    return a;
  }
};

namespace {

void check_table(const OpTable& t, std::size_t n, const char* what) {
  if (t.size() != n * n) throw MalformedTables(std::string(what) + " table has wrong size");
  for (uint32_t v : t)
    if (v >= n) throw MalformedTables(std::string(what) + " table entry outside the carrier");
}

}  // namespace

AlgebraBuildResult build_algebra_from_tables(std::vector<std::string> carrier, OpTable meet,
                                             OpTable join, std::optional<OpTable> imp,
                                             std::optional<OpTable> neg_op) {
  const std::size_t n = carrier.size();
  if (n == 0) throw MalformedTables("empty carrier");
  check_table(meet, n, "meet");
  check_table(join, n, "join");
  if (imp) check_table(*imp, n, "imp");
  if (neg_op) {
    if (neg_op->size() != n) throw MalformedTables("neg_op table has wrong size");
    for (uint32_t v : *neg_op)
      if (v >= n) throw MalformedTables("neg_op table entry outside the carrier");
  }

  AlgebraBuildResult result;
  if (!imp) {
    auto r = residuum_from_order(n, meet);
    if (auto* fail = std::get_if<NoResiduum>(&r)) {
      result.report.add("residuation", "no residuum for " + witness2(carrier, fail->a, fail->b));
      return result;
    }
    imp = std::get<OpTable>(std::move(r));
  }
  result.algebra =
      AlgebraBuilder::make(std::move(carrier), std::move(meet), std::move(join), std::move(*imp),
                           std::move(neg_op));
  result.report = validate_algebra(*result.algebra);
  return result;
}

AlgebraBuildResult build_algebra_from_order(std::vector<std::string> carrier,
                                            const std::vector<std::pair<uint32_t, uint32_t>>& leq,
                                            std::optional<OpTable> neg_op) {
  const std::size_t n = carrier.size();
  if (n == 0) throw MalformedTables("empty carrier");
  AlgebraBuildResult result;
  std::vector<char> rel(n * n, 0);
  for (uint32_t i = 0; i < n; ++i) rel[i * n + i] = 1;
  for (auto [a, b] : leq) {
    if (a >= n || b >= n) throw MalformedTables("leq pair outside the carrier");
    rel[a * n + b] = 1;
  }
  for (uint32_t k = 0; k < n; ++k)
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j)
        if (rel[i * n + k] && rel[k * n + j]) rel[i * n + j] = 1;
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j)
      if (rel[i * n + j] && rel[j * n + i])
        result.report.add("order antisymmetry", witness2(carrier, i, j));
  if (!result.report.ok()) return result;

  OpTable meet(n * n), join(n * n);
  for (uint32_t a = 0; a < n; ++a) {
    for (uint32_t b = 0; b < n; ++b) {
      std::optional<uint32_t> inf, sup;
      for (uint32_t c = 0; c < n; ++c) {
        if (rel[c * n + a] && rel[c * n + b]) {
          bool greatest = true;
          for (uint32_t d = 0; d < n && greatest; ++d)
            if (rel[d * n + a] && rel[d * n + b]) greatest = rel[d * n + c];
          if (greatest) {
            inf = c;
            break;
          }
        }
      }
      for (uint32_t c = 0; c < n; ++c) {
        if (rel[a * n + c] && rel[b * n + c]) {
          bool least = true;
          for (uint32_t d = 0; d < n && least; ++d)
            if (rel[a * n + d] && rel[b * n + d]) least = rel[c * n + d];
          if (least) {
            sup = c;
            break;
          }
        }
      }
      if (!inf) result.report.add("lattice infimum", "no infimum for " + witness2(carrier, a, b));
      if (!sup) result.report.add("lattice supremum", "no supremum for " + witness2(carrier, a, b));
      if (!inf || !sup) return result;
      meet[a * n + b] = *inf;
      join[a * n + b] = *sup;
    }
  }
  return build_algebra_from_tables(std::move(carrier), std::move(meet), std::move(join),
                                   std::nullopt, std::move(neg_op));
}

ValidationReport validate_algebra(const Algebra& a) {
  ValidationReport report;
  const std::size_t n = a.size();
  const auto& c = a.carrier();
  const OpTable& meet = a.meet_table();
  const OpTable& join = a.join_table();
  const OpTable& imp = a.imp_table();
  auto m = [&](uint32_t x, uint32_t y) { return meet[x * n + y]; };
  auto j = [&](uint32_t x, uint32_t y) { return join[x * n + y]; };
  auto le = [&](uint32_t x, uint32_t y) { return m(x, y) == x; };

  for (uint32_t x = 0; x < n; ++x) {
    if (m(x, x) != x) report.add("meet idempotent", witness1(c, x));
    if (j(x, x) != x) report.add("join idempotent", witness1(c, x));
    for (uint32_t y = 0; y < n; ++y) {
      if (m(x, y) != m(y, x)) report.add("meet commutative", witness2(c, x, y));
      if (j(x, y) != j(y, x)) report.add("join commutative", witness2(c, x, y));
      if (m(x, j(x, y)) != x) report.add("absorption", witness2(c, x, y));
      if (j(x, m(x, y)) != x) report.add("absorption", witness2(c, x, y));
      for (uint32_t z = 0; z < n; ++z) {
        if (m(m(x, y), z) != m(x, m(y, z))) report.add("meet associative", witness3(c, x, y, z));
        if (j(j(x, y), z) != j(x, j(y, z))) report.add("join associative", witness3(c, x, y, z));
        if (m(x, j(y, z)) != j(m(x, y), m(x, z))) report.add("distributivity", witness3(c, x, y, z));
      }
    }
  }

  bool has_top = false;
  for (uint32_t t = 0; t < n && !has_top; ++t) {
    bool greatest = true;
    for (uint32_t x = 0; x < n && greatest; ++x) greatest = le(x, t);
    has_top = greatest;
  }
  if (!has_top) report.add("greatest element", "none");

  // finite lattices always have a least element; verify the fold is one
  uint32_t bot = 0;
  for (uint32_t x = 1; x < n; ++x) bot = m(bot, x);
  for (uint32_t x = 0; x < n; ++x)
    if (!le(bot, x)) report.add("least element", witness2(c, bot, x));

  for (uint32_t x = 0; x < n; ++x)
    for (uint32_t y = 0; y < n; ++y)
      for (uint32_t z = 0; z < n; ++z) {
        bool lhs = le(m(x, z), y);
        bool rhs = le(z, imp[x * n + y]);
        if (lhs != rhs) report.add("residuation", witness3(c, x, y, z));
      }

  return report;
}

bool is_subalgebra(const Algebra& sub, const Algebra& sup, std::span<const Element> embedding) {
  const std::size_t n = sub.size();
  if (embedding.size() != n) throw Error("embedding must cover the whole subalgebra carrier");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      if (embedding[i] == embedding[k]) throw Error("embedding must be injective");

  auto img = [&](Element e) { return embedding[e.index]; };
  for (uint32_t x = 0; x < n; ++x) {
    for (uint32_t y = 0; y < n; ++y) {
      Element ex = sub.element(x), ey = sub.element(y);
      if (!(img(sub.meet(ex, ey)) == sup.meet(img(ex), img(ey)))) return false;
      if (!(img(sub.join(ex, ey)) == sup.join(img(ex), img(ey)))) return false;
      if (!(img(sub.imp(ex, ey)) == sup.imp(img(ex), img(ey)))) return false;
    }
  }
  return img(sub.top()) == sup.top();
}

Algebra chain(std::size_t n) {
  if (n == 0) throw MalformedTables("empty carrier");
  std::vector<std::string> carrier(n);
  if (n == 1) {
    carrier[0] = "1";
  } else {
    for (std::size_t i = 0; i < n; ++i) carrier[i] = reduced_fraction(i, n - 1);
  }
  OpTable meet(n * n), join(n * n);
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b) {
      meet[a * n + b] = std::min(a, b);
      join[a * n + b] = std::max(a, b);
    }
  auto result = build_algebra_from_tables(std::move(carrier), std::move(meet), std::move(join),
                                          std::nullopt, std::nullopt);
  return *result.algebra;
}

Algebra boolean2() { return chain(2); }

Algebra boolean4() {
  std::vector<std::string> carrier{"0", "p", "q", "1"};
  std::vector<std::pair<uint32_t, uint32_t>> leq{{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  auto result = build_algebra_from_order(std::move(carrier), leq, std::nullopt);
  return *result.algebra;
}

Algebra h3_star() {
  Algebra base = chain(3);
  auto result = build_algebra_from_tables(base.carrier(), base.meet_table(), base.join_table(),
                                          base.imp_table(), OpTable{2, 2, 0});
  return *result.algebra;
}

}  // namespace fsv
