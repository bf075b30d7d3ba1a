#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsv/frontend.hpp"

namespace fsv {

namespace {

using nlohmann::json;

uint32_t resolve_index(const json& v, const std::vector<std::string>& carrier,
                       const char* what) {
  if (v.is_number_unsigned() || v.is_number_integer()) {
    auto idx = v.get<int64_t>();
    if (idx < 0 || idx >= static_cast<int64_t>(carrier.size()))
      throw MalformedTables(std::string(what) + " index outside the carrier");
    return static_cast<uint32_t>(idx);
  }
  if (v.is_string()) {
    const auto label = v.get<std::string>();
    for (uint32_t i = 0; i < carrier.size(); ++i)
      if (carrier[i] == label) return i;
    throw UnknownElement(std::string(what) + " references unknown label '" + label + "'");
  }
  throw MalformedTables(std::string(what) + " must be an index or a label");
}

OpTable read_table(const json& t, std::size_t n, const char* what) {
  if (!t.is_array() || t.size() != n)
    throw MalformedTables(std::string(what) + " table has wrong size");
  OpTable out;
  out.reserve(n * n);
  for (const auto& row : t) {
    if (!row.is_array() || row.size() != n)
      throw MalformedTables(std::string(what) + " table has wrong size");
    for (const auto& v : row) {
      auto idx = v.get<int64_t>();
      if (idx < 0 || idx >= static_cast<int64_t>(n))
        throw MalformedTables(std::string(what) + " table entry outside the carrier");
      out.push_back(static_cast<uint32_t>(idx));
    }
  }
  return out;
}

LoadResult from_json(const json& doc, std::string origin) {
  LoadResult result;
  result.origin = std::move(origin);
  if (!doc.is_object() || !doc.contains("carrier"))
    throw MalformedTables("structure definition needs a carrier");
  std::vector<std::string> carrier = doc["carrier"].get<std::vector<std::string>>();

  std::optional<OpTable> neg_op;
  if (doc.contains("neg_op")) {
    const auto& t = doc["neg_op"];
    if (!t.is_array() || t.size() != carrier.size())
      throw MalformedTables("neg_op table has wrong size");
    OpTable neg;
    for (const auto& v : t) neg.push_back(resolve_index(v, carrier, "neg_op"));
    neg_op = std::move(neg);
  }

  AlgebraBuildResult built;
  if (doc.contains("meet") && doc.contains("join")) {
    OpTable meet = read_table(doc["meet"], carrier.size(), "meet");
    OpTable join = read_table(doc["join"], carrier.size(), "join");
    std::optional<OpTable> imp;
    if (doc.contains("imp")) imp = read_table(doc["imp"], carrier.size(), "imp");
    built = build_algebra_from_tables(carrier, std::move(meet), std::move(join), std::move(imp),
                                      std::move(neg_op));
  } else if (doc.contains("leq")) {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    for (const auto& p : doc["leq"]) {
      if (!p.is_array() || p.size() != 2) throw MalformedTables("leq entries must be pairs");
      pairs.emplace_back(resolve_index(p[0], carrier, "leq"), resolve_index(p[1], carrier, "leq"));
    }
    built = build_algebra_from_order(carrier, pairs, std::move(neg_op));
  } else {
    throw MalformedTables("structure definition needs leq or meet/join tables");
  }

  result.algebra = built.algebra;
  result.algebra_report = built.report;
  if (!result.algebra || !result.algebra_report.ok()) return result;

  const Algebra& alg = *result.algebra;
  FidelStructure structure = [&] {
    if (!doc.contains("N")) return saturate(alg);
    std::vector<std::vector<Element>> sets(alg.size());
    for (const auto& [label, members] : doc["N"].items()) {
      uint32_t x = resolve_index(json(label), alg.carrier(), "N");
      for (const auto& m : members)
        sets[x].push_back(alg.element(resolve_index(m, alg.carrier(), "N")));
    }
    return FidelStructure::from_sets(alg, sets);
  }();
  result.structure_report = validate_structure(structure);
  result.structure = std::move(structure);
  return result;
}

struct Builtin {
  const char* name;
  FidelStructure (*make)();
};

const Builtin kBuiltins[] = {
    {"m3", [] { return saturate(chain(3)); }},
    {"h3star", [] { return saturate(h3_star()); }},
    {"chain2", [] { return saturate(chain(2)); }},
    {"chain3", [] { return saturate(chain(3)); }},
    {"chain4", [] { return saturate(chain(4)); }},
    {"boolean2",
     [] {
       Algebra a = boolean2();
       // classical complement family
       return FidelStructure::from_sets(a, {{a.element(1)}, {a.element(0)}});
     }},
    {"boolean4", [] { return saturate(boolean4()); }},
};

}  // namespace

std::vector<std::string> builtin_structure_names() {
  std::vector<std::string> out;
  for (const auto& b : kBuiltins) out.push_back(b.name);
  return out;
}

LoadResult load_structure_spec(const std::string& path_or_builtin) {
  if (std::filesystem::exists(path_or_builtin)) {
    std::ifstream in(path_or_builtin);
    if (!in) throw Error("cannot read '" + path_or_builtin + "'");
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw MalformedTables("bad JSON in '" + path_or_builtin + "': " + e.what());
    }
    return from_json(doc, path_or_builtin);
  }
  std::string key = path_or_builtin;
  if (key.size() > 5 && key.ends_with(".json")) key = key.substr(0, key.size() - 5);
  for (const auto& b : kBuiltins) {
    if (key == b.name) {
      LoadResult result;
      result.origin = b.name;
      FidelStructure s = b.make();
      result.algebra = s.algebra();
      result.structure_report = validate_structure(s);
      result.structure = std::move(s);
      return result;
    }
  }
  throw Error("no such file or builtin structure: '" + path_or_builtin + "'");
}

std::string serialize_structure(const FidelStructure& s) {
  const Algebra& a = s.algebra();
  const std::size_t n = a.size();
  json doc;
  doc["carrier"] = a.carrier();
  auto table = [&](const OpTable& t) {
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < n; ++j) row.push_back(t[i * n + j]);
      rows.push_back(std::move(row));
    }
    return rows;
  };
  doc["meet"] = table(a.meet_table());
  doc["join"] = table(a.join_table());
  doc["imp"] = table(a.imp_table());
  if (a.has_neg_op()) doc["neg_op"] = *a.neg_op_table();
  json family = json::object();
  for (uint32_t x = 0; x < n; ++x) {
    json members = json::array();
    for (Element e : s.neg_candidates(a.element(x))) members.push_back(a.label(e));
    family[a.carrier()[x]] = std::move(members);
  }
  doc["N"] = std::move(family);
  return doc.dump(2);
}

}  // namespace fsv
