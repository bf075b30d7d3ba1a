#include <chrono>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsv/frontend.hpp"
#include "fsv/zfcheck.hpp"

namespace fsv {

namespace {

using nlohmann::json;

constexpr int kExitValid = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCeiling = 3;

json pairs_to_json(const std::vector<std::pair<std::string, std::string>>& kv) {
  json out = json::object();
  for (const auto& [k, v] : kv) out[k] = v;
  return out;
}

struct CommandContext {
  std::string structure_arg;
  std::string format = "text";
  uint64_t ceiling = 1'000'000;
  uint64_t seed = kDefaultSampleSeed;
  bool seed_given = false;

  bool json_mode() const { return format == "json"; }
};

LoadResult load_or_fail(const CommandContext& cc, std::ostream& err, bool need_valid_algebra) {
  LoadResult lr = load_structure_spec(cc.structure_arg);
  if (need_valid_algebra && (!lr.algebra || !lr.algebra_report.ok())) {
    err << "algebra in '" << lr.origin << "' is invalid:\n" << lr.algebra_report.to_string();
    throw Error("invalid algebra");
  }
  return lr;
}

NegationPolicy parse_policy(const std::string& p) {
  if (p == "standard") return NegationPolicy::StandardLeibniz;
  if (p == "algebraic") return NegationPolicy::AlgebraicOp;
  throw Error("unknown policy '" + p + "'");
}

json axiom_result_json(const AxiomCheckResult& r) {
  json doc;
  doc["axiom"] = r.axiom;
  doc["verdict"] = r.verdict_name();
  doc["rank"] = r.rank;
  doc["policy"] = r.policy;
  doc["checks"] = r.checks;
  doc["note"] = r.note;
  if (r.seed) doc["seed"] = *r.seed;
  if (r.bound > 0) doc["bound"] = r.bound;
  if (!r.witness.empty()) doc["witness"] = pairs_to_json(r.witness);
  if (!r.values.empty()) doc["values"] = pairs_to_json(r.values);
  return doc;
}

void print_axiom_result_text(const AxiomCheckResult& r, std::ostream& out) {
  out << r.axiom << ": " << r.verdict_name();
  if (r.verdict == AxiomCheckResult::Verdict::ValidUpToBound) out << " (bound " << r.bound << ")";
  out << " [" << r.checks << " checks]";
  out << "\n";
  if (r.verdict == AxiomCheckResult::Verdict::Counterexample) {
    for (const auto& [k, v] : r.witness) out << "  " << k << " = " << v << "\n";
    for (const auto& [k, v] : r.values) out << "  " << k << " = " << v << "\n";
  }
}

int cmd_check_algebra(const CommandContext& cc, std::ostream& out, std::ostream& err) {
  LoadResult lr = load_structure_spec(cc.structure_arg);
  (void)err;
  bool valid = lr.algebra.has_value() && lr.algebra_report.ok();
  if (cc.json_mode()) {
    json doc;
    doc["command"] = "check-algebra";
    doc["structure"] = lr.origin;
    doc["valid"] = valid;
    json vs = json::array();
    for (const auto& v : lr.algebra_report.violations)
      vs.push_back({{"law", v.law}, {"witness", v.witness}});
    doc["violations"] = std::move(vs);
    out << doc.dump() << "\n";
  } else {
    out << "algebra " << lr.origin << ": " << (valid ? "valid" : "invalid") << "\n";
    if (!valid) out << lr.algebra_report.to_string();
  }
  return valid ? kExitValid : kExitCounterexample;
}

int cmd_saturate(const CommandContext& cc, std::ostream& out, std::ostream& err) {
  LoadResult lr = load_or_fail(cc, err, true);
  out << serialize_structure(saturate(*lr.algebra)) << "\n";
  return kExitValid;
}

int cmd_check_structure(const CommandContext& cc, std::ostream& out, std::ostream& err) {
  LoadResult lr = load_or_fail(cc, err, true);
  bool valid = lr.structure.has_value() && lr.structure_report.ok();
  if (cc.json_mode()) {
    json doc;
    doc["command"] = "check-structure";
    doc["structure"] = lr.origin;
    doc["valid"] = valid;
    json vs = json::array();
    for (const auto& v : lr.structure_report.violations)
      vs.push_back({{"law", v.law}, {"witness", v.witness}});
    doc["violations"] = std::move(vs);
    out << doc.dump() << "\n";
  } else {
    out << "structure " << lr.origin << ": " << (valid ? "valid" : "invalid") << "\n";
    if (!valid) out << lr.structure_report.to_string();
  }
  return valid ? kExitValid : kExitCounterexample;
}

std::vector<SchemaId> parse_schema_list(const std::string& schema, bool all) {
  std::vector<SchemaId> out;
  if (all || schema.empty()) {
    for (int i = 1; i <= 10; ++i) out.push_back(SchemaId::a(i));
    out.push_back(SchemaId::l());
    return out;
  }
  std::string s = schema;
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "l") {
    out.push_back(SchemaId::l());
    return out;
  }
  if (s.size() >= 2 && s[0] == 'a') {
    out.push_back(SchemaId::a(std::stoi(s.substr(1))));
    return out;
  }
  if (s.size() >= 2 && s[0] == 'g') {
    out.push_back(SchemaId::g(std::stoi(s.substr(1))));
    return out;
  }
  throw Error("unknown schema '" + schema + "' (use a1..a10, gN, or l)");
}

int cmd_prop_axioms(const CommandContext& cc, const std::string& schema, bool all, int depth,
                    std::ostream& out, std::ostream& err) {
  LoadResult lr = load_or_fail(cc, err, true);
  if (!lr.structure_report.ok())
    err << "note: structure fails its defining conditions; checking anyway\n";
  const FidelStructure& s = *lr.structure;
  int exit_code = kExitValid;
  for (SchemaId id : parse_schema_list(schema, all)) {
    SchemaVerdict v = check_schema(id, s, depth);
    if (!v.valid) exit_code = kExitCounterexample;
    if (cc.json_mode()) {
      json doc;
      doc["command"] = "prop-axioms";
      doc["schema"] = id.name();
      doc["verdict"] = v.valid ? "valid" : "countermodel";
      doc["valuations"] = v.valuations;
      if (v.countermodel) {
        json cm;
        cm["instance"] = pretty_print_prop(v.countermodel->instance);
        json assignment = json::object();
        const auto& inst = v.countermodel->instance;
        const Algebra& alg = s.algebra();
        for (int i = 0; i < inst.num_vars(); ++i)
          assignment[inst.var_names()[i]] = alg.label(v.countermodel->valuation.vars[i]);
        for (const auto& [node, val] : v.countermodel->valuation.negations)
          assignment["~#" + std::to_string(node)] = alg.label(val);
        cm["assignment"] = std::move(assignment);
        cm["value"] = s.algebra().label(v.countermodel->value);
        doc["countermodel"] = std::move(cm);
      }
      out << doc.dump() << "\n";
    } else {
      out << id.name() << ": " << (v.valid ? "valid" : "countermodel") << " (" << v.valuations
          << " valuations)\n";
      if (v.countermodel) {
        const Algebra& alg = s.algebra();
        out << "  instance: " << pretty_print_prop(v.countermodel->instance) << "\n";
        const auto& inst = v.countermodel->instance;
        for (int i = 0; i < inst.num_vars(); ++i)
          out << "  v(" << inst.var_names()[i]
              << ") = " << alg.label(v.countermodel->valuation.vars[i]) << "\n";
        out << "  value = " << alg.label(v.countermodel->value) << "\n";
      }
    }
  }
  return exit_code;
}

int cmd_paraconsistent(const CommandContext& cc, std::ostream& out, std::ostream& err) {
  LoadResult lr = load_or_fail(cc, err, true);
  if (!lr.structure_report.ok())
    err << "note: structure fails its defining conditions; checking anyway\n";
  const FidelStructure& s = *lr.structure;
  const Algebra& alg = s.algebra();
  auto witness = find_paraconsistency_witness(s);
  if (cc.json_mode()) {
    json doc;
    doc["command"] = "paraconsistent";
    doc["structure"] = lr.origin;
    doc["formula"] = "(~a & a) -> b";
    if (witness) {
      doc["witness"] = {{"alpha", alg.label(witness->alpha)},
                        {"neg_alpha", alg.label(witness->neg_alpha)},
                        {"beta", alg.label(witness->beta)}};
      doc["value"] = alg.label(witness->value);
    } else {
      doc["witness"] = nullptr;
    }
    out << doc.dump() << "\n";
  } else if (witness) {
    out << "paraconsistency witness for (~a & a) -> b:\n";
    out << "  v(a) = " << alg.label(witness->alpha) << "\n";
    out << "  v(~a) = " << alg.label(witness->neg_alpha) << "\n";
    out << "  v(b) = " << alg.label(witness->beta) << "\n";
    out << "  value = " << alg.label(witness->value) << "\n";
  } else {
    out << "no witness: the structure is explosive\n";
  }
  return witness ? kExitCounterexample : kExitValid;
}

int cmd_universe(const CommandContext& cc, unsigned rank, bool stats, std::ostream& out,
                 std::ostream& err) {
  LoadResult lr = load_or_fail(cc, err, true);
  NameStore store(*lr.algebra, cc.ceiling);
  auto counts = store.rank_counts(rank);
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  if (cc.json_mode()) {
    json doc;
    doc["command"] = "universe";
    doc["structure"] = lr.origin;
    doc["rank"] = rank;
    doc["total"] = total;
    if (stats) {
      json rows = json::array();
      std::size_t cumulative = 0;
      for (unsigned r = 1; r <= rank; ++r) {
        cumulative += counts[r - 1];
        rows.push_back({{"rank", r}, {"count", counts[r - 1]}, {"cumulative", cumulative}});
      }
      doc["counts"] = std::move(rows);
    }
    out << doc.dump() << "\n";
  } else if (stats) {
    std::size_t cumulative = 0;
    for (unsigned r = 1; r <= rank; ++r) {
      cumulative += counts[r - 1];
      out << "rank " << r << ": " << counts[r - 1] << " (cumulative " << cumulative << ")\n";
    }
  } else {
    out << total << "\n";
  }
  return kExitValid;
}

int cmd_eval(const CommandContext& cc, unsigned rank, const std::string& policy,
             const std::string& formula, std::ostream& out, std::ostream& err) {
  LoadResult lr = load_or_fail(cc, err, true);
  NameStore store(lr.structure->algebra(), cc.ceiling);
  ParsedFormula parsed = parse_formula_input(formula, store);
  EvalContext ctx(*lr.structure, store, parse_policy(policy), rank);
  Element value = ctx.eval(parsed.formula);
  if (cc.json_mode()) {
    json doc;
    doc["command"] = "eval";
    doc["formula"] = pretty_print(parsed.formula, store);
    doc["value"] = ctx.algebra().label(value);
    out << doc.dump() << "\n";
  } else {
    out << ctx.algebra().label(value) << "\n";
  }
  return kExitValid;
}

int cmd_leibniz(const CommandContext& cc, unsigned rank, int depth, const std::string& policy,
                std::size_t samples, bool samples_given, std::ostream& out, std::ostream& err) {
  LoadResult lr = load_or_fail(cc, err, true);
  NameStore store(lr.structure->algebra(), cc.ceiling);
  EvalContext ctx(*lr.structure, store, parse_policy(policy), rank);
  // the exhaustive family over the rank-3 parameter set is out of reach
  if (!samples_given && rank >= 3) samples = 10000;
  LeibnizResult r;
  if (samples > 0) {
    r = check_leibniz_sampled(ctx, rank, depth, samples, cc.seed);
  } else {
    auto templates = generate_templates(depth, rank, ctx);
    r = check_leibniz(ctx, templates, rank);
  }
  if (cc.json_mode()) {
    json doc;
    doc["command"] = "leibniz";
    doc["structure"] = lr.origin;
    doc["rank"] = rank;
    doc["depth"] = depth;
    doc["policy"] = policy;
    doc["verdict"] = r.valid ? "valid" : "counterexample";
    doc["checked"] = r.checked;
    if (r.seed) doc["seed"] = *r.seed;
    if (r.counterexample) {
      const auto& cx = *r.counterexample;
      doc["u"] = store.to_string(cx.u);
      doc["v"] = store.to_string(cx.v);
      doc["template"] = pretty_print(cx.phi, store);
      doc["values"] = {{"eq", ctx.algebra().label(cx.equality)},
                       {"phi_u", ctx.algebra().label(cx.phi_u)},
                       {"phi_v", ctx.algebra().label(cx.phi_v)}};
    }
    out << doc.dump() << "\n";
  } else if (r.valid) {
    out << "leibniz: valid (" << r.checked << " checks)\n";
  } else {
    const auto& cx = *r.counterexample;
    out << "leibniz: counterexample (after " << r.checked << " checks)\n";
    out << "  u = " << store.to_string(cx.u) << "\n";
    out << "  v = " << store.to_string(cx.v) << "\n";
    out << "  template = " << pretty_print(cx.phi, store) << "\n";
    out << "  value(u eq v) = " << ctx.algebra().label(cx.equality) << "\n";
    out << "  value(phi(u)) = " << ctx.algebra().label(cx.phi_u) << "\n";
    out << "  value(phi(v)) = " << ctx.algebra().label(cx.phi_v) << "\n";
  }
  return r.valid ? kExitValid : kExitCounterexample;
}

int cmd_zf(const CommandContext& cc, unsigned rank, const std::string& axiom, int depth,
           std::size_t samples, bool samples_given, const std::string& policy, int nmax,
           std::ostream& out, std::ostream& err) {
  LoadResult lr = load_or_fail(cc, err, true);
  NameStore store(lr.structure->algebra(), cc.ceiling);
  EvalContext ctx(*lr.structure, store, parse_policy(policy), rank);

  AxiomOptions opts;
  opts.depth = depth;
  opts.seed = cc.seed;
  opts.infinity_bound = nmax;
  // exhaustive position loops get expensive above rank 2
  opts.samples = samples_given ? samples : (rank >= 3 ? 2000 : 0);

  std::vector<Axiom> axioms;
  if (axiom.empty()) {
    axioms.assign(all_axioms().begin(), all_axioms().end());
  } else {
    auto a = axiom_by_name(axiom);
    if (!a) throw Error("unknown axiom '" + axiom + "'");
    axioms.push_back(*a);
  }

  int exit_code = kExitValid;
  for (Axiom a : axioms) {
    AxiomCheckResult r = check_axiom(a, ctx, rank, opts);
    if (r.verdict == AxiomCheckResult::Verdict::Counterexample) exit_code = kExitCounterexample;
    if (cc.json_mode())
      out << axiom_result_json(r).dump() << "\n";
    else
      print_axiom_result_text(r, out);
  }
  return exit_code;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"workbench for Fidel-structure valued models"};
  app.name("fsv");
  CommandContext cc;

  app.add_option("--format", cc.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--ceiling", cc.ceiling, "universe size ceiling")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", cc.seed, "sampling seed")->capture_default_str();
  app.require_subcommand(1);

  auto add_structure_arg = [&](CLI::App* sub) {
    sub->add_option("structure", cc.structure_arg, "structure file or builtin name")->required();
    sub->fallthrough();
  };

  auto* sc_check_algebra = app.add_subcommand("check-algebra", "validate the algebra laws");
  add_structure_arg(sc_check_algebra);

  auto* sc_saturate = app.add_subcommand("saturate", "print the saturated structure");
  add_structure_arg(sc_saturate);

  auto* sc_check_structure = app.add_subcommand("check-structure", "validate the negation family");
  add_structure_arg(sc_check_structure);

  std::string schema;
  bool all_schemas = false;
  int prop_depth = 0;
  auto* sc_prop = app.add_subcommand("prop-axioms", "check propositional axiom schemas");
  add_structure_arg(sc_prop);
  sc_prop->add_option("--schema", schema, "a1..a10, gN, or l");
  sc_prop->add_flag("--all", all_schemas, "check A1..A10 and L");
  sc_prop->add_option("--depth", prop_depth, "compound instantiation depth")
      ->capture_default_str();

  auto* sc_para = app.add_subcommand("paraconsistent", "search for a non-explosion witness");
  add_structure_arg(sc_para);

  unsigned rank = 2;
  bool stats = false;
  auto* sc_universe = app.add_subcommand("universe", "enumerate the name universe");
  add_structure_arg(sc_universe);
  sc_universe->add_option("--rank", rank, "rank bound")->capture_default_str();
  sc_universe->add_flag("--stats", stats, "print per-rank counts");

  std::string policy = "standard";
  std::string formula;
  auto* sc_eval = app.add_subcommand("eval", "evaluate a closed formula");
  add_structure_arg(sc_eval);
  sc_eval->add_option("--rank", rank, "rank bound")->capture_default_str();
  sc_eval->add_option("--policy", policy, "negation policy")
      ->check(CLI::IsMember({"standard", "algebraic"}));
  sc_eval->add_option("formula", formula, "formula text")->required();

  int depth = 1;
  std::size_t samples = 0;
  auto* sc_leibniz = app.add_subcommand("leibniz", "check the indiscernibility law");
  add_structure_arg(sc_leibniz);
  sc_leibniz->add_option("--rank", rank, "rank bound")->capture_default_str();
  sc_leibniz->add_option("--depth", depth, "template depth")->capture_default_str();
  sc_leibniz->add_option("--policy", policy, "negation policy")
      ->check(CLI::IsMember({"standard", "algebraic"}));
  auto* leibniz_samples_opt =
      sc_leibniz->add_option("--samples", samples, "sampled triples (0 = exhaustive)");

  std::string axiom;
  int nmax = 8;
  auto* sc_zf = app.add_subcommand("zf", "check the set-theoretic axioms");
  add_structure_arg(sc_zf);
  sc_zf->add_option("--rank", rank, "rank bound")->capture_default_str();
  sc_zf->add_option("--axiom", axiom, "single axiom name");
  sc_zf->add_option("--depth", depth, "template depth")->capture_default_str();
  auto* samples_opt = sc_zf->add_option("--samples", samples, "sampled positions");
  sc_zf->add_option("--policy", policy, "negation policy")
      ->check(CLI::IsMember({"standard", "algebraic"}));
  sc_zf->add_option("--nmax", nmax, "infinity unfolding bound")->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("fsv");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitValid;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  cc.seed_given = seed_opt->count() > 0;

  try {
    if (sc_check_algebra->parsed()) return cmd_check_algebra(cc, out, err);
    if (sc_saturate->parsed()) return cmd_saturate(cc, out, err);
    if (sc_check_structure->parsed()) return cmd_check_structure(cc, out, err);
    if (sc_prop->parsed()) return cmd_prop_axioms(cc, schema, all_schemas, prop_depth, out, err);
    if (sc_para->parsed()) return cmd_paraconsistent(cc, out, err);
    if (sc_universe->parsed()) return cmd_universe(cc, rank, stats, out, err);
    if (sc_eval->parsed()) return cmd_eval(cc, rank, policy, formula, out, err);
    if (sc_leibniz->parsed())
      return cmd_leibniz(cc, rank, depth, policy, samples, leibniz_samples_opt->count() > 0, out,
                         err);
    if (sc_zf->parsed())
      return cmd_zf(cc, rank, axiom, depth, samples, samples_opt->count() > 0, policy, nmax, out,
                    err);
  } catch (const UniverseTooLarge& e) {
    err << "resource ceiling: " << e.what() << "\n";
    return kExitCeiling;
  } catch (const ParseError& e) {
    err << "parse error at " << e.span().begin << ".." << e.span().end << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScopeError& e) {
    err << "scope error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fsv
