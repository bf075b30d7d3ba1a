#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsv/evaluator.hpp"
#include "fsv/proplogic.hpp"

namespace fsv {

struct ParsedFormula {
  FormulaPtr formula;
  std::vector<std::pair<std::string, NameId>> lets;
};

/// Parses an optional `let <name> = <term>;` preamble followed by one
/// formula. Name literals are interned into the store; element labels must
/// belong to the store's algebra. Unicode connective aliases are accepted.
ParsedFormula parse_formula_input(std::string_view text, NameStore& store);

/// Single formula, no preamble.
FormulaPtr parse_formula(std::string_view text, NameStore& store);

/// Propositional formula over `~ & | ->`; variables are declared by first
/// occurrence.
PropFormula parse_prop_formula(std::string_view text);

/// Canonical text; parsing it back yields a structurally equal AST.
std::string pretty_print(const FormulaPtr& f, const NameStore& store);
std::string pretty_print_prop(const PropFormula& f);

struct LoadResult {
  std::optional<Algebra> algebra;
  ValidationReport algebra_report;
  std::optional<FidelStructure> structure;
  ValidationReport structure_report;
  std::string origin;  // file path or builtin name
};

/// Loads a structure definition from a JSON file, or by builtin name when no
/// such file exists. Throws Error for unknown inputs, MalformedTables /
/// UnknownElement for structurally bad files.
LoadResult load_structure_spec(const std::string& path_or_builtin);

std::vector<std::string> builtin_structure_names();

/// Structure definition serialized in the input file format.
std::string serialize_structure(const FidelStructure& s);

/// Command driver. Exit codes: 0 all checks valid, 1 counterexample or
/// witness found, 2 usage/parse/input error, 3 resource ceiling hit.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsv
