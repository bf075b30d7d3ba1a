#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsv/evaluator.hpp"

namespace fsv {

inline constexpr uint64_t kDefaultSampleSeed = 1729;

/// Deterministic family of formulas with one free variable "x": atomic
/// shapes over every parameter in universe(K), closed under single and
/// double negation, binary connectives and bounded quantifiers up to the
/// given connective budget. Duplicates are pruned; order is stable across
/// runs.
std::vector<FormulaPtr> generate_templates(int depth, unsigned K, EvalContext& ctx);

/// Small deterministic family with free variables "x" and "y" for the
/// relation-indexed axiom checks.
std::vector<FormulaPtr> generate_binary_templates(int depth, unsigned K, EvalContext& ctx);

/// Seeded random template with free variable "x" and parameters drawn from
/// universe(K).
FormulaPtr random_template(EvalContext& ctx, unsigned K, int depth, uint64_t& rng_state);

struct LeibnizCounterexample {
  NameId u = 0, v = 0;
  FormulaPtr phi;
  Element equality, phi_u, phi_v;
};

struct LeibnizResult {
  bool valid = true;
  uint64_t checked = 0;
  std::optional<LeibnizCounterexample> counterexample;
  std::optional<uint64_t> seed;
};

/// Exhaustive transport check over all pairs of universe(K) and all
/// templates, in deterministic order (pairs row-major, templates in family
/// order); the first failure is reported.
LeibnizResult check_leibniz(EvalContext& ctx, std::span<const FormulaPtr> templates, unsigned K);

/// Sampled variant: `samples` random (u, v, template) triples.
LeibnizResult check_leibniz_sampled(EvalContext& ctx, unsigned K, int depth, std::size_t samples,
                                    uint64_t seed);

enum class Axiom : uint8_t {
  Extensionality,
  Pairing,
  Collection,
  Powerset,
  Separation,
  EmptySet,
  Union,
  Infinity,
  Induction,
};

std::span<const Axiom> all_axioms();
const char* axiom_name(Axiom a);
std::optional<Axiom> axiom_by_name(std::string_view name);

struct AxiomOptions {
  int depth = 1;
  std::size_t samples = 0;  // 0 = exhaustive positions
  uint64_t seed = kDefaultSampleSeed;
  int infinity_bound = 8;
};

struct AxiomCheckResult {
  enum class Verdict : uint8_t { Valid, ValidUpToBound, Counterexample };

  std::string axiom;
  Verdict verdict = Verdict::Valid;
  unsigned rank = 0;
  std::string policy;
  uint64_t checks = 0;
  std::optional<uint64_t> seed;  // set when sampling was used
  int bound = 0;                 // infinity unfolding depth
  std::string note;              // approximation direction of this verifier
  std::vector<std::pair<std::string, std::string>> witness;
  std::vector<std::pair<std::string, std::string>> values;

  // Raw counterexample data, kept so reports can be re-verified: two closed
  // formulas whose values must reproduce the stored elements.
  struct Raw {
    std::optional<NameId> u, z, w;
    FormulaPtr phi;
    FormulaPtr lhs_formula, rhs_formula;
    std::optional<Element> lhs, rhs;
  } raw;

  const char* verdict_name() const;
};

/// Runs one axiom verifier at the given rank bound. Set parameters range
/// over universe(K); the transport-sensitive verifiers additionally check
/// the universal name over universe(K), one rank above the window.
AxiomCheckResult check_axiom(Axiom axiom, EvalContext& ctx, unsigned K,
                             const AxiomOptions& opts = {});

/// Re-evaluates a stored counterexample; true iff the reported values still
/// hold.
bool reverify(const AxiomCheckResult& r, EvalContext& ctx);

/// Brute-force search for a name w among universe(search_rank) satisfying
/// ||z in w <-> (z in u and phi(z))|| = top for every z in universe(K).
std::optional<NameId> separation_witness_search(EvalContext& ctx, const FormulaPtr& phi, NameId u,
                                                unsigned K, unsigned search_rank);

struct MixingOutcome {
  uint64_t families = 0;   // generated families meeting the precondition
  uint64_t skipped = 0;    // draws rejected by the precondition
  uint64_t checked = 0;    // individual inequalities asserted
  std::optional<std::string> failure;
  bool ok() const { return !failure.has_value(); }
};

/// Random families (a_i, u_i) with pairwise a_i meet a_j <= ||u_i ~ u_j||;
/// asserts a_i <= ||u_i ~ mixture|| for each member. Runs until `trials`
/// precondition-satisfying families have been checked.
MixingOutcome check_mixing(EvalContext& ctx, std::size_t trials, uint64_t seed);

/// Witness construction for ||exists x psi(x)|| = top at rank K: refine the
/// attained values into an antichain, pick a name per refined value, and
/// blend them. Returns a name with ||psi(u)|| = top, or nothing when the
/// precondition fails.
std::optional<NameId> maximum_principle_witness(EvalContext& ctx, const FormulaPtr& psi,
                                                unsigned K);

}  // namespace fsv
