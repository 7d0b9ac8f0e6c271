#pragma once

// Turning an IO scheme into one whose unrestricted value tree is the IO value
// tree: every symbol is annotated with the semantics of its arguments (G′),
// then every annotated rule whose head is judged q⊥ rewrites to Void (G″).
//
// An annotated symbol F^{σ⃗} is rendered `F#i` where i is the 1-based index of
// σ⃗ in sigma_tuples(type of F). Ground symbols have a single empty annotation
// and keep their name.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hors/intersection.hpp"
#include "hors/scheme.hpp"

namespace hors {

using SigmaTuple = std::vector<ConjunctiveMapping>;

/// Number of annotation tuples (σ1, ..., σk) for τ = τ1 -> ... -> τk -> o.
/// Throws ComplexityLimit past kMaxEnumeration.
std::uint64_t nbvar(const Type& t);

/// Every annotation tuple of `t` in canonical order: mixed radix with σ1 most
/// significant, each component in conjunction order.
std::vector<SigmaTuple> sigma_tuples(const Type& t);

/// 0-based position of `tuple` in sigma_tuples(t).
std::uint64_t sigma_index(const Type& t, const SigmaTuple& tuple);

/// τ⁺ = (τ1⁺)^{nbvar(τ1)} -> ... -> (τk⁺)^{nbvar(τk)} -> o.
Type plus_type(const Type& t);

/// F^{σ⃗}: name `F#i` (or `F` when F is ground) with type τ⁺.
Symbol annotate(const Symbol& base, const SigmaTuple& tuple);

/// t^{+σ1..σk} under the variable environment `venv`. `ann` must match the
/// remaining argument types of `t`.
Term plus_term(SemanticsTable& table, const Term& t, const Environment& venv,
               const SigmaTuple& ann = {});

struct AnnotatedRule {
  Symbol base;
  SigmaTuple annotation;
  /// Index of the rule in the labelled scheme.
  std::size_t rule;
};

/// G′ together with the data needed to build G″ and to read terms back.
struct LabelledScheme {
  Scheme scheme;
  Fixpoint fixpoint;
  std::vector<AnnotatedRule> rules;
  /// Annotated name to source symbol, for every annotated symbol declared.
  std::unordered_map<std::string, Symbol> base_of;
};

/// Builds G′. Throws ComplexityLimit when the annotation space is too large.
LabelledScheme label_scheme(const Scheme& g);

struct SelfCorrectingScheme {
  Scheme scheme;
  /// Name of the added Void non-terminal.
  std::string void_name;
  /// Annotated non-terminals whose rule now rewrites to Void.
  std::vector<std::string> voided;
};

/// Builds G″ from G′.
SelfCorrectingScheme self_correct(const LabelledScheme& lg);

/// G″ directly. With `prune`, keeps only what is reachable from the start.
Scheme io_to_oi(const Scheme& g, bool prune = false);

/// Drops annotations and collapses duplicated arguments, recovering the
/// source term of a labelled term.
Term unlabel(const LabelledScheme& lg, const Term& t);

/// Plain-text size report of a transformation.
struct TransformReport {
  std::size_t source_rules = 0;
  std::size_t labelled_rules = 0;
  std::size_t output_rules = 0;
  std::vector<std::pair<Type, std::uint64_t>> nbvar_table;
  std::vector<std::string> voided;
  std::vector<std::string> unreachable;
};

TransformReport make_report(const Scheme& g, const LabelledScheme& lg,
                            const SelfCorrectingScheme& sc, const Scheme& output);
std::string format_report(const TransformReport& r);

}  // namespace hors
