#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hors/scheme.hpp"
#include "hors/tree.hpp"

namespace hors {

enum class Policy { unrestricted, oi, io };

std::string_view to_string(Policy p);
/// Accepts `oi`, `io`, `any` and `unrestricted`.
std::optional<Policy> parse_policy(std::string_view text);

/// A ground full application `F t1 ... tk` of a non-terminal that has a rule.
struct RedexInfo {
  Position position;
  Symbol nonterminal;
  /// No redex strictly above it.
  bool is_oi = false;
  /// No redex inside its arguments.
  bool is_io = false;
};

struct DerivationStep {
  Term before;
  RedexInfo redex;
  Term after;
};

struct DerivationTrace {
  Term start;
  std::vector<DerivationStep> steps;
  bool exhausted_budget = false;

  const Term& final_term() const { return steps.empty() ? start : steps.back().after; }
};

struct EvalBudget {
  std::size_t max_steps = 10000;
  std::size_t max_term_size = 100000;
  /// Levels of the value tree to materialize.
  std::size_t depth = 5;
};

/// Picks the next redex among `candidates` (all redexes of the term), or
/// nullopt to stop the derivation.
using Chooser =
    std::function<std::optional<Position>(const Term& term, std::span<const RedexInfo> candidates)>;

bool is_redex(const Scheme& g, const Term& t);

/// Every redex of `t` in preorder, with OI/IO classification.
std::vector<RedexInfo> redexes(const Scheme& g, const Term& t);

/// Rewrites the redex at `p`. Throws NotARedex.
Term step(const Scheme& g, const Term& t, const Position& p);

/// Without a chooser, runs the fair scheduler of the policy: parallel
/// outermost for `oi`/`unrestricted`, parallel innermost for `io`. A chooser
/// picking a redex the policy forbids raises PolicyViolation.
DerivationTrace derive(const Scheme& g, const Term& t0, Policy policy, const EvalBudget& budget,
                       const Chooser& chooser = {});

/// Like derive() with the fair scheduler but keeps only the redex records.
struct StepLog {
  std::vector<RedexInfo> redexes;
  Term final_term;
  bool exhausted_budget = false;
};
StepLog derive_log(const Scheme& g, const Term& t0, Policy policy, const EvalBudget& budget);

/// Trace dump: `<index> <position> <nonterminal> OI=<0|1> IO=<0|1>` per step.
std::string format_trace(std::span<const RedexInfo> steps);
std::string format_trace(const DerivationTrace& trace);

struct Evaluation {
  PartialTree tree;
  std::size_t steps = 0;
  bool exhausted_budget = false;
};

/// Depth-truncated value tree prefix of the term `t0`. Unresolved nodes are
/// ⊥, so the result is always below the true value tree.
Evaluation evaluate(const Scheme& g, const Term& t0, Policy policy, const EvalBudget& budget);
/// Same, starting from the start symbol.
Evaluation evaluate(const Scheme& g, Policy policy, const EvalBudget& budget);

PartialTree value_tree(const Scheme& g, Policy policy, const EvalBudget& budget);

}  // namespace hors
