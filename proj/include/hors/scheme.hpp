#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hors/term.hpp"

namespace hors {

/// `lhs params... = body`
struct Rule {
  Symbol lhs;
  std::vector<Symbol> params;
  Term body;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Diagnostic {
  std::string location;
  std::string message;

  std::string to_string() const { return location + ": " + message; }
};

/// A higher-order recursion scheme: declared terminals, non-terminals and
/// variables, one rule per non-terminal and a start symbol.
///
/// The container accepts anything that type checks; the remaining
/// well-formedness conditions are reported by validate().
class Scheme {
 public:
  /// Throws SchemeError if the name is already declared.
  void declare(const Symbol& symbol);
  void add_rule(Rule rule);
  void set_start(std::string name) { start_ = std::move(name); }
  /// Declares a non-terminal that deliberately has no rule.
  void mark_inert(const std::string& name);

  const Symbol* find(std::string_view name) const;
  /// True if `symbol` is declared here with the same kind and type.
  bool declares(const Symbol& symbol) const;

  const std::vector<Symbol>& terminals() const noexcept { return terminals_; }
  const std::vector<Symbol>& nonterminals() const noexcept { return nonterminals_; }
  const std::vector<Symbol>& variables() const noexcept { return variables_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }

  /// First rule for the non-terminal, or nullptr.
  const Rule* rule_for(std::string_view nonterminal) const;
  bool is_inert(std::string_view name) const;
  const std::vector<std::string>& inert() const noexcept { return inert_; }

  const std::string& start_name() const noexcept { return start_; }
  /// Throws SchemeError if the start symbol is not a declared non-terminal.
  const Symbol& start() const;

  /// `base` if unused, otherwise `base'`, `base''`, ...
  std::string fresh_name(std::string base) const;

  friend bool operator==(const Scheme& a, const Scheme& b);

 private:
  std::vector<Symbol> terminals_;
  std::vector<Symbol> nonterminals_;
  std::vector<Symbol> variables_;
  std::unordered_map<std::string, Symbol> by_name_;
  std::vector<Rule> rules_;
  std::unordered_map<std::string, std::size_t> rule_index_;
  std::vector<std::string> inert_;
  std::unordered_set<std::string> inert_set_;
  std::string start_;
};

/// Empty when the scheme is well formed.
std::vector<Diagnostic> validate(const Scheme& g);

/// Throws SchemeError listing the diagnostics when validate() is not empty.
void require_valid(const Scheme& g);

/// Maximum order over the non-terminals.
std::size_t scheme_order(const Scheme& g);

/// G_t: a fresh start symbol S' with the rule S' = t.
Scheme with_start(const Scheme& g, const Term& t);

/// Keeps only non-terminals reachable from the start symbol.
Scheme prune_unreachable(const Scheme& g);

}  // namespace hors
