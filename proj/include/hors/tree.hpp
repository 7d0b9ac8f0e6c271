#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hors/term.hpp"

namespace hors {

/// A finite ranked tree over terminals plus ⊥ leaves.
class PartialTree {
 public:
  /// ⊥
  PartialTree() = default;

  static PartialTree bottom() { return PartialTree(); }
  /// Requires a terminal label and exactly arity(label) children.
  static PartialTree node(Symbol label, std::vector<PartialTree> children = {});

  bool is_bottom() const noexcept { return !label_.has_value(); }
  const Symbol& label() const;
  std::span<const PartialTree> children() const noexcept { return children_; }

  /// Number of levels; ⊥ has depth 0.
  std::size_t depth() const;
  /// Number of non-⊥ nodes.
  std::size_t size() const;

  /// Applicative form, e.g. `a (b ⊥ ⊥) ⊥ c`.
  std::string to_string() const;
  /// Preorder, one node per line, two spaces of indentation per level.
  std::string to_indented() const;

  friend bool operator==(const PartialTree& a, const PartialTree& b);

 private:
  std::optional<Symbol> label_;
  std::vector<PartialTree> children_;
};

std::ostream& operator<<(std::ostream& os, const PartialTree& t);

/// Non-terminal-headed subterms become ⊥. `t` must be ground and closed.
PartialTree bottom_transform(const Term& t);
/// Same, keeping only the first `depth` levels (deeper nodes become ⊥).
PartialTree bottom_transform(const Term& t, std::size_t depth);

PartialTree truncate(const PartialTree& t, std::size_t depth);

/// t1 ⊑ t2.
bool tree_leq(const PartialTree& t1, const PartialTree& t2);

/// Least upper bound; throws IncompatibleLabels with the clashing path.
PartialTree tree_lub(std::span<const PartialTree> trees);
PartialTree tree_lub(const PartialTree& a, const PartialTree& b);

}  // namespace hors
