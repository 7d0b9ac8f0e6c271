#pragma once

#include <string>
#include <string_view>

#include "hors/scheme.hpp"
#include "hors/tree.hpp"

namespace hors {

/// Parses the line-oriented scheme format:
///
///     terminal a : o -> o -> o
///     nonterminal F : (o -> o) -> o -> o
///     var x : o
///     inert Delta           -- a non-terminal without a rule
///     start S
///     rule F f x = f (f x)
///
/// `--` starts a comment. Throws ParseError on syntax errors, undeclared
/// symbols and ill-typed rule bodies.
Scheme parse_scheme(std::string_view text);

/// Inverse of parse_scheme. Declarations are sorted by name within each kind;
/// rules follow the declaration order of their non-terminals.
std::string render(const Scheme& g);

Type parse_type(std::string_view text);

/// A closed or open term over the symbols declared in `g`.
Term parse_term(std::string_view text, const Scheme& g);

/// Applicative tree syntax with `⊥` for bottom, e.g. `a (b ⊥ ⊥) ⊥ c`.
PartialTree parse_tree(std::string_view text, const Scheme& g);

}  // namespace hors
