#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hors/scheme.hpp"

namespace hors {

/// `ō = o -> o`, and the transformation distributes over arrows.
Type bar_type(const Type& t);

/// Symbols of the barred scheme and the map from source symbols to them.
struct BarContext {
  /// Source name of every variable, terminal and non-terminal to its image.
  std::unordered_map<std::string, Symbol> symbol_map;
  /// η1 ... η_armax, each of type o -> o.
  std::vector<Symbol> etas;
  /// The trailing parameter δ : o.
  Symbol delta;
  /// The wait token Δ : o; an inert non-terminal.
  Symbol wait;
  /// The new start symbol I : o.
  Symbol init;
};

BarContext make_bar_context(const Scheme& g);

/// Homomorphic image of `t`. Throws SchemeError on an unmapped symbol.
Term bar_term(const BarContext& ctx, const Term& t);

/// The barred scheme: IO derivations of the result produce the value tree
/// of `g`. Its order is one more than the order of `g`.
Scheme bar_scheme(const Scheme& g);
Scheme bar_scheme(const Scheme& g, const BarContext& ctx);

}  // namespace hors
