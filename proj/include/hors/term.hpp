#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hors/type.hpp"

namespace hors {

enum class SymbolKind { terminal, nonterminal, variable };

std::string_view to_string(SymbolKind kind);

/// A typed name. Cheap to copy.
class Symbol {
 public:
  Symbol(std::string name, SymbolKind kind, Type type);

  const std::string& name() const noexcept { return data_->name; }
  SymbolKind kind() const noexcept { return data_->kind; }
  const Type& type() const noexcept { return data_->type; }

  bool is_terminal() const noexcept { return kind() == SymbolKind::terminal; }
  bool is_nonterminal() const noexcept { return kind() == SymbolKind::nonterminal; }
  bool is_variable() const noexcept { return kind() == SymbolKind::variable; }

  friend bool operator==(const Symbol& a, const Symbol& b) noexcept;
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) noexcept;

 private:
  struct Data {
    std::string name;
    SymbolKind kind;
    Type type;
  };
  std::shared_ptr<const Data> data_;
};

/// Path of 1-based argument indices from the root of a term or tree.
class Position {
 public:
  Position() = default;
  Position(std::initializer_list<std::size_t> path) : path_(path) {}
  explicit Position(std::vector<std::size_t> path) : path_(std::move(path)) {}

  const std::vector<std::size_t>& path() const noexcept { return path_; }
  bool is_root() const noexcept { return path_.empty(); }
  std::size_t depth() const noexcept { return path_.size(); }
  Position child(std::size_t index) const;

  /// `ε` for the root, dot-separated indices otherwise.
  std::string to_string() const;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;

 private:
  std::vector<std::size_t> path_;
};

/// An applicative term `head t1 ... tm`, always well typed: construction
/// checks every argument against the head's type.
class Term {
 public:
  explicit Term(Symbol symbol);

  /// `f args...`; when `f` is itself an application its arguments are
  /// extended. Throws TypeMismatch naming the offending argument.
  static Term apply(const Term& f, std::vector<Term> args);
  static Term apply(const Symbol& head, std::vector<Term> args);

  const Symbol& head() const noexcept;
  std::span<const Term> args() const noexcept;
  const Type& type() const noexcept;
  bool is_ground() const noexcept { return type().is_ground(); }
  /// Number of symbol occurrences, saturating at SIZE_MAX.
  std::size_t size() const noexcept;
  /// Some head in the term is a non-terminal.
  bool has_nonterminal() const noexcept;

  /// `head args[0..n)`.
  Term prefix(std::size_t n) const;

  /// Same application with argument `i` (0-based) replaced by a term of the
  /// same type.
  Term with_arg(std::size_t i, Term arg) const;

  /// Identity of the shared node; equal ids imply equal terms.
  const void* id() const noexcept { return node_.get(); }

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b) noexcept;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Symbol head;
  std::vector<Term> args;
  Type type;
  std::size_t size;
  bool has_nonterminal;
};

inline const Symbol& Term::head() const noexcept { return node_->head; }
inline std::span<const Term> Term::args() const noexcept { return node_->args; }
inline const Type& Term::type() const noexcept { return node_->type; }
inline std::size_t Term::size() const noexcept { return node_->size; }
inline bool Term::has_nonterminal() const noexcept { return node_->has_nonterminal; }

std::ostream& operator<<(std::ostream& os, const Term& t);

inline const Type& type_of(const Term& t) noexcept { return t.type(); }

/// Replace every occurrence of variable `x` in `t` by `s`.
Term substitute(const Term& t, const Symbol& x, const Term& s);

/// Simultaneous substitution keyed by variable name.
Term substitute(const Term& t, const std::unordered_map<std::string, Term>& bindings);

/// body[params[i] := args[i]] for all i at once.
Term instantiate(const Term& body, std::span<const Symbol> params, std::span<const Term> args);

Term subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, const Term& s);

/// Distinct variables occurring in `t`, in first-occurrence order.
std::vector<Symbol> free_variables(const Term& t);

bool contains_variables(const Term& t);

/// True if some symbol of `t` satisfies `pred`.
bool any_symbol(const Term& t, const std::function<bool(const Symbol&)>& pred);

}  // namespace hors
