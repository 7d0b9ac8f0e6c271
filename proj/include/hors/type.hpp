#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace hors {

/// A simple type `o | τ -> τ`. Immutable; copies share structure.
class Type {
 public:
  /// The ground type `o`.
  Type();

  static Type ground() { return Type(); }
  static Type arrow(Type argument, Type result);
  /// `args[0] -> ... -> args[k-1] -> result`.
  static Type curried(const std::vector<Type>& args, Type result = Type());

  bool is_ground() const noexcept { return node_ == nullptr; }
  /// Only valid on arrow types.
  const Type& argument() const;
  const Type& result() const;

  /// k such that the type reads τ1 -> ... -> τk -> o.
  std::size_t arity() const noexcept;
  std::size_t order() const noexcept;
  /// τ1 ... τk.
  std::vector<Type> arguments() const;
  /// Type left after applying `n` arguments.
  Type drop(std::size_t n) const;

  std::string to_string() const;

  friend bool operator==(const Type& a, const Type& b) noexcept;
  friend std::strong_ordering operator<=>(const Type& a, const Type& b) noexcept;

  std::size_t hash() const noexcept;

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Type::Node {
  Type argument;
  Type result;
  std::size_t arity;
  std::size_t order;
};

inline std::size_t Type::arity() const noexcept { return node_ ? node_->arity : 0; }
inline std::size_t Type::order() const noexcept { return node_ ? node_->order : 0; }

std::ostream& operator<<(std::ostream& os, const Type& t);

}  // namespace hors

template <>
struct std::hash<hors::Type> {
  std::size_t operator()(const hors::Type& t) const noexcept { return t.hash(); }
};
