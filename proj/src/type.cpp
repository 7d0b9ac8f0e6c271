#include "hors/type.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace hors {

Type::Type() = default;

Type Type::arrow(Type argument, Type result) {
  const std::size_t arity = result.arity() + 1;
  const std::size_t order = std::max(argument.order() + 1, result.order());
  return Type(std::make_shared<const Node>(
      Node{std::move(argument), std::move(result), arity, order}));
}

Type Type::curried(const std::vector<Type>& args, Type result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) {
    result = arrow(*it, std::move(result));
  }
  return result;
}

const Type& Type::argument() const {
  if (!node_) throw std::logic_error("argument() of ground type");
  return node_->argument;
}

const Type& Type::result() const {
  if (!node_) throw std::logic_error("result() of ground type");
  return node_->result;
}

std::vector<Type> Type::arguments() const {
  std::vector<Type> out;
  out.reserve(arity());
  for (const Type* t = this; !t->is_ground(); t = &t->result()) {
    out.push_back(t->argument());
  }
  return out;
}

Type Type::drop(std::size_t n) const {
  Type t = *this;
  for (std::size_t i = 0; i < n; ++i) t = t.result();
  return t;
}

std::string Type::to_string() const {
  if (is_ground()) return "o";
  const std::string arg = argument().is_ground()
                              ? std::string("o")
                              : "(" + argument().to_string() + ")";
  return arg + " -> " + result().to_string();
}

bool operator==(const Type& a, const Type& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->arity == b.node_->arity && a.node_->argument == b.node_->argument &&
         a.node_->result == b.node_->result;
}

std::strong_ordering operator<=>(const Type& a, const Type& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.node_->argument <=> b.node_->argument; c != 0) return c;
  return a.node_->result <=> b.node_->result;
}

std::size_t Type::hash() const noexcept {
  if (!node_) return 0x9e3779b9u;
  std::size_t h = node_->argument.hash();
  h ^= node_->result.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::ostream& operator<<(std::ostream& os, const Type& t) { return os << t.to_string(); }

}  // namespace hors
