#include "hors/tree.hpp"

#include <algorithm>
#include <ostream>

#include "hors/error.hpp"

namespace hors {

PartialTree PartialTree::node(Symbol label, std::vector<PartialTree> children) {
  if (!label.is_terminal()) {
    throw TypeMismatch("", "tree label '" + label.name() + "' is not a terminal");
  }
  if (label.type().order() > 1) {
    throw TypeMismatch("", "terminal '" + label.name() + "' has order > 1");
  }
  if (children.size() != label.type().arity()) {
    throw TypeMismatch("", "terminal '" + label.name() + "' expects " +
                               std::to_string(label.type().arity()) + " children, got " +
                               std::to_string(children.size()));
  }
  PartialTree t;
  t.label_ = std::move(label);
  t.children_ = std::move(children);
  return t;
}

const Symbol& PartialTree::label() const {
  if (!label_) throw std::logic_error("label() of ⊥");
  return *label_;
}

std::size_t PartialTree::depth() const {
  if (is_bottom()) return 0;
  std::size_t d = 0;
  for (const auto& c : children_) d = std::max(d, c.depth());
  return d + 1;
}

std::size_t PartialTree::size() const {
  if (is_bottom()) return 0;
  std::size_t n = 1;
  for (const auto& c : children_) n += c.size();
  return n;
}

std::string PartialTree::to_string() const {
  if (is_bottom()) return "⊥";
  std::string out = label_->name();
  for (const auto& c : children_) {
    out += ' ';
    if (c.children_.empty()) {
      out += c.to_string();
    } else {
      out += '(' + c.to_string() + ')';
    }
  }
  return out;
}

namespace {

void indent_into(const PartialTree& t, std::size_t level, std::string& out) {
  out.append(2 * level, ' ');
  out += t.is_bottom() ? std::string("⊥") : t.label().name();
  out += '\n';
  for (const auto& c : t.children()) indent_into(c, level + 1, out);
}

}  // namespace

std::string PartialTree::to_indented() const {
  std::string out;
  indent_into(*this, 0, out);
  return out;
}

bool operator==(const PartialTree& a, const PartialTree& b) {
  if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
  return *a.label_ == *b.label_ && a.children_ == b.children_;
}

std::ostream& operator<<(std::ostream& os, const PartialTree& t) { return os << t.to_string(); }

namespace {

void check_transformable(const Term& t) {
  if (!t.is_ground()) {
    throw TypeMismatch("", "bottom_transform needs a ground term, '" + t.to_string() +
                               "' has type " + t.type().to_string());
  }
}

PartialTree transform(const Term& t, std::size_t depth) {
  if (depth == 0) return PartialTree::bottom();
  const Symbol& head = t.head();
  if (head.is_variable()) {
    throw TypeMismatch("", "bottom_transform on open term (variable '" + head.name() + "')");
  }
  if (head.is_nonterminal()) return PartialTree::bottom();
  std::vector<PartialTree> children;
  children.reserve(t.args().size());
  for (const Term& a : t.args()) children.push_back(transform(a, depth - 1));
  return PartialTree::node(head, std::move(children));
}

}  // namespace

PartialTree bottom_transform(const Term& t) {
  check_transformable(t);
  return transform(t, static_cast<std::size_t>(-1));
}

PartialTree bottom_transform(const Term& t, std::size_t depth) {
  check_transformable(t);
  return transform(t, depth);
}

PartialTree truncate(const PartialTree& t, std::size_t depth) {
  if (depth == 0 || t.is_bottom()) return PartialTree::bottom();
  std::vector<PartialTree> children;
  for (const auto& c : t.children()) children.push_back(truncate(c, depth - 1));
  return PartialTree::node(t.label(), std::move(children));
}

bool tree_leq(const PartialTree& t1, const PartialTree& t2) {
  if (t1.is_bottom()) return true;
  if (t2.is_bottom()) return false;
  if (!(t1.label() == t2.label())) return false;
  for (std::size_t i = 0; i < t1.children().size(); ++i) {
    if (!tree_leq(t1.children()[i], t2.children()[i])) return false;
  }
  return true;
}

namespace {

PartialTree lub_rec(const PartialTree& a, const PartialTree& b, const Position& at) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  if (!(a.label() == b.label())) {
    throw IncompatibleLabels(at.to_string(), "labels '" + a.label().name() + "' and '" +
                                                 b.label().name() + "' differ");
  }
  std::vector<PartialTree> children;
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    children.push_back(lub_rec(a.children()[i], b.children()[i], at.child(i + 1)));
  }
  return PartialTree::node(a.label(), std::move(children));
}

}  // namespace

PartialTree tree_lub(const PartialTree& a, const PartialTree& b) { return lub_rec(a, b, {}); }

PartialTree tree_lub(std::span<const PartialTree> trees) {
  PartialTree acc;
  for (const auto& t : trees) acc = lub_rec(acc, t, {});
  return acc;
}

}  // namespace hors
