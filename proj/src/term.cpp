#include "hors/term.hpp"

#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "hors/error.hpp"

namespace hors {

std::string_view to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::terminal:
      return "terminal";
    case SymbolKind::nonterminal:
      return "nonterminal";
    case SymbolKind::variable:
      return "var";
  }
  return "?";
}

Symbol::Symbol(std::string name, SymbolKind kind, Type type)
    : data_(std::make_shared<const Data>(Data{std::move(name), kind, std::move(type)})) {}

bool operator==(const Symbol& a, const Symbol& b) noexcept {
  if (a.data_ == b.data_) return true;
  return a.kind() == b.kind() && a.name() == b.name() && a.type() == b.type();
}

std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) noexcept {
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  return a.type() <=> b.type();
}

Position Position::child(std::size_t index) const {
  std::vector<std::size_t> path = path_;
  path.push_back(index);
  return Position(std::move(path));
}

std::string Position::to_string() const {
  if (path_.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path_[i]);
  }
  return out;
}

namespace {

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max()
                                                         : a + b;
}

}  // namespace

Term::Term(Symbol symbol) {
  Type type = symbol.type();
  const bool nt = symbol.is_nonterminal();
  node_ = std::make_shared<const Node>(Node{std::move(symbol), {}, std::move(type), 1, nt});
}

Term Term::apply(const Symbol& head, std::vector<Term> args) {
  return apply(Term(head), std::move(args));
}

Term Term::apply(const Term& f, std::vector<Term> args) {
  if (args.empty()) return f;
  std::vector<Term> all(f.args().begin(), f.args().end());
  const std::size_t offset = all.size();
  Type type = f.type();
  std::size_t size = f.size();
  bool nt = f.has_nonterminal();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (type.is_ground()) {
      throw TypeMismatch(Position{offset + i + 1}.to_string(),
                         "too many arguments for '" + f.head().name() + "'");
    }
    if (!(type.argument() == args[i].type())) {
      throw TypeMismatch(Position{offset + i + 1}.to_string(), "argument '" + args[i].to_string() + "' has type " +
                                    args[i].type().to_string() + " but '" + f.head().name() +
                                    "' expects " + type.argument().to_string());
    }
    size = saturating_add(size, args[i].size());
    nt = nt || args[i].has_nonterminal();
    type = type.result();
  }
  for (auto& a : args) all.push_back(std::move(a));
  return Term(std::make_shared<const Node>(Node{f.head(), std::move(all), std::move(type), size, nt}));
}

Term Term::with_arg(std::size_t i, Term arg) const {
  if (i >= args().size()) throw InvalidPosition("argument " + std::to_string(i + 1) + " of '" +
                                                to_string() + "' does not exist");
  if (!(args()[i].type() == arg.type())) {
    throw TypeMismatch(Position{i + 1}.to_string(), "argument '" + arg.to_string() +
                                                        "' has type " + arg.type().to_string() +
                                                        ", expected " + args()[i].type().to_string());
  }
  std::vector<Term> all(args().begin(), args().end());
  std::size_t size = 1;
  bool nt = head().is_nonterminal();
  all[i] = std::move(arg);
  for (const Term& a : all) {
    size = saturating_add(size, a.size());
    nt = nt || a.has_nonterminal();
  }
  return Term(std::make_shared<const Node>(Node{head(), std::move(all), type(), size, nt}));
}

Term Term::prefix(std::size_t n) const {
  if (n >= args().size()) return *this;
  return apply(head(), std::vector<Term>(args().begin(), args().begin() + n));
}

std::string Term::to_string() const {
  std::string out = head().name();
  for (const Term& a : args()) {
    out += ' ';
    if (a.args().empty()) {
      out += a.to_string();
    } else {
      out += '(' + a.to_string() + ')';
    }
  }
  return out;
}

bool operator==(const Term& a, const Term& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.args().size() != b.args().size() || !(a.head() == b.head())) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!(a.args()[i] == b.args()[i])) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << t.to_string(); }

namespace {

template <typename Lookup>
Term substitute_impl(const Term& t, const Lookup& lookup, bool& changed) {
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool any = false;
  for (const Term& a : t.args()) {
    bool c = false;
    args.push_back(substitute_impl(a, lookup, c));
    any |= c;
  }
  if (t.head().is_variable()) {
    if (const Term* s = lookup(t.head())) {
      changed = true;
      return Term::apply(*s, std::move(args));
    }
  }
  if (!any) return t;
  changed = true;
  return Term::apply(t.head(), std::move(args));
}

}  // namespace

Term substitute(const Term& t, const Symbol& x, const Term& s) {
  if (!x.is_variable()) throw TypeMismatch("", "'" + x.name() + "' is not a variable");
  if (!(x.type() == s.type())) {
    throw TypeMismatch("", "cannot substitute '" + s.to_string() + "' of type " +
                               s.type().to_string() + " for '" + x.name() + "' of type " +
                               x.type().to_string());
  }
  bool changed = false;
  return substitute_impl(
      t, [&](const Symbol& y) -> const Term* { return y == x ? &s : nullptr; }, changed);
}

Term substitute(const Term& t, const std::unordered_map<std::string, Term>& bindings) {
  bool changed = false;
  return substitute_impl(
      t,
      [&](const Symbol& y) -> const Term* {
        auto it = bindings.find(y.name());
        if (it == bindings.end()) return nullptr;
        if (!(it->second.type() == y.type())) {
          throw TypeMismatch("", "binding for '" + y.name() + "' has type " +
                                     it->second.type().to_string());
        }
        return &it->second;
      },
      changed);
}

Term instantiate(const Term& body, std::span<const Symbol> params, std::span<const Term> args) {
  bool changed = false;
  return substitute_impl(
      body,
      [&](const Symbol& y) -> const Term* {
        for (std::size_t i = 0; i < params.size(); ++i) {
          if (params[i].name() == y.name()) return &args[i];
        }
        return nullptr;
      },
      changed);
}

Term subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (std::size_t idx : p.path()) {
    if (idx == 0 || idx > cur->args().size()) {
      throw InvalidPosition("position " + p.to_string() + " does not exist in '" + t.to_string() +
                            "'");
    }
    cur = &cur->args()[idx - 1];
  }
  return *cur;
}

namespace {

Term replace_rec(const Term& t, const Position& p, std::size_t level, const Term& s,
                 const Term& root) {
  if (level == p.depth()) {
    if (!(t.type() == s.type())) {
      throw TypeMismatch(p.to_string(), "replacement '" + s.to_string() + "' has type " +
                                            s.type().to_string() + ", expected " +
                                            t.type().to_string());
    }
    return s;
  }
  const std::size_t idx = p.path()[level];
  if (idx == 0 || idx > t.args().size()) {
    throw InvalidPosition("position " + p.to_string() + " does not exist in '" +
                          root.to_string() + "'");
  }
  return t.with_arg(idx - 1, replace_rec(t.args()[idx - 1], p, level + 1, s, root));
}

}  // namespace

Term replace_at(const Term& t, const Position& p, const Term& s) {
  return replace_rec(t, p, 0, s, t);
}

std::vector<Symbol> free_variables(const Term& t) {
  std::vector<Symbol> out;
  std::unordered_set<std::string> seen;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.head().is_variable() && seen.insert(u.head().name()).second) out.push_back(u.head());
    for (const Term& a : u.args()) walk(a);
  };
  walk(t);
  return out;
}

bool any_symbol(const Term& t, const std::function<bool(const Symbol&)>& pred) {
  if (pred(t.head())) return true;
  for (const Term& a : t.args()) {
    if (any_symbol(a, pred)) return true;
  }
  return false;
}

bool contains_variables(const Term& t) {
  return any_symbol(t, [](const Symbol& s) { return s.is_variable(); });
}

}  // namespace hors
