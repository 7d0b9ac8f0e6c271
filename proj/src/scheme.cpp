#include "hors/scheme.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hors/error.hpp"

namespace hors {

void Scheme::declare(const Symbol& symbol) {
  if (by_name_.contains(symbol.name())) {
    throw SchemeError("symbol '" + symbol.name() + "' declared twice");
  }
  by_name_.emplace(symbol.name(), symbol);
  switch (symbol.kind()) {
    case SymbolKind::terminal:
      terminals_.push_back(symbol);
      break;
    case SymbolKind::nonterminal:
      nonterminals_.push_back(symbol);
      break;
    case SymbolKind::variable:
      variables_.push_back(symbol);
      break;
  }
}

void Scheme::add_rule(Rule rule) {
  rule_index_.try_emplace(rule.lhs.name(), rules_.size());
  rules_.push_back(std::move(rule));
}

void Scheme::mark_inert(const std::string& name) {
  if (inert_set_.insert(name).second) inert_.push_back(name);
}

const Symbol* Scheme::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? nullptr : &it->second;
}

bool Scheme::declares(const Symbol& symbol) const {
  const Symbol* s = find(symbol.name());
  return s && *s == symbol;
}

const Rule* Scheme::rule_for(std::string_view nonterminal) const {
  auto it = rule_index_.find(std::string(nonterminal));
  return it == rule_index_.end() ? nullptr : &rules_[it->second];
}

bool Scheme::is_inert(std::string_view name) const {
  return inert_set_.contains(std::string(name));
}

const Symbol& Scheme::start() const {
  const Symbol* s = find(start_);
  if (!s || !s->is_nonterminal()) {
    throw SchemeError("start symbol '" + start_ + "' is not a declared non-terminal");
  }
  return *s;
}

std::string Scheme::fresh_name(std::string base) const {
  while (by_name_.contains(base)) base += '\'';
  return base;
}

bool operator==(const Scheme& a, const Scheme& b) {
  auto sorted = [](std::vector<Symbol> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  auto rule_map = [](const Scheme& g) {
    std::multimap<std::string, const Rule*> m;
    for (const Rule& r : g.rules_) m.emplace(r.lhs.name(), &r);
    return m;
  };
  if (a.start_ != b.start_) return false;
  if (sorted(a.terminals_) != sorted(b.terminals_) ||
      sorted(a.nonterminals_) != sorted(b.nonterminals_) ||
      sorted(a.variables_) != sorted(b.variables_)) {
    return false;
  }
  if (a.inert_set_ != b.inert_set_) return false;
  const auto ra = rule_map(a);
  const auto rb = rule_map(b);
  if (ra.size() != rb.size()) return false;
  for (auto ia = ra.begin(), ib = rb.begin(); ia != ra.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !(*ia->second == *ib->second)) return false;
  }
  return true;
}

std::vector<Diagnostic> validate(const Scheme& g) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string where, std::string what) {
    out.push_back({std::move(where), std::move(what)});
  };

  for (const Symbol& a : g.terminals()) {
    if (a.type().order() > 1) report("terminal " + a.name(), "terminal order > 1");
  }

  if (g.start_name().empty()) {
    report("start", "no start symbol");
  } else if (const Symbol* s = g.find(g.start_name()); !s || !s->is_nonterminal()) {
    report("start", "start symbol '" + g.start_name() + "' is not a declared non-terminal");
  } else if (!s->type().is_ground()) {
    report("start", "start symbol '" + s->name() + "' is not of type o");
  }

  std::map<std::string, std::size_t> counts;
  for (const Rule& r : g.rules()) ++counts[r.lhs.name()];
  for (const Symbol& f : g.nonterminals()) {
    const std::size_t n = counts.contains(f.name()) ? counts[f.name()] : 0;
    if (g.is_inert(f.name())) {
      if (n != 0) report("rule " + f.name(), "inert non-terminal has a rule");
    } else if (n == 0) {
      report("nonterminal " + f.name(), "missing rule");
    } else if (n > 1) {
      report("rule " + f.name(), "duplicate rule (" + std::to_string(n) + " rules)");
    }
  }
  for (const std::string& name : g.inert()) {
    const Symbol* s = g.find(name);
    if (!s || !s->is_nonterminal()) {
      report("inert " + name, "not a declared non-terminal");
    }
  }

  for (const Rule& r : g.rules()) {
    const std::string where = "rule " + r.lhs.name();
    if (!r.lhs.is_nonterminal() || !g.declares(r.lhs)) {
      report(where, "left-hand side is not a declared non-terminal");
      continue;
    }
    const auto expected = r.lhs.type().arguments();
    if (r.params.size() != expected.size()) {
      report(where, "expects " + std::to_string(expected.size()) + " parameters, got " +
                        std::to_string(r.params.size()));
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < r.params.size(); ++i) {
      const Symbol& x = r.params[i];
      if (!x.is_variable() || !g.declares(x)) {
        report(where, "parameter '" + x.name() + "' is not a declared variable");
      } else if (i < expected.size() && !(x.type() == expected[i])) {
        report(where, "parameter '" + x.name() + "' has type " + x.type().to_string() +
                          ", expected " + expected[i].to_string());
      }
      if (!seen.insert(x.name()).second) {
        report(where, "parameter '" + x.name() + "' repeated");
      }
    }
    if (!r.body.is_ground()) {
      report(where, "body not ground (type " + r.body.type().to_string() + ")");
    }
    any_symbol(r.body, [&](const Symbol& s) {
      if (!g.declares(s)) {
        report(where, "undeclared symbol '" + s.name() + "'");
      } else if (s.is_variable() && !seen.contains(s.name())) {
        report(where, "variable '" + s.name() + "' is not a parameter");
      }
      return false;
    });
  }
  return out;
}

void require_valid(const Scheme& g) {
  const auto diags = validate(g);
  if (diags.empty()) return;
  std::ostringstream msg;
  msg << "invalid scheme:";
  for (const auto& d : diags) msg << "\n  " << d.to_string();
  throw SchemeError(msg.str());
}

std::size_t scheme_order(const Scheme& g) {
  std::size_t order = 0;
  for (const Symbol& f : g.nonterminals()) order = std::max(order, f.type().order());
  return order;
}

Scheme with_start(const Scheme& g, const Term& t) {
  if (!t.is_ground()) {
    throw SchemeError("start term '" + t.to_string() + "' is not of type o");
  }
  any_symbol(t, [&](const Symbol& s) {
    if (s.is_variable()) throw SchemeError("start term contains variable '" + s.name() + "'");
    if (!g.declares(s)) throw SchemeError("start term uses unknown symbol '" + s.name() + "'");
    return false;
  });
  Scheme out = g;
  const std::string base = g.start_name().empty() ? std::string("S") : g.start_name();
  Symbol fresh(g.fresh_name(base + "'"), SymbolKind::nonterminal, Type::ground());
  out.declare(fresh);
  out.add_rule(Rule{fresh, {}, t});
  out.set_start(fresh.name());
  return out;
}

Scheme prune_unreachable(const Scheme& g) {
  std::set<std::string> reached;
  std::vector<std::string> work{g.start_name()};
  while (!work.empty()) {
    std::string name = std::move(work.back());
    work.pop_back();
    if (!reached.insert(name).second) continue;
    if (const Rule* r = g.rule_for(name)) {
      any_symbol(r->body, [&](const Symbol& s) {
        if (s.is_nonterminal() && !reached.contains(s.name())) work.push_back(s.name());
        return false;
      });
    }
  }
  Scheme out;
  std::set<std::string> used_vars;
  for (const Rule& r : g.rules()) {
    if (!reached.contains(r.lhs.name())) continue;
    for (const Symbol& x : r.params) used_vars.insert(x.name());
  }
  for (const Symbol& a : g.terminals()) out.declare(a);
  for (const Symbol& f : g.nonterminals()) {
    if (reached.contains(f.name())) out.declare(f);
  }
  for (const Symbol& x : g.variables()) {
    if (used_vars.contains(x.name())) out.declare(x);
  }
  for (const std::string& name : g.inert()) {
    if (reached.contains(name)) out.mark_inert(name);
  }
  for (const Rule& r : g.rules()) {
    if (reached.contains(r.lhs.name())) out.add_rule(r);
  }
  out.set_start(g.start_name());
  return out;
}

}  // namespace hors
