#include "hors/bar.hpp"

#include <algorithm>
#include <unordered_set>

#include "hors/error.hpp"

namespace hors {

Type bar_type(const Type& t) {
  if (t.is_ground()) return Type::arrow(Type::ground(), Type::ground());
  return Type::arrow(bar_type(t.argument()), bar_type(t.result()));
}

namespace {

class Namer {
 public:
  explicit Namer(const Scheme& g) {
    for (const auto* group : {&g.terminals(), &g.nonterminals(), &g.variables()}) {
      for (const Symbol& s : *group) used_.insert(s.name());
    }
  }

  std::string fresh(std::string base) {
    while (used_.contains(base)) base += '\'';
    used_.insert(base);
    return base;
  }

 private:
  std::unordered_set<std::string> used_;
};

}  // namespace

BarContext make_bar_context(const Scheme& g) {
  Namer names(g);
  const Type o = Type::ground();
  const Type o_to_o = Type::arrow(o, o);

  Symbol init(names.fresh("I"), SymbolKind::nonterminal, o);
  Symbol wait(names.fresh("Delta"), SymbolKind::nonterminal, o);
  Symbol delta(names.fresh("delta"), SymbolKind::variable, o);

  std::size_t ar_max = 0;
  for (const Symbol& a : g.terminals()) ar_max = std::max(ar_max, a.type().arity());
  std::vector<Symbol> etas;
  for (std::size_t i = 1; i <= ar_max; ++i) {
    etas.emplace_back(names.fresh("eta" + std::to_string(i)), SymbolKind::variable, o_to_o);
  }

  BarContext ctx{{}, std::move(etas), std::move(delta), std::move(wait), std::move(init)};
  auto map_all = [&](const std::vector<Symbol>& group, SymbolKind kind) {
    for (const Symbol& s : group) {
      ctx.symbol_map.emplace(s.name(),
                             Symbol(names.fresh(s.name() + "_bar"), kind, bar_type(s.type())));
    }
  };
  map_all(g.nonterminals(), SymbolKind::nonterminal);
  map_all(g.terminals(), SymbolKind::nonterminal);
  map_all(g.variables(), SymbolKind::variable);
  return ctx;
}

Term bar_term(const BarContext& ctx, const Term& t) {
  auto it = ctx.symbol_map.find(t.head().name());
  if (it == ctx.symbol_map.end()) {
    throw SchemeError("no barred counterpart for '" + t.head().name() + "'");
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(bar_term(ctx, a));
  return Term::apply(it->second, std::move(args));
}

Scheme bar_scheme(const Scheme& g) { return bar_scheme(g, make_bar_context(g)); }

Scheme bar_scheme(const Scheme& g, const BarContext& ctx) {
  require_valid(g);
  const auto& m = ctx.symbol_map;
  Scheme out;
  for (const Symbol& a : g.terminals()) out.declare(a);
  out.declare(ctx.init);
  for (const Symbol& f : g.nonterminals()) out.declare(m.at(f.name()));
  for (const Symbol& a : g.terminals()) out.declare(m.at(a.name()));
  out.declare(ctx.wait);
  for (const Symbol& x : g.variables()) out.declare(m.at(x.name()));
  for (const Symbol& eta : ctx.etas) out.declare(eta);
  out.declare(ctx.delta);

  out.mark_inert(ctx.wait.name());
  for (const std::string& name : g.inert()) out.mark_inert(m.at(name).name());

  const Term wait(ctx.wait);
  out.add_rule(Rule{ctx.init, {}, Term::apply(m.at(g.start_name()), {wait})});

  for (const Rule& r : g.rules()) {
    std::vector<Symbol> params;
    for (const Symbol& x : r.params) params.push_back(m.at(x.name()));
    params.push_back(ctx.delta);
    out.add_rule(Rule{m.at(r.lhs.name()), std::move(params),
                      Term::apply(bar_term(ctx, r.body), {wait})});
  }

  for (const Symbol& a : g.terminals()) {
    const std::size_t k = a.type().arity();
    std::vector<Symbol> params(ctx.etas.begin(), ctx.etas.begin() + static_cast<long>(k));
    std::vector<Term> fed;
    for (const Symbol& eta : params) fed.push_back(Term::apply(eta, {wait}));
    params.push_back(ctx.delta);
    out.add_rule(Rule{m.at(a.name()), std::move(params), Term::apply(a, std::move(fed))});
  }

  out.set_start(ctx.init.name());
  return out;
}

}  // namespace hors
