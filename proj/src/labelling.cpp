#include "hors/labelling.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hors/error.hpp"

namespace hors {

namespace {

std::uint64_t conj_count(const Type& t) {
  auto n = atom_count(t);
  if (!n || *n >= 63 || (std::uint64_t{1} << *n) > kMaxEnumeration)
    throw ComplexityLimit("too many conjunctive mappings of type " + t.to_string());
  return std::uint64_t{1} << *n;
}

}  // namespace

std::uint64_t nbvar(const Type& t) {
  std::uint64_t n = 1;
  for (const auto& a : t.arguments()) {
    auto c = conj_count(a);
    if (n > kMaxEnumeration / c) throw ComplexityLimit("too many annotations for " + t.to_string());
    n *= c;
  }
  return n;
}

std::vector<SigmaTuple> sigma_tuples(const Type& t) {
  auto args = t.arguments();
  auto total = nbvar(t);
  std::vector<std::uint64_t> radix;
  for (const auto& a : args) radix.push_back(conj_count(a));
  std::vector<SigmaTuple> out;
  out.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    SigmaTuple tuple;
    auto rest = i;
    std::vector<std::uint64_t> digits(args.size());
    for (std::size_t j = args.size(); j-- > 0;) {
      digits[j] = rest % radix[j];
      rest /= radix[j];
    }
    for (std::size_t j = 0; j < args.size(); ++j)
      tuple.push_back(ConjunctiveMapping::from_mask(args[j], digits[j]));
    out.push_back(std::move(tuple));
  }
  return out;
}

std::uint64_t sigma_index(const Type& t, const SigmaTuple& tuple) {
  auto args = t.arguments();
  if (tuple.size() != args.size())
    throw TypeMismatch("annotation", "expected " + std::to_string(args.size()) +
                                         " conjunctions, got " + std::to_string(tuple.size()));
  std::uint64_t i = 0;
  for (std::size_t j = 0; j < args.size(); ++j) {
    if (tuple[j].type() != args[j])
      throw TypeMismatch("annotation", "component " + std::to_string(j + 1) + " has type " +
                                           tuple[j].type().to_string() + ", expected " +
                                           args[j].to_string());
    i = i * conj_count(args[j]) + tuple[j].mask();
  }
  return i;
}

Type plus_type(const Type& t) {
  std::vector<Type> out;
  for (const auto& a : t.arguments()) {
    auto n = nbvar(a);
    auto p = plus_type(a);
    out.insert(out.end(), n, p);
  }
  return Type::curried(out);
}

Symbol annotate(const Symbol& base, const SigmaTuple& tuple) {
  if (base.is_terminal()) throw Error("terminals are not annotated");
  auto i = sigma_index(base.type(), tuple);
  std::string name = base.type().is_ground() ? base.name()
                                             : base.name() + "#" + std::to_string(i + 1);
  return Symbol(std::move(name), base.kind(), plus_type(base.type()));
}

Term plus_term(SemanticsTable& table, const Term& t, const Environment& venv,
               const SigmaTuple& ann) {
  const Symbol& h = t.head();
  auto remaining = t.type().arguments();
  if (ann.size() != remaining.size())
    throw TypeMismatch(t.to_string(), "annotation of length " + std::to_string(ann.size()) +
                                          " for a term expecting " +
                                          std::to_string(remaining.size()) + " arguments");
  std::vector<Term> args;
  SigmaTuple head_ann;
  for (const auto& a : t.args()) {
    head_ann.push_back(table.semantics(a, venv));
    for (const auto& tuple : sigma_tuples(a.type()))
      args.push_back(plus_term(table, a, venv, tuple));
  }
  head_ann.insert(head_ann.end(), ann.begin(), ann.end());
  if (h.is_variable() && !venv.find(h.name()))
    throw SchemeError("unbound variable '" + h.name() + "'");
  Symbol head = h.is_terminal() ? h : annotate(h, head_ann);
  if (args.empty()) return Term(head);
  return Term::apply(head, std::move(args));
}

LabelledScheme label_scheme(const Scheme& g) {
  require_valid(g);
  LabelledScheme lg{Scheme{}, theta_star(g), {}, {}};
  SemanticsTable table(g, lg.fixpoint.theta);
  Scheme& out = lg.scheme;
  for (const auto& a : g.terminals()) out.declare(a);

  auto declare = [&](const Symbol& base, const SigmaTuple& tuple) {
    Symbol s = annotate(base, tuple);
    if (!lg.base_of.contains(s.name())) {
      out.declare(s);
      lg.base_of.emplace(s.name(), base);
    }
    return s;
  };

  for (const auto& f : g.nonterminals())
    for (const auto& tuple : sigma_tuples(f.type())) declare(f, tuple);

  for (const auto& f : g.nonterminals()) {
    const Rule* rule = g.rule_for(f.name());
    auto types = f.type().arguments();
    for (const auto& tuple : sigma_tuples(f.type())) {
      Environment venv;
      std::vector<Symbol> params;
      for (std::size_t j = 0; j < types.size(); ++j) {
        venv.extend(rule->params[j], tuple[j]);
        for (const auto& inner : sigma_tuples(types[j]))
          params.push_back(declare(rule->params[j], inner));
      }
      Symbol lhs = annotate(f, tuple);
      Term body = plus_term(table, rule->body, venv);
      lg.rules.push_back(AnnotatedRule{f, tuple, out.rules().size()});
      out.add_rule(Rule{lhs, std::move(params), std::move(body)});
    }
  }
  out.set_start(g.start_name());
  return lg;
}

SelfCorrectingScheme self_correct(const LabelledScheme& lg) {
  const Scheme& gp = lg.scheme;
  SelfCorrectingScheme sc;
  sc.void_name = gp.fresh_name("Void");
  Symbol void_sym(sc.void_name, SymbolKind::nonterminal, Type::ground());
  Scheme& out = sc.scheme;
  for (const auto& a : gp.terminals()) out.declare(a);
  for (const auto& f : gp.nonterminals()) out.declare(f);
  out.declare(void_sym);
  for (const auto& x : gp.variables()) out.declare(x);

  // Only ⟦F⟧ = Θ⋆(F) ∪ {q∞ -> q∞} is needed, which apply_symbol reads off Θ⋆.
  SemanticsTable table(Scheme{}, lg.fixpoint.theta);
  for (const auto& ar : lg.rules) {
    const Rule& r = gp.rules()[ar.rule];
    if (table.apply_symbol(ar.base, ar.annotation).has_bot()) {
      sc.voided.push_back(r.lhs.name());
      out.add_rule(Rule{r.lhs, r.params, Term(void_sym)});
    } else {
      out.add_rule(r);
    }
  }
  out.add_rule(Rule{void_sym, {}, Term(void_sym)});
  out.set_start(gp.start_name());
  return sc;
}

Scheme io_to_oi(const Scheme& g, bool prune) {
  auto sc = self_correct(label_scheme(g));
  return prune ? prune_unreachable(sc.scheme) : std::move(sc.scheme);
}

Term unlabel(const LabelledScheme& lg, const Term& t) {
  const Symbol& h = t.head();
  Symbol base = h;
  if (!h.is_terminal()) {
    auto it = lg.base_of.find(h.name());
    if (it == lg.base_of.end()) throw SchemeError("'" + h.name() + "' is not an annotated symbol");
    base = it->second;
  }
  auto types = base.type().arguments();
  std::vector<Term> args;
  std::size_t k = 0;
  for (const auto& a : t.args()) {
    // Arguments come in groups of nbvar(τj) copies; keep the first of each.
    std::size_t j = 0;
    std::uint64_t seen = k;
    while (j < types.size() && seen >= nbvar(types[j])) seen -= nbvar(types[j++]);
    if (j == types.size()) throw SchemeError("too many arguments under " + h.name());
    if (seen == 0) args.push_back(unlabel(lg, a));
    ++k;
  }
  if (args.empty()) return Term(base);
  return Term::apply(base, std::move(args));
}

TransformReport make_report(const Scheme& g, const LabelledScheme& lg,
                            const SelfCorrectingScheme& sc, const Scheme& output) {
  TransformReport r;
  r.source_rules = g.rules().size();
  r.labelled_rules = lg.scheme.rules().size();
  r.output_rules = output.rules().size();
  std::set<Type> types;
  auto add = [&](const Symbol& s) {
    types.insert(s.type());
    for (const auto& a : s.type().arguments()) types.insert(a);
  };
  for (const auto& f : g.nonterminals()) add(f);
  for (const auto& x : g.variables()) add(x);
  for (const auto& t : types) r.nbvar_table.emplace_back(t, nbvar(t));
  r.voided = sc.voided;
  for (const auto& f : sc.scheme.nonterminals())
    if (!output.find(f.name())) r.unreachable.push_back(f.name());
  return r;
}

std::string format_report(const TransformReport& r) {
  std::ostringstream os;
  os << "rules: source " << r.source_rules << ", labelled " << r.labelled_rules << ", output "
     << r.output_rules << '\n';
  os << "nbvar:\n";
  for (const auto& [t, n] : r.nbvar_table) os << "  " << t.to_string() << " : " << n << '\n';
  os << "rewritten to Void (" << r.voided.size() << "):\n";
  for (const auto& v : r.voided) os << "  " << v << '\n';
  if (!r.unreachable.empty()) {
    os << "pruned as unreachable (" << r.unreachable.size() << "):\n";
    for (const auto& v : r.unreachable) os << "  " << v << '\n';
  }
  return os.str();
}

}  // namespace hors
