#include "hors/intersection.hpp"

#include <sstream>
#include <unordered_set>

#include "hors/error.hpp"

namespace hors {

namespace {

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

std::uint64_t count_or_throw(const Type& t) {
  auto n = atom_count(t);
  if (!n || *n > kMaxAtoms)
    throw ComplexityLimit("type " + t.to_string() + " has too many atomic mappings");
  return *n;
}

// 2^n conjunctions over n atoms, refused past the enumeration limit.
std::uint64_t conj_count_or_throw(const Type& t) {
  auto n = count_or_throw(t);
  if (n >= 63 || (std::uint64_t{1} << n) > kMaxEnumeration)
    throw ComplexityLimit("too many conjunctive mappings of type " + t.to_string());
  return std::uint64_t{1} << n;
}

ConjunctiveMapping inf_to_inf(const Type& t) {
  ConjunctiveMapping arg(t.argument());
  arg.insert(AtomicMapping::inf(t.argument()));
  ConjunctiveMapping out(t);
  out.insert(AtomicMapping::arrow(arg, AtomicMapping::inf(t.result())));
  return out;
}

// Index of σ1 -> ... -> σn -> last inside type t.
std::uint64_t chain_index(const Type& t, std::span<const std::uint64_t> masks, std::uint64_t last) {
  if (masks.empty()) return last;
  auto rest = count_or_throw(t.result());
  return 1 + masks[0] * rest + chain_index(t.result(), masks.subspan(1), last);
}

}  // namespace

std::optional<std::uint64_t> atom_count(const Type& t) {
  if (t.is_ground()) return 2;
  auto a = atom_count(t.argument());
  auto r = atom_count(t.result());
  if (!a || !r || *a >= 62) return std::nullopt;
  auto n = mul_sat(std::uint64_t{1} << *a, *r);
  if (n >= (std::uint64_t{1} << 62)) return std::nullopt;
  return n + 1;
}

// AtomicMapping

AtomicMapping AtomicMapping::bot() { return AtomicMapping(Type::ground(), 0); }

AtomicMapping AtomicMapping::inf(const Type& t) {
  return AtomicMapping(t, t.is_ground() ? 1 : 0);
}

AtomicMapping AtomicMapping::arrow(const ConjunctiveMapping& argument,
                                   const AtomicMapping& result) {
  Type t = Type::arrow(argument.type(), result.type());
  count_or_throw(t);
  return AtomicMapping(t, 1 + argument.mask() * *atom_count(result.type()) + result.index());
}

AtomicMapping AtomicMapping::from_index(Type t, std::uint64_t index) {
  if (index >= count_or_throw(t)) throw Error("atom index out of range for " + t.to_string());
  return AtomicMapping(std::move(t), index);
}

ConjunctiveMapping AtomicMapping::argument() const {
  if (!is_arrow()) throw Error("not an arrow mapping");
  auto r = *atom_count(type_.result());
  return ConjunctiveMapping::from_mask(type_.argument(), (index_ - 1) / r);
}

AtomicMapping AtomicMapping::result() const {
  if (!is_arrow()) throw Error("not an arrow mapping");
  auto r = *atom_count(type_.result());
  return AtomicMapping(type_.result(), (index_ - 1) % r);
}

std::string AtomicMapping::to_string() const {
  if (is_bot()) return "q⊥";
  if (is_inf()) return "q∞";
  auto arg = argument();
  std::string a = arg.size() == 1 ? arg.atoms().front().to_string() : arg.to_string();
  if (arg.size() == 1 && arg.atoms().front().is_arrow()) a = "(" + a + ")";
  return a + " -> " + result().to_string();
}

std::strong_ordering operator<=>(const AtomicMapping& a, const AtomicMapping& b) {
  if (auto c = a.type_ <=> b.type_; c != 0) return c;
  return a.index_ <=> b.index_;
}

// ConjunctiveMapping

ConjunctiveMapping::ConjunctiveMapping(Type t)
    : type_(std::move(t)), bits_(count_or_throw(type_)) {}

ConjunctiveMapping::ConjunctiveMapping(Type t, std::initializer_list<AtomicMapping> atoms)
    : ConjunctiveMapping(std::move(t)) {
  for (const auto& a : atoms) insert(a);
}

ConjunctiveMapping ConjunctiveMapping::full(Type t) {
  ConjunctiveMapping c(std::move(t));
  c.bits_.set();
  return c;
}

ConjunctiveMapping ConjunctiveMapping::from_mask(Type t, std::uint64_t mask) {
  ConjunctiveMapping c(std::move(t));
  if (c.bits_.size() > 62) throw ComplexityLimit("conjunction too wide for a mask");
  if (c.bits_.size() < 64 && (mask >> c.bits_.size()) != 0)
    throw Error("mask out of range for " + c.type_.to_string());
  for (std::size_t i = 0; i < c.bits_.size(); ++i)
    if ((mask >> i) & 1) c.bits_.set(i);
  return c;
}

bool ConjunctiveMapping::contains(const AtomicMapping& a) const {
  return a.type() == type_ && contains_index(a.index());
}

void ConjunctiveMapping::insert(const AtomicMapping& a) {
  if (a.type() != type_)
    throw TypeMismatch("conjunction", "atom of type " + a.type().to_string() +
                                          " in a conjunction of type " + type_.to_string());
  bits_.set(a.index());
}

bool ConjunctiveMapping::subset_of(const ConjunctiveMapping& other) const {
  return type_ == other.type_ && bits_.is_subset_of(other.bits_);
}

ConjunctiveMapping& ConjunctiveMapping::operator|=(const ConjunctiveMapping& other) {
  if (type_ != other.type_) throw TypeMismatch("conjunction", "conjoining different types");
  bits_ |= other.bits_;
  return *this;
}

std::vector<AtomicMapping> ConjunctiveMapping::atoms() const {
  std::vector<AtomicMapping> out;
  for_each_index([&](std::uint64_t i) { out.push_back(AtomicMapping::from_index(type_, i)); });
  return out;
}

std::uint64_t ConjunctiveMapping::mask() const {
  if (bits_.size() > 62) throw ComplexityLimit("conjunction too wide for a mask");
  std::uint64_t m = 0;
  for_each_index([&](std::uint64_t i) { m |= std::uint64_t{1} << i; });
  return m;
}

std::string ConjunctiveMapping::to_string() const {
  std::string s = "{";
  bool first = true;
  for_each_index([&](std::uint64_t i) {
    if (!first) s += ", ";
    first = false;
    s += AtomicMapping::from_index(type_, i).to_string();
  });
  return s + "}";
}

bool operator==(const ConjunctiveMapping& a, const ConjunctiveMapping& b) {
  return a.type_ == b.type_ && a.bits_ == b.bits_;
}

std::strong_ordering operator<=>(const ConjunctiveMapping& a, const ConjunctiveMapping& b) {
  if (auto c = a.type_ <=> b.type_; c != 0) return c;
  if (a.bits_ == b.bits_) return std::strong_ordering::equal;
  return a.bits_ < b.bits_ ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::vector<AtomicMapping> enum_atoms(const Type& t) {
  auto n = count_or_throw(t);
  if (n > kMaxEnumeration) throw ComplexityLimit("too many atomic mappings to list");
  std::vector<AtomicMapping> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(AtomicMapping::from_index(t, i));
  return out;
}

std::vector<ConjunctiveMapping> enum_conj(const Type& t) {
  auto n = conj_count_or_throw(t);
  std::vector<ConjunctiveMapping> out;
  out.reserve(n);
  for (std::uint64_t m = 0; m < n; ++m) out.push_back(ConjunctiveMapping::from_mask(t, m));
  return out;
}

// Environment

void Environment::extend(const Symbol& alpha, const ConjunctiveMapping& sigma) {
  if (sigma.type() != alpha.type())
    throw TypeMismatch(alpha.name(), "conjunction of type " + sigma.type().to_string() +
                                         " for a symbol of type " + alpha.type().to_string());
  auto it = entries_.find(alpha.name());
  if (it == entries_.end())
    entries_.emplace(alpha.name(), sigma);
  else
    it->second |= sigma;
}

void Environment::assign(const Symbol& alpha, ConjunctiveMapping sigma) {
  if (sigma.type() != alpha.type())
    throw TypeMismatch(alpha.name(), "conjunction of type " + sigma.type().to_string() +
                                         " for a symbol of type " + alpha.type().to_string());
  entries_.insert_or_assign(alpha.name(), std::move(sigma));
}

const ConjunctiveMapping* Environment::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

// Semantics

ConjunctiveMapping terminal_semantics(const Symbol& a) {
  const Type& t = a.type();
  ConjunctiveMapping out(t);
  auto args = t.arguments();
  std::vector<std::uint64_t> masks;
  // Walk every prefix σ1..σi, i >= 1, as a mixed-radix counter.
  auto walk = [&](auto&& self, const Type& rest, bool has_inf) -> void {
    if (rest.is_ground()) return;
    auto n = conj_count_or_throw(rest.argument());
    for (std::uint64_t m = 0; m < n; ++m) {
      masks.push_back(m);
      bool inf = has_inf || ConjunctiveMapping::from_mask(rest.argument(), m).has_inf();
      if (inf) out.insert_index(chain_index(t, masks, AtomicMapping::inf(rest.result()).index()));
      self(self, rest.result(), inf);
      masks.pop_back();
    }
  };
  walk(walk, t, false);
  return out;
}

ConjunctiveMapping sem_apply(const ConjunctiveMapping& f, const ConjunctiveMapping& arg) {
  const Type& t = f.type();
  if (t.is_ground()) throw TypeMismatch("application", "applying a ground conjunction");
  if (arg.type() != t.argument())
    throw TypeMismatch("application", "argument conjunction of type " + arg.type().to_string() +
                                          ", expected " + t.argument().to_string());
  const Type& res = t.result();
  ConjunctiveMapping out(res);
  auto r = *atom_count(res);
  auto amask = arg.mask();
  f.for_each_index([&](std::uint64_t i) {
    if (i == 0) {
      out.insert(AtomicMapping::inf(res));
      return;
    }
    auto sigma = (i - 1) / r;
    if ((sigma & ~amask) == 0) out.insert_index((i - 1) % r);
  });
  if (!res.is_ground()) out |= inf_to_inf(res);
  return out;
}

namespace {

ConjunctiveMapping symbol_semantics(const Environment& env, const Symbol& s) {
  if (s.is_terminal()) return terminal_semantics(s);
  ConjunctiveMapping out(s.type());
  if (const auto* c = env.find(s.name())) out |= *c;
  if (!s.type().is_ground()) out |= inf_to_inf(s.type());
  return out;
}

// Goal-directed search over the six judgement rules, memoized per
// (subterm, atom).
class Judge {
 public:
  explicit Judge(const Environment& env) : env_(env) {}

  bool operator()(const Term& t, const AtomicMapping& theta) {
    if (theta.type() != t.type()) return false;
    std::string key = t.to_string() + "\x1f" + std::to_string(theta.index());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = search(t, theta);
    memo_.emplace(std::move(key), r);
    return r;
  }

 private:
  bool search(const Term& t, const AtomicMapping& theta) {
    // (q∞ -> q∞ I)
    if (theta.is_arrow() && theta.result().is_inf()) {
      auto arg = theta.argument();
      if (arg.size() == 1 && arg.has_inf()) return true;
    }
    if (t.args().empty()) {
      const Symbol& s = t.head();
      if (s.is_terminal()) return sigma_rule(s.type(), theta);
      const auto* c = env_.find(s.name());
      return c && c->contains(theta);  // (At)
    }
    Term t1 = t.prefix(t.args().size() - 1);
    const Term& t2 = t.args().back();
    // (q∞ I)
    if (theta.is_inf() && (*this)(t1, AtomicMapping::inf(t1.type()))) return true;
    // (App) with (Set) on the argument
    for (const auto& sigma : enum_conj(t2.type())) {
      if (!(*this)(t1, AtomicMapping::arrow(sigma, theta))) continue;
      bool all = true;
      sigma.for_each_index([&](std::uint64_t i) {
        if (all && !(*this)(t2, AtomicMapping::from_index(t2.type(), i))) all = false;
      });
      if (all) return true;
    }
    return false;
  }

  // Terminal atoms: σ1 -> ... -> σi -> q∞ with i >= 1 and q∞ in some σj.
  static bool sigma_rule(const Type& t, AtomicMapping theta) {
    bool seen_inf = false;
    std::size_t i = 0;
    while (theta.is_arrow()) {
      seen_inf = seen_inf || theta.argument().has_inf();
      theta = theta.result();
      ++i;
    }
    (void)t;
    return i >= 1 && theta.is_inf() && seen_inf;
  }

  const Environment& env_;
  std::unordered_map<std::string, bool> memo_;
};

void require_typable(const Scheme& g) {
  require_valid(g);
  if (!g.inert().empty())
    throw SchemeError("the type system needs a rule for every non-terminal (inert: " +
                      g.inert().front() + ")");
}

// Calls f(masks) for every tuple of conjunction masks over `types`.
template <typename F>
void for_each_tuple(std::span<const Type> types, F&& f) {
  std::vector<std::uint64_t> radix;
  std::uint64_t total = 1;
  for (const auto& t : types) {
    radix.push_back(conj_count_or_throw(t));
    total = mul_sat(total, radix.back());
  }
  if (total > kMaxEnumeration) throw ComplexityLimit("too many argument annotations to enumerate");
  std::vector<std::uint64_t> masks(types.size(), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    f(std::span<const std::uint64_t>(masks));
    for (std::size_t j = masks.size(); j-- > 0;) {
      if (++masks[j] < radix[j]) break;
      masks[j] = 0;
    }
  }
}

bool any_inf(std::span<const Type> types, std::span<const std::uint64_t> masks) {
  for (std::size_t j = 0; j < masks.size(); ++j) {
    std::uint64_t inf_bit = types[j].is_ground() ? 2 : 1;
    if (masks[j] & inf_bit) return true;
  }
  return false;
}

}  // namespace

ConjunctiveMapping semantics(const Environment& env, const Term& t) {
  auto out = symbol_semantics(env, t.head());
  for (const auto& a : t.args()) out = sem_apply(out, semantics(env, a));
  return out;
}

bool judge(const Environment& env, const Term& t, const AtomicMapping& theta) {
  return Judge(env)(t, theta);
}

Environment initial_environment(const Scheme& g) {
  Environment env;
  for (const auto& f : g.nonterminals()) env.assign(f, ConjunctiveMapping::full(f.type()));
  return env;
}

Environment step_F(const Scheme& g, const Environment& theta) {
  require_typable(g);
  Environment out;
  for (const auto& f : g.nonterminals()) {
    const Rule* rule = g.rule_for(f.name());
    auto types = f.type().arguments();
    ConjunctiveMapping next(f.type());
    const auto bot = AtomicMapping::bot().index();
    const auto inf = AtomicMapping::inf(Type::ground()).index();
    for_each_tuple(types, [&](std::span<const std::uint64_t> masks) {
      if (any_inf(types, masks)) {
        next.insert_index(chain_index(f.type(), masks, bot));
        next.insert_index(chain_index(f.type(), masks, inf));
        return;
      }
      Environment local = theta;
      for (std::size_t j = 0; j < masks.size(); ++j)
        local.extend(rule->params[j], ConjunctiveMapping::from_mask(types[j], masks[j]));
      auto s = semantics(local, rule->body);
      if (s.has_bot()) next.insert_index(chain_index(f.type(), masks, bot));
      if (s.has_inf()) next.insert_index(chain_index(f.type(), masks, inf));
    });
    // Proper prefixes σ1..σi -> q∞ with q∞ in some σj.
    for (std::size_t i = 1; i < types.size(); ++i) {
      auto prefix = std::span<const Type>(types).first(i);
      auto rest = f.type().drop(i);
      for_each_tuple(prefix, [&](std::span<const std::uint64_t> masks) {
        if (any_inf(prefix, masks))
          next.insert_index(chain_index(f.type(), masks, AtomicMapping::inf(rest).index()));
      });
    }
    out.assign(f, std::move(next));
  }
  return out;
}

Fixpoint theta_star(const Scheme& g) {
  Fixpoint fp{initial_environment(g), 0};
  for (;;) {
    auto next = step_F(g, fp.theta);
    ++fp.iterations;
    if (next == fp.theta) return fp;
    fp.theta = std::move(next);
  }
}

std::vector<std::string> witness_violations(const Scheme& g, const Environment& theta) {
  require_typable(g);
  std::vector<std::string> out;
  for (const auto& f : g.nonterminals()) {
    const Rule* rule = g.rule_for(f.name());
    const auto* c = theta.find(f.name());
    if (!c) {
      out.push_back(f.name() + ": missing from the environment");
      continue;
    }
    if (c->type() != f.type()) {
      out.push_back(f.name() + ": conjunction has the wrong type");
      continue;
    }
    auto derivable = *c;
    if (!f.type().is_ground()) derivable |= inf_to_inf(f.type());
    derivable.for_each_index([&](std::uint64_t idx) {
      AtomicMapping theta_atom = AtomicMapping::from_index(f.type(), idx);
      std::vector<ConjunctiveMapping> sigmas;
      AtomicMapping q = theta_atom;
      bool has_inf = false;
      while (q.is_arrow()) {
        sigmas.push_back(q.argument());
        has_inf = has_inf || sigmas.back().has_inf();
        q = q.result();
      }
      if (has_inf) return;
      bool ok = false;
      if (sigmas.size() == rule->params.size()) {
        Environment local = theta;
        for (std::size_t j = 0; j < sigmas.size(); ++j) local.extend(rule->params[j], sigmas[j]);
        ok = judge(local, rule->body, q);
      }
      if (!ok) out.push_back(f.name() + " :: " + theta_atom.to_string());
    });
  }
  return out;
}

// SemanticsTable

SemanticsTable::SemanticsTable(const Scheme& g, Environment theta_star)
    : theta_(std::move(theta_star)) {
  for (const auto& a : g.terminals()) terminals_.emplace(a.name(), terminal_semantics(a));
}

SemanticsTable::SemanticsTable(const Scheme& g) : SemanticsTable(g, theta_star(g).theta) {}

ConjunctiveMapping SemanticsTable::semantics(const Term& t, const Environment& venv) {
  return eval(t, venv, venv.empty());
}

ConjunctiveMapping SemanticsTable::apply_symbol(const Symbol& f,
                                                std::span<const ConjunctiveMapping> args) {
  auto out = eval(Term(f), {}, true);
  for (const auto& a : args) out = sem_apply(out, a);
  return out;
}

ConjunctiveMapping SemanticsTable::eval(const Term& t, const Environment& venv, bool closed) {
  if (auto it = memo_.find(t.id()); it != memo_.end()) return it->second.second;
  const Symbol& h = t.head();
  std::optional<ConjunctiveMapping> out;
  bool has_var = false;
  if (h.is_terminal()) {
    auto it = terminals_.find(h.name());
    out = it != terminals_.end() ? it->second : terminal_semantics(h);
  } else if (h.is_variable()) {
    const auto* c = venv.find(h.name());
    if (!c) throw SchemeError("unbound variable '" + h.name() + "'");
    out = *c;
    if (!h.type().is_ground()) *out |= inf_to_inf(h.type());
    has_var = true;
  } else {
    out = symbol_semantics(theta_, h);
  }
  for (const auto& a : t.args()) {
    if (!closed && !has_var && contains_variables(a)) has_var = true;
    out = sem_apply(*out, eval(a, venv, closed));
  }
  if (closed || !has_var) memo_.emplace(t.id(), std::make_pair(t, *out));
  return *out;
}

std::string format_environment(const Scheme& g, const Environment& theta) {
  std::ostringstream os;
  for (const auto& f : g.nonterminals()) {
    const auto* c = theta.find(f.name());
    os << f.name() << " :: " << (c ? c->to_string() : std::string("{}")) << '\n';
  }
  return os.str();
}

}  // namespace hors
