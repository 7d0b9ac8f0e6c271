#pragma once

// Intersection types over Q = {q⊥, q∞} characterizing IO evaluation:
// a ground term matches q⊥ when its IO value tree is ⊥, and any term
// matches q∞ when it contains a redex whose IO evaluation cannot finish.
//
// Atoms of a type are numbered in canonical order:
//   o:        0 = q⊥, 1 = q∞
//   τ1 -> τ2: 0 = q∞, then σ -> θ at 1 + mask(σ) * |atoms(τ2)| + index(θ)
// A conjunction is a bitset over the atoms of its type; conjunctions are
// ordered by that bitset read as a binary number, so the conjunctions of o
// come out as {}, {q⊥}, {q∞}, {q⊥, q∞}.

#include <boost/dynamic_bitset.hpp>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hors/scheme.hpp"

namespace hors {

/// Atoms larger than this are refused with ComplexityLimit.
inline constexpr std::uint64_t kMaxAtoms = std::uint64_t{1} << 24;
/// Enumerations (of conjunctions, annotation tuples) larger than this are refused.
inline constexpr std::uint64_t kMaxEnumeration = std::uint64_t{1} << 22;

/// |atoms(τ)|, or nullopt when it does not fit in 62 bits.
std::optional<std::uint64_t> atom_count(const Type& t);

class ConjunctiveMapping;

/// θ ::= q⊥ | q∞ | σ -> θ, tagged with the simple type it refines.
class AtomicMapping {
 public:
  static AtomicMapping bot();
  static AtomicMapping inf(const Type& t);
  static AtomicMapping arrow(const ConjunctiveMapping& argument, const AtomicMapping& result);
  static AtomicMapping from_index(Type t, std::uint64_t index);

  const Type& type() const noexcept { return type_; }
  std::uint64_t index() const noexcept { return index_; }

  bool is_bot() const noexcept { return type_.is_ground() && index_ == 0; }
  bool is_inf() const noexcept { return index_ == (type_.is_ground() ? 1u : 0u); }
  bool is_arrow() const noexcept { return !type_.is_ground() && index_ != 0; }
  ConjunctiveMapping argument() const;
  AtomicMapping result() const;

  std::string to_string() const;

  friend bool operator==(const AtomicMapping&, const AtomicMapping&) = default;
  friend std::strong_ordering operator<=>(const AtomicMapping& a, const AtomicMapping& b);

 private:
  AtomicMapping(Type t, std::uint64_t index) : type_(std::move(t)), index_(index) {}
  Type type_;
  std::uint64_t index_ = 0;
};

/// ⋀{θ1, ..., θn} over the atoms of one type.
class ConjunctiveMapping {
 public:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  /// ⋀{} of type `t`. Throws ComplexityLimit if `t` has too many atoms.
  explicit ConjunctiveMapping(Type t);
  ConjunctiveMapping(Type t, std::initializer_list<AtomicMapping> atoms);
  /// Every atom of `t`.
  static ConjunctiveMapping full(Type t);
  /// Conjunction whose bit i is bit i of `mask`; needs |atoms(t)| <= 62.
  static ConjunctiveMapping from_mask(Type t, std::uint64_t mask);

  const Type& type() const noexcept { return type_; }
  const Bits& bits() const noexcept { return bits_; }

  bool contains(const AtomicMapping& a) const;
  bool contains_index(std::uint64_t i) const { return i < bits_.size() && bits_.test(i); }
  void insert(const AtomicMapping& a);
  void insert_index(std::uint64_t i) { bits_.set(i); }
  bool has_inf() const { return contains_index(type_.is_ground() ? 1 : 0); }
  bool has_bot() const { return type_.is_ground() && contains_index(0); }

  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }
  bool subset_of(const ConjunctiveMapping& other) const;
  ConjunctiveMapping& operator|=(const ConjunctiveMapping& other);

  /// Atoms in canonical order.
  std::vector<AtomicMapping> atoms() const;
  template <typename F>
  void for_each_index(F&& f) const {
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) f(std::uint64_t(i));
  }
  /// The bitset as an integer; needs |atoms(type)| <= 62.
  std::uint64_t mask() const;

  /// `{q⊥, {q∞} -> q∞}` style.
  std::string to_string() const;

  friend bool operator==(const ConjunctiveMapping& a, const ConjunctiveMapping& b);
  friend std::strong_ordering operator<=>(const ConjunctiveMapping& a,
                                          const ConjunctiveMapping& b);

 private:
  ConjunctiveMapping(Type t, Bits bits) : type_(std::move(t)), bits_(std::move(bits)) {}
  Type type_;
  Bits bits_;
};

/// The complete atom list of `t` in canonical order.
std::vector<AtomicMapping> enum_atoms(const Type& t);
/// Every conjunction over `t` in canonical order.
std::vector<ConjunctiveMapping> enum_conj(const Type& t);

/// Partial map from non-terminals and variables to conjunctions.
class Environment {
 public:
  /// Θ, α ▷ σ: conjoined with any existing entry for α.
  void extend(const Symbol& alpha, const ConjunctiveMapping& sigma);
  void assign(const Symbol& alpha, ConjunctiveMapping sigma);
  const ConjunctiveMapping* find(std::string_view name) const;
  const std::map<std::string, ConjunctiveMapping, std::less<>>& entries() const noexcept {
    return entries_;
  }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const Environment&, const Environment&) = default;

 private:
  std::map<std::string, ConjunctiveMapping, std::less<>> entries_;
};

/// Atoms a terminal matches: σ1 -> ... -> σi -> q∞ with 1 <= i <= arity and
/// q∞ in some σj.
ConjunctiveMapping terminal_semantics(const Symbol& a);

/// Result of applying a term matching exactly `f` to one matching exactly
/// `arg`: the application, q∞-propagation and q∞ -> q∞ rules.
ConjunctiveMapping sem_apply(const ConjunctiveMapping& f, const ConjunctiveMapping& arg);

/// Every atom `env ⊢ t ▷ θ` derives, computed bottom-up with sem_apply.
ConjunctiveMapping semantics(const Environment& env, const Term& t);

/// Goal-directed search for a derivation of `env ⊢ t ▷ theta`. Independent
/// of sem_apply; meant for small types.
bool judge(const Environment& env, const Term& t, const AtomicMapping& theta);

/// Every type-correct atom for every non-terminal.
Environment initial_environment(const Scheme& g);

/// One application of the refinement operator to every rule.
Environment step_F(const Scheme& g, const Environment& theta);

struct Fixpoint {
  Environment theta;
  /// Applications of step_F performed, the last one confirming the fixpoint.
  std::size_t iterations = 0;
};

/// Greatest fixpoint of step_F below initial_environment(g).
Fixpoint theta_star(const Scheme& g);

/// Atoms of ⟦F⟧ under `theta` that break the witness condition on F's rule,
/// re-checked with judge(). Empty for a witness environment.
std::vector<std::string> witness_violations(const Scheme& g, const Environment& theta);

/// ⟦t⟧ under a fixed Θ⋆ with memoization of closed subterms. Not thread safe.
class SemanticsTable {
 public:
  SemanticsTable(const Scheme& g, Environment theta_star);
  explicit SemanticsTable(const Scheme& g);

  const Environment& theta() const noexcept { return theta_; }

  /// ⟦t⟧ with the variables of `t` bound in `venv`. Throws SchemeError on an
  /// unbound variable.
  ConjunctiveMapping semantics(const Term& t, const Environment& venv = {});

  /// ⟦F⟧ σ1 ... σk.
  ConjunctiveMapping apply_symbol(const Symbol& f, std::span<const ConjunctiveMapping> args);

 private:
  ConjunctiveMapping eval(const Term& t, const Environment& venv, bool closed);

  Environment theta_;
  std::unordered_map<std::string, ConjunctiveMapping> terminals_;
  std::unordered_map<const void*, std::pair<Term, ConjunctiveMapping>> memo_;
};

/// `F :: { ... }` per non-terminal, in declaration order.
std::string format_environment(const Scheme& g, const Environment& theta);

}  // namespace hors
