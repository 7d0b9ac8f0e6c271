#include "hors/engine.hpp"

#include <sstream>
#include <stdexcept>

#include "hors/error.hpp"

namespace hors {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::unrestricted:
      return "any";
    case Policy::oi:
      return "oi";
    case Policy::io:
      return "io";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view text) {
  if (text == "oi") return Policy::oi;
  if (text == "io") return Policy::io;
  if (text == "any" || text == "unrestricted") return Policy::unrestricted;
  return std::nullopt;
}

bool is_redex(const Scheme& g, const Term& t) {
  const Symbol& h = t.head();
  return h.is_nonterminal() && t.is_ground() && !g.is_inert(h.name()) &&
         g.rule_for(h.name()) != nullptr;
}

namespace {

bool contains_redex(const Scheme& g, const Term& t) {
  if (!t.has_nonterminal()) return false;
  if (is_redex(g, t)) return true;
  for (const Term& a : t.args()) {
    if (contains_redex(g, a)) return true;
  }
  return false;
}

bool args_contain_redex(const Scheme& g, const Term& t) {
  for (const Term& a : t.args()) {
    if (contains_redex(g, a)) return true;
  }
  return false;
}

bool classify_all(const Scheme& g, const Term& t, std::vector<std::size_t>& path,
                  bool under_redex, std::vector<RedexInfo>& out) {
  const bool self = is_redex(g, t);
  const std::size_t slot = out.size();
  if (self) out.push_back({Position(path), t.head(), !under_redex, false});
  bool inner = false;
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    path.push_back(i + 1);
    inner |= classify_all(g, t.args()[i], path, under_redex || self, out);
    path.pop_back();
  }
  if (self) out[slot].is_io = !inner;
  return self || inner;
}

/// Where a scanned subterm sits in the whole term: its level (root = 1),
/// whether it is on the terminal spine and whether a redex lies above it.
struct ScanContext {
  std::size_t level = 1;
  bool on_spine = true;
  bool under_redex = false;
};

/// Chooses the redexes of one fair sweep. With `prune`, subterms that can
/// no longer influence the first `depth` levels of the tree are skipped: the
/// region below the terminal spine at that depth, and inert spine nodes.
class Sweeper {
 public:
  Sweeper(const Scheme& g, bool prune, std::size_t depth, bool classify)
      : g_(g), prune_(prune), depth_(depth), classify_(classify) {}

  std::vector<RedexInfo> outermost(const Term& t, const ScanContext& at) {
    std::vector<RedexInfo> out;
    std::vector<std::size_t> path;
    scan_outer(t, path, at.level, out);
    return out;
  }

  std::vector<RedexInfo> innermost(const Term& t, const ScanContext& at) {
    std::vector<RedexInfo> out;
    std::vector<std::size_t> path;
    scan_inner(t, path, at.level, at.on_spine, at.under_redex, out);
    return out;
  }

  /// Context of the subterm at `p` below a subterm scanned with `at`.
  ScanContext descend(const Term& t, const std::vector<std::size_t>& p, ScanContext at) const {
    const Term* cur = &t;
    for (std::size_t i : p) {
      at.under_redex = at.under_redex || is_redex(g_, *cur);
      at.on_spine = at.on_spine && cur->head().is_terminal();
      cur = &cur->args()[i - 1];
    }
    at.level += p.size();
    return at;
  }

 private:
  bool skip_spine_node(const Term& t, std::size_t level) const {
    if (!prune_) return false;
    if (t.head().is_terminal()) return level >= depth_;
    return t.head().is_nonterminal() && !is_redex(g_, t);
  }

  // Every node reached here has only terminal (or non-redex) ancestors.
  void scan_outer(const Term& t, std::vector<std::size_t>& path, std::size_t level,
                  std::vector<RedexInfo>& out) {
    if (!t.has_nonterminal()) return;
    if (is_redex(g_, t)) {
      out.push_back({Position(path), t.head(), true, classify_ && !args_contain_redex(g_, t)});
      return;
    }
    if (skip_spine_node(t, level)) return;
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      path.push_back(i + 1);
      scan_outer(t.args()[i], path, level + 1, out);
      path.pop_back();
    }
  }

  bool scan_inner(const Term& t, std::vector<std::size_t>& path, std::size_t level, bool on_spine,
                  bool under_redex, std::vector<RedexInfo>& out) {
    if (!t.has_nonterminal()) return false;
    const bool self = is_redex(g_, t);
    if (on_spine && !self && skip_spine_node(t, level)) return false;
    const bool child_spine = on_spine && t.head().is_terminal();
    bool inner = false;
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      path.push_back(i + 1);
      inner |= scan_inner(t.args()[i], path, level + 1, child_spine, under_redex || self, out);
      path.pop_back();
    }
    if (self && !inner) out.push_back({Position(path), t.head(), !under_redex, true});
    return self || inner;
  }

  const Scheme& g_;
  bool prune_;
  std::size_t depth_;
  bool classify_;
};

Term contract(const Scheme& g, const Term& redex) {
  const Rule* rule = g.rule_for(redex.head().name());
  return instantiate(rule->body, rule->params, redex.args());
}

void check_budget(const EvalBudget& b) {
  if (b.max_steps == 0 || b.max_term_size == 0 || b.depth == 0) {
    throw std::invalid_argument("evaluation budget fields must be strictly positive");
  }
}

void check_start_term(const Term& t0) {
  if (!t0.is_ground()) {
    throw TypeMismatch("", "derivations start from a ground term, got type " +
                               t0.type().to_string());
  }
  if (contains_variables(t0)) throw TypeMismatch("", "derivations start from a closed term");
}

/// Fair scheduler shared by derive, derive_log and evaluate.
///
/// When every redex chosen by a sweep lies below one position, later sweeps
/// stay inside that subterm until it has no redex left, so the runner
/// descends into it and only rebuilds the enclosing term on the way back.
/// This keeps a long chain of rewrites at a growing depth linear.
class FairRunner {
 public:
  FairRunner(const Scheme& g, Term start, Policy policy, const EvalBudget& budget, bool prune,
             bool classify)
      : g_(g), policy_(policy), budget_(budget), sweeper_(g, prune, budget.depth, classify) {
    size_ = start.size();
    frames_.push_back({std::move(start), {}, ScanContext{}});
  }

  /// `on_step(redex)` is called after each rewrite with the absolute position.
  template <typename OnStep>
  void run(OnStep&& on_step) {
    if (size_ > budget_.max_term_size) {
      exhausted_ = true;
      return;
    }
    for (;;) {
      Frame& top = frames_.back();
      const auto selected = policy_ == Policy::io ? sweeper_.innermost(top.term, top.at)
                                                  : sweeper_.outermost(top.term, top.at);
      if (selected.empty()) {
        if (frames_.size() == 1) return;
        pop();
        continue;
      }
      auto common = common_prefix(selected);
      if (!common.empty()) {
        Term sub = subterm_at(top.term, Position(common));
        ScanContext at = sweeper_.descend(top.term, common, top.at);
        frames_.push_back({std::move(sub), std::move(common), at});
        continue;
      }
      for (const RedexInfo& r : selected) {
        if (steps_ >= budget_.max_steps) {
          exhausted_ = true;
          return;
        }
        Frame& f = frames_.back();
        const Term old = subterm_at(f.term, r.position);
        Term reduct = contract(g_, old);
        size_ = saturating_size(size_ - old.size(), reduct.size());
        f.term = replace_at(f.term, r.position, reduct);
        ++steps_;
        on_step(r);
        if (size_ > budget_.max_term_size) {
          exhausted_ = true;
          return;
        }
      }
    }
  }

  /// Absolute position of a redex reported at `local` in the top frame.
  Position absolute(const Position& local) const {
    std::vector<std::size_t> path;
    for (const Frame& f : frames_) path.insert(path.end(), f.offset.begin(), f.offset.end());
    path.insert(path.end(), local.path().begin(), local.path().end());
    return Position(std::move(path));
  }

  /// The whole current term.
  Term current() const {
    Term t = frames_.back().term;
    for (std::size_t i = frames_.size() - 1; i > 0; --i)
      t = replace_at(frames_[i - 1].term, Position(frames_[i].offset), t);
    return t;
  }

  std::size_t steps() const { return steps_; }
  bool exhausted() const { return exhausted_; }

 private:
  struct Frame {
    Term term;
    /// Path from the enclosing frame's root.
    std::vector<std::size_t> offset;
    ScanContext at;
  };

  static std::size_t saturating_size(std::size_t a, std::size_t b) {
    return a > SIZE_MAX - b ? SIZE_MAX : a + b;
  }

  static std::vector<std::size_t> common_prefix(const std::vector<RedexInfo>& rs) {
    std::vector<std::size_t> p = rs.front().position.path();
    for (const auto& r : rs) {
      const auto& q = r.position.path();
      std::size_t n = 0;
      while (n < p.size() && n < q.size() && p[n] == q[n]) ++n;
      p.resize(n);
    }
    return p;
  }

  void pop() {
    Frame done = std::move(frames_.back());
    frames_.pop_back();
    Frame& parent = frames_.back();
    parent.term = replace_at(parent.term, Position(done.offset), done.term);
  }

  const Scheme& g_;
  Policy policy_;
  const EvalBudget& budget_;
  Sweeper sweeper_;
  std::vector<Frame> frames_;
  std::size_t size_ = 0;
  std::size_t steps_ = 0;
  bool exhausted_ = false;
};

}  // namespace

std::vector<RedexInfo> redexes(const Scheme& g, const Term& t) {
  std::vector<RedexInfo> out;
  std::vector<std::size_t> path;
  classify_all(g, t, path, false, out);
  return out;
}

Term step(const Scheme& g, const Term& t, const Position& p) {
  const Term sub = subterm_at(t, p);
  if (!is_redex(g, sub)) {
    throw NotARedex("'" + sub.to_string() + "' at " + p.to_string() + " is not a redex");
  }
  return replace_at(t, p, contract(g, sub));
}

DerivationTrace derive(const Scheme& g, const Term& t0, Policy policy, const EvalBudget& budget,
                       const Chooser& chooser) {
  check_budget(budget);
  check_start_term(t0);
  DerivationTrace trace{t0, {}, false};
  if (!chooser) {
    FairRunner runner(g, t0, policy, budget, false, true);
    Term before = t0;
    runner.run([&](const RedexInfo& r) {
      Term after = runner.current();
      trace.steps.push_back({before, {runner.absolute(r.position), r.nonterminal, r.is_oi, r.is_io},
                             after});
      before = std::move(after);
    });
    trace.exhausted_budget = runner.exhausted();
    return trace;
  }

  Term current = t0;
  if (current.size() > budget.max_term_size) {
    trace.exhausted_budget = true;
    return trace;
  }
  for (;;) {
    const auto candidates = redexes(g, current);
    if (candidates.empty()) break;
    const auto choice = chooser(current, candidates);
    if (!choice) break;
    const RedexInfo* picked = nullptr;
    for (const auto& r : candidates) {
      if (r.position == *choice) picked = &r;
    }
    if (!picked) {
      throw NotARedex("chooser picked " + choice->to_string() + ", which is not a redex");
    }
    if ((policy == Policy::oi && !picked->is_oi) || (policy == Policy::io && !picked->is_io)) {
      throw PolicyViolation("redex at " + choice->to_string() + " is not an " +
                            std::string(to_string(policy)) + " redex");
    }
    if (trace.steps.size() >= budget.max_steps) {
      trace.exhausted_budget = true;
      break;
    }
    Term next = replace_at(current, picked->position, contract(g, subterm_at(current, *choice)));
    trace.steps.push_back({current, *picked, next});
    current = std::move(next);
    if (current.size() > budget.max_term_size) {
      trace.exhausted_budget = true;
      break;
    }
  }
  return trace;
}

StepLog derive_log(const Scheme& g, const Term& t0, Policy policy, const EvalBudget& budget) {
  check_budget(budget);
  check_start_term(t0);
  FairRunner runner(g, t0, policy, budget, false, true);
  StepLog log{{}, t0, false};
  runner.run([&](const RedexInfo& r) {
    log.redexes.push_back({runner.absolute(r.position), r.nonterminal, r.is_oi, r.is_io});
  });
  log.final_term = runner.current();
  log.exhausted_budget = runner.exhausted();
  return log;
}

std::string format_trace(std::span<const RedexInfo> steps) {
  std::ostringstream out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const RedexInfo& r = steps[i];
    out << (i + 1) << ' ' << r.position.to_string() << ' ' << r.nonterminal.name()
        << " OI=" << (r.is_oi ? 1 : 0) << " IO=" << (r.is_io ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string format_trace(const DerivationTrace& trace) {
  std::vector<RedexInfo> infos;
  infos.reserve(trace.steps.size());
  for (const auto& s : trace.steps) infos.push_back(s.redex);
  return format_trace(infos);
}

Evaluation evaluate(const Scheme& g, const Term& t0, Policy policy, const EvalBudget& budget) {
  check_budget(budget);
  check_start_term(t0);
  FairRunner runner(g, t0, policy, budget, true, false);
  runner.run([](const RedexInfo&) {});
  return {bottom_transform(runner.current(), budget.depth), runner.steps(), runner.exhausted()};
}

Evaluation evaluate(const Scheme& g, Policy policy, const EvalBudget& budget) {
  return evaluate(g, Term(g.start()), policy, budget);
}

PartialTree value_tree(const Scheme& g, Policy policy, const EvalBudget& budget) {
  return evaluate(g, policy, budget).tree;
}

}  // namespace hors
