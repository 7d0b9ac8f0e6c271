// Acceptance checks 1-8. One PASS/FAIL line per criterion; exit status 1 if
// any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "hors/bar.hpp"
#include "hors/engine.hpp"
#include "hors/error.hpp"
#include "hors/intersection.hpp"
#include "hors/labelling.hpp"
#include "hors/parser.hpp"

using namespace hors;
using namespace hors::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> problems;
  std::string note;

  void fail(std::string why) {
    pass = false;
    if (problems.size() < 8) problems.push_back(std::move(why));
  }
  void check(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

EvalBudget budget(std::size_t steps, std::size_t depth) {
  EvalBudget b;
  b.max_steps = steps;
  b.depth = depth;
  return b;
}

std::vector<NamedScheme> low_order(const std::vector<NamedScheme>& all) {
  std::vector<NamedScheme> out;
  for (const auto& n : all)
    if (scheme_order(n.scheme) <= 2) out.push_back(n);
  return out;
}

// Complete binary b-tree of `levels` levels, ⊥ below.
PartialTree b_tree(const Symbol& b, std::size_t levels) {
  if (levels == 0) return PartialTree::bottom();
  return PartialTree::node(b, {b_tree(b, levels - 1), b_tree(b, levels - 1)});
}

Outcome criterion1() {
  Outcome r;
  Scheme g = load_scheme("btree.hors");
  auto t0 = Clock::now();
  PartialTree got = value_tree(g, Policy::oi, budget(10000, 4));
  double dt = seconds_since(t0);
  // Root a; first child the b-tree down to depth 4; second ⊥; third c.
  PartialTree want = PartialTree::node(
      *g.find("a"), {b_tree(*g.find("b"), 3), PartialTree::bottom(), PartialTree::node(*g.find("c"))});
  r.check(got == want, "tree " + got.to_string() + " != " + want.to_string());
  r.check(dt < 5.0, "took " + std::to_string(dt) + " s");
  r.note = got.to_string() + ", " + std::to_string(dt) + " s";
  return r;
}

constexpr const char* kBarredDiverge = R"(terminal a : o
terminal c : o
nonterminal I : o
nonterminal D : o
nonterminal Sb : o -> o
nonterminal Ab : o -> o
nonterminal Cb : o -> o
nonterminal Fb : (o -> o) -> (o -> o) -> o -> o
nonterminal Hb : (o -> o) -> o -> o
var d : o
var xb : o -> o
var yb : o -> o
inert D
start I
rule I = Sb D
rule Sb d = Fb (Hb Ab) Cb D
rule Fb xb yb d = yb D
rule Hb xb d = Hb (Hb xb) D
rule Cb d = c
rule Ab d = a
)";

Outcome criterion2() {
  Outcome r;
  auto t0 = Clock::now();
  Scheme g = load_scheme("diverge.hors");
  r.check(value_tree(g, Policy::oi, budget(1000, 5)).to_string() == "c", "OI tree is not c");
  r.check(value_tree(g, Policy::io, budget(1000, 5)).is_bottom(), "IO tree is not ⊥");

  Scheme gb = bar_scheme(g);
  auto iso = isomorphism(gb, parse_scheme(kBarredDiverge));
  r.check(iso.has_value(), "barred scheme differs from the displayed rules");

  // The displayed trace, renamed through the isomorphism.
  std::vector<std::string> want = {"Sb D", "Fb (Hb Ab) Cb D", "Cb D", "c"};
  if (iso) {
    for (auto& w : want) {
      std::string out;
      std::istringstream words(w);
      std::string tok;
      while (words >> tok) {
        std::string lead, trail;
        while (!tok.empty() && tok.front() == '(') lead += '(', tok.erase(0, 1);
        while (!tok.empty() && tok.back() == ')') trail += ')', tok.pop_back();
        for (const auto& [mine, theirs] : *iso)
          if (theirs == tok) {
            tok = mine;
            break;
          }
        out += (out.empty() ? "" : " ") + lead + tok + trail;
      }
      w = out;
    }
  }
  for (Policy p : {Policy::unrestricted, Policy::oi, Policy::io}) {
    auto tr = derive(gb, Term(gb.start()), p, budget(100, 5));
    std::vector<std::string> got;
    for (const auto& s : tr.steps) got.push_back(s.after.to_string());
    r.check(tr.start.to_string() == gb.start_name() && got == want,
            std::string("trace under ") + std::string(to_string(p)) + " differs");
  }
  r.check(value_tree(gb, Policy::io, budget(1000, 5)).to_string() == "c", "Ḡ IO tree is not c");
  double dt = seconds_since(t0);
  r.check(dt < 1.0, "took " + std::to_string(dt) + " s");
  r.note = std::to_string(dt) + " s";
  return r;
}

Chooser random_chooser(std::mt19937& rng) {
  return [&rng](const Term&, std::span<const RedexInfo> rs) -> std::optional<Position> {
    return rs[std::uniform_int_distribution<std::size_t>(0, rs.size() - 1)(rng)].position;
  };
}

Outcome criterion3(const std::vector<NamedScheme>& corpus_schemes) {
  Outcome r;
  std::mt19937 rng(31);
  std::size_t terms = 0;
  for (const auto& [name, g] : corpus_schemes) {
    Scheme gb = bar_scheme(g);
    auto inspect = [&](const Term& t) {
      ++terms;
      for (const auto& x : redexes(gb, t))
        if (!x.is_oi || !x.is_io)
          r.fail(name + ": redex at " + x.position.to_string() + " in " + t.to_string());
    };
    auto walk = [&](Policy p, const Chooser& ch) {
      EvalBudget b = budget(500, 3);
      b.max_term_size = 20000;
      auto tr = derive(gb, Term(gb.start()), p, b, ch);
      inspect(tr.start);
      for (const auto& s : tr.steps) inspect(s.after);
    };
    walk(Policy::oi, {});
    walk(Policy::io, {});
    for (int k = 0; k < 3; ++k) walk(Policy::unrestricted, random_chooser(rng));
  }
  r.note = std::to_string(corpus_schemes.size()) + " schemes, " + std::to_string(terms) +
           " terms inspected";
  r.check(corpus_schemes.size() >= 20, "corpus too small");
  return r;
}

Outcome criterion4(const std::vector<NamedScheme>& corpus_schemes) {
  Outcome r;
  std::size_t compared = 0;
  std::vector<std::string> skipped;
  for (const auto& [name, g] : corpus_schemes) {
    auto lhs = evaluate(bar_scheme(g), Policy::io, budget(10000, 3));
    auto rhs = evaluate(g, Policy::oi, budget(10000, 3));
    if (lhs.exhausted_budget && rhs.exhausted_budget) {
      skipped.push_back(name);
      continue;
    }
    ++compared;
    r.check(lhs.tree == rhs.tree,
            name + ": " + lhs.tree.to_string() + " vs " + rhs.tree.to_string());
  }
  r.note = std::to_string(compared) + " compared, " + std::to_string(skipped.size()) +
           " skipped (both sides out of budget)";
  for (std::size_t i = 0; i < skipped.size(); ++i)
    r.note += (i == 0 ? ": " : ", ") + skipped[i];
  return r;
}

struct Truth {
  const char* scheme;
  const char* term;
  bool bot;
  bool inf;
};

// Worked out by hand from the rules; see tests/support/corpus.cpp.
const Truth kTruth[] = {
    {"mini", "H", false, true},
    {"mini", "F H", true, true},
    {"mini", "F c", false, false},
    {"mini", "S", true, true},
    {"mini", "a c", false, false},
    {"diverge", "S", true, true},
    {"diverge", "H a", true, true},
    {"diverge", "F c c", false, false},
    {"diverge", "F c (H c)", true, true},
    {"twice", "S", false, true},
    {"twice", "Twice a c", false, false},
    {"twice", "Loop c", true, true},
    {"twice", "Twice a (Loop c)", true, true},
    {"const", "S", true, true},
    {"const", "K c c", false, false},
    {"stream", "S", false, true},
    {"stream", "b c c", false, false},
    {"apply", "S", false, true},
    {"apply", "App a c", false, false},
    {"apply", "App (Const c) c", false, false},
    {"fix", "S", false, true},
    {"fix", "Fix a", false, true},
    {"fix", "Fix (Const c)", true, true},
    {"fix", "Const c (Fix a)", true, true},
};

Outcome criterion5() {
  Outcome r;
  std::vector<NamedScheme> hand = hand_schemes();
  for (auto& p : example_schemes())
    if (p.name != "btree") hand.push_back(std::move(p));
  std::mt19937 rng(17);
  std::size_t checked = 0;
  for (const auto& [name, g] : hand) {
    SemanticsTable table(g);
    auto io_bottom = [&](const Term& t) {
      EvalBudget b = budget(10000, 1);
      return evaluate(g, t, Policy::io, b).tree.is_bottom();
    };
    std::vector<Term> terms;
    for (const auto& row : kTruth) {
      if (row.scheme != name) continue;
      Term t = parse_term(row.term, g);
      auto sem = table.semantics(t);
      ++checked;
      r.check(sem.has_bot() == row.bot, name + ": q⊥ for " + row.term);
      r.check(sem.has_inf() == row.inf, name + ": q∞ for " + row.term);
      terms.push_back(t);
    }
    for (int k = 0; k < 25; ++k)
      if (auto t = random_term(rng, g, Type::ground(), 4)) terms.push_back(*t);
    for (const auto& t : terms) {
      ++checked;
      bool bot = table.semantics(t).has_bot();
      r.check(bot == io_bottom(t), name + ": q⊥ disagrees with IO evaluation on " + t.to_string());
    }
  }
  r.note = std::to_string(checked) + " checks";
  return r;
}

Outcome criterion6(const std::vector<NamedScheme>& corpus_schemes) {
  Outcome r;
  double worst = 0;
  std::size_t done = 0;
  std::vector<std::string> skipped;
  for (const auto& [name, g] : corpus_schemes) {
    if (scheme_order(g) > 2) {
      skipped.push_back(name);
      continue;
    }
    auto t0 = Clock::now();
    Fixpoint fp = theta_star(g);
    std::uint64_t bound = 0;
    for (const Symbol& f : g.nonterminals()) bound += enum_atoms(f.type()).size();
    r.check(fp.iterations <= bound, name + ": " + std::to_string(fp.iterations) +
                                        " iterations > " + std::to_string(bound));
    r.check(step_F(g, fp.theta) == fp.theta, name + ": not a fixpoint");
    for (const auto& v : witness_violations(g, fp.theta)) r.fail(name + ": witness " + v);
    double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    r.check(dt < 60.0, name + ": took " + std::to_string(dt) + " s");
    ++done;
  }
  r.note = std::to_string(done) + " schemes, slowest " + std::to_string(worst) + " s";
  for (std::size_t i = 0; i < skipped.size(); ++i)
    r.note += (i == 0 ? "; order > 2 not analysed: " : ", ") + skipped[i];
  return r;
}

Outcome criterion7(const std::vector<NamedScheme>& corpus_schemes) {
  Outcome r;
  std::size_t done = 0;
  for (const auto& [name, g] : corpus_schemes) {
    LabelledScheme lg = label_scheme(g);
    SelfCorrectingScheme sc = self_correct(lg);
    EvalBudget b = budget(10000, 3);
    PartialTree io = evaluate(g, Policy::io, b).tree;
    PartialTree lab = evaluate(lg.scheme, Policy::io, b).tree;
    PartialTree oi2 = evaluate(sc.scheme, Policy::oi, b).tree;
    PartialTree io2 = evaluate(sc.scheme, Policy::io, b).tree;
    r.check(lab == io, name + ": G′ io " + lab.to_string() + " vs G io " + io.to_string());
    r.check(oi2 == io, name + ": G″ oi " + oi2.to_string() + " vs G io " + io.to_string());
    r.check(io2 == io, name + ": G″ io " + io2.to_string() + " vs G io " + io.to_string());
    r.check(scheme_order(sc.scheme) == scheme_order(g), name + ": order changed");
    ++done;
  }
  r.note = std::to_string(done) + " schemes";
  return r;
}

// Types of the partial applications the signature can build.
std::vector<Type> arrow_types(const Scheme& g) {
  std::vector<Type> out;
  auto add = [&](Type t) {
    for (const auto& u : out)
      if (u == t) return;
    out.push_back(std::move(t));
  };
  for (const auto& list : {g.terminals(), g.nonterminals()})
    for (const Symbol& s : list) {
      Type t = s.type();
      while (!t.is_ground()) {
        add(t);
        t = t.result();
      }
    }
  return out;
}

Outcome criterion8(const std::vector<NamedScheme>& corpus_schemes) {
  Outcome r;
  std::mt19937 rng(20240611);
  std::vector<std::pair<const NamedScheme*, Environment>> pool;
  for (const auto& n : corpus_schemes) pool.emplace_back(&n, theta_star(n.scheme).theta);
  std::size_t made = 0, attempts = 0;
  while (made < 1000 && attempts < 100000) {
    ++attempts;
    auto& [ns, theta] = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    const Scheme& g = ns->scheme;
    auto types = arrow_types(g);
    const Type& ft = types[std::uniform_int_distribution<std::size_t>(0, types.size() - 1)(rng)];
    // Result types above 2^12 atoms make the per-atom judge too slow.
    if (atom_count(ft.result()).value_or(~0ull) > 4096) continue;
    auto t1 = random_term(rng, g, ft, 3);
    auto t2 = random_term(rng, g, ft.argument(), 3);
    if (!t1 || !t2) continue;
    Term app = Term::apply(*t1, {*t2});
    ++made;
    ConjunctiveMapping composed = sem_apply(semantics(theta, *t1), semantics(theta, *t2));
    // The whole application judged atom by atom, independently of sem_apply.
    ConjunctiveMapping direct(app.type());
    for (const auto& at : enum_atoms(app.type()))
      if (judge(theta, app, at)) direct.insert(at);
    r.check(composed == direct, ns->name + ": " + app.to_string() + " composed " +
                                    composed.to_string() + " judged " + direct.to_string());
  }
  r.check(made == 1000, "only " + std::to_string(made) + " applications generated");
  r.note = std::to_string(made) + " applications";
  return r;
}

}  // namespace

int main() {
  std::vector<NamedScheme> all = corpus(20);
  std::vector<NamedScheme> low = low_order(all);

  struct Entry {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  std::vector<Entry> entries = {
      {1, "example value tree at depth 4", criterion1},
      {2, "OI/IO divergence and the barred scheme", criterion2},
      {3, "barred schemes only have OI and IO redexes", [&] { return criterion3(all); }},
      {4, "barred IO tree equals OI tree", [&] { return criterion4(all); }},
      {5, "type system against IO evaluation", criterion5},
      {6, "fixpoint sanity", [&] { return criterion6(all); }},
      {7, "labelled and self-correcting schemes", [&] { return criterion7(low); }},
      {8, "compositional semantics", [&] { return criterion8(low); }},
  };

  bool all_pass = true;
  for (const auto& e : entries) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.fail(std::string("exception: ") + ex.what());
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << e.id << ": " << e.title;
    if (!o.note.empty()) std::cout << " (" << o.note << ")";
    std::printf(" [%.2f s]", seconds_since(t0));
    std::cout << '\n';
    for (const auto& p : o.problems) std::cout << "  " << p << '\n';
    std::cout.flush();
  }
  return all_pass ? 0 : 1;
}
