#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "hors/engine.hpp"
#include "hors/error.hpp"
#include "hors/labelling.hpp"
#include "hors/parser.hpp"

using namespace hors;
using namespace hors::testing;

namespace {

Scheme find(const std::vector<NamedScheme>& v, std::string_view name) {
  for (const auto& n : v)
    if (n.name == name) return n.scheme;
  throw std::runtime_error("no scheme " + std::string(name));
}

}  // namespace

TEST(Nbvar, Counts) {
  EXPECT_EQ(nbvar(parse_type("o")), 1u);
  EXPECT_EQ(nbvar(parse_type("o -> o")), 4u);
  EXPECT_EQ(nbvar(parse_type("o -> o -> o")), 16u);
  EXPECT_EQ(nbvar(parse_type("(o -> o) -> o")), 512u);
  EXPECT_THROW(nbvar(parse_type("((o -> o) -> o) -> o")), ComplexityLimit);
}

TEST(SigmaTuples, MixedRadixWithFirstComponentMostSignificant) {
  Type t = parse_type("o -> o -> o");
  auto ts = sigma_tuples(t);
  ASSERT_EQ(ts.size(), 16u);
  EXPECT_EQ(ts[1][0].to_string(), "{}");
  EXPECT_EQ(ts[1][1].to_string(), "{q⊥}");
  EXPECT_EQ(ts[4][0].to_string(), "{q⊥}");
  EXPECT_EQ(ts[4][1].to_string(), "{}");
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(sigma_index(t, ts[i]), i);
}

TEST(PlusType, Examples) {
  EXPECT_EQ(plus_type(parse_type("o")).to_string(), "o");
  EXPECT_EQ(plus_type(parse_type("o -> o -> o")).to_string(), "o -> o -> o");
  EXPECT_EQ(plus_type(parse_type("(o -> o) -> o")).to_string(),
            "(o -> o) -> (o -> o) -> (o -> o) -> (o -> o) -> o");
  // Order is preserved.
  for (const char* s : {"o", "o -> o", "(o -> o) -> o", "(o -> o) -> o -> o"}) {
    Type t = parse_type(s);
    EXPECT_EQ(plus_type(t).order(), t.order()) << s;
  }
}

TEST(PlusTerm, DuplicatesHigherOrderArguments) {
  Scheme g = parse(R"(terminal c : o
nonterminal S : o
nonterminal F : (o -> o) -> o
nonterminal H : o -> o
var x : o
var f : o -> o
start S
rule S = F H
rule F f = f c
rule H x = x
)");
  SemanticsTable table(g);
  Term t = plus_term(table, parse_term("F H", g), {});
  ASSERT_EQ(t.args().size(), 4u);
  EXPECT_EQ(t.to_string().substr(t.to_string().find(' ')), " H#1 H#2 H#3 H#4");
  // The head is annotated with ⟦H⟧.
  SigmaTuple ann{table.semantics(parse_term("H", g))};
  Type ft = g.find("F")->type();
  EXPECT_EQ(t.head().name(), "F#" + std::to_string(sigma_index(ft, ann) + 1));
}

TEST(PlusTerm, TerminalsStayPlain) {
  Scheme g = load_scheme("mini.hors");
  SemanticsTable table(g);
  EXPECT_EQ(plus_term(table, parse_term("a (F c)", g), {}).to_string(), "a (F#1 c)");
  EXPECT_EQ(plus_term(table, parse_term("F H", g), {}).to_string(), "F#3 H");
}

TEST(LabelScheme, MiniScheme) {
  Scheme g = load_scheme("mini.hors");
  LabelledScheme lg = label_scheme(g);
  EXPECT_EQ(lg.scheme.rules().size(), 6u);
  EXPECT_EQ(lg.rules.size(), 6u);
  EXPECT_TRUE(validate(lg.scheme).empty());
  EXPECT_EQ(lg.scheme.rule_for("S")->body.to_string(), "F#3 H");
  EXPECT_EQ(lg.scheme.rule_for("H")->body.to_string(), "a H");
  SelfCorrectingScheme sc = self_correct(lg);
  EXPECT_EQ(sc.void_name, "Void");
  EXPECT_EQ(sc.voided, (std::vector<std::string>{"S", "F#3", "F#4"}));
  EXPECT_EQ(sc.scheme.rules().size(), 7u);
  EXPECT_EQ(sc.scheme.rule_for("Void")->body.to_string(), "Void");
  EXPECT_EQ(sc.scheme.rule_for("S")->body.to_string(), "Void");
  EXPECT_EQ(sc.scheme.rule_for("F#1")->body.to_string(), "c");
}

TEST(LabelScheme, VoidNameIsFresh) {
  Scheme g = parse(R"(terminal c : o
nonterminal S : o
nonterminal Void : o
start S
rule S = Void
rule Void = c
)");
  SelfCorrectingScheme sc = self_correct(label_scheme(g));
  EXPECT_NE(sc.void_name, "Void");
  std::size_t loops = 0;
  for (const auto& r : sc.scheme.rules())
    if (r.body.to_string() == sc.void_name && r.lhs.name() == sc.void_name) ++loops;
  EXPECT_EQ(loops, 1u);
  EXPECT_EQ(value_tree(sc.scheme, Policy::oi, EvalBudget{}).to_string(), "c");
}

TEST(LabelScheme, TwiceScheme) {
  Scheme g = find(hand_schemes(), "twice");
  LabelledScheme lg = label_scheme(g);
  // S, Loop (4 annotations) and Twice (512 * 4 annotations).
  EXPECT_EQ(lg.scheme.rules().size(), 1u + 4u + 2048u);
  Scheme out = io_to_oi(g);
  EvalBudget b;
  b.depth = 4;
  EXPECT_EQ(value_tree(out, Policy::oi, b).to_string(), "b (a (a c)) ⊥");
  EXPECT_EQ(value_tree(g, Policy::io, b).to_string(), "b (a (a c)) ⊥");
  EXPECT_EQ(value_tree(g, Policy::oi, b).to_string(), "b (a (a c)) (a (a ⊥))");
  Scheme pruned = io_to_oi(g, true);
  EXPECT_LT(pruned.rules().size(), out.rules().size());
  EXPECT_EQ(value_tree(pruned, Policy::oi, b).to_string(), "b (a (a c)) ⊥");
}

TEST(Unlabel, RecoversSourceTerms) {
  std::mt19937 rng(3);
  for (const auto& [name, g] : corpus(20)) {
    if (scheme_order(g) > 2 || name == "btree") continue;
    LabelledScheme lg;
    try {
      lg = label_scheme(g);
    } catch (const ComplexityLimit&) {
      continue;
    }
    SemanticsTable table(g, lg.fixpoint.theta);
    for (int k = 0; k < 10; ++k) {
      auto t = random_term(rng, g, Type::ground(), 4);
      if (!t) continue;
      EXPECT_EQ(unlabel(lg, plus_term(table, *t, {})).to_string(), t->to_string()) << name;
    }
    for (const auto& ar : lg.rules) {
      const Rule& r = lg.scheme.rules()[ar.rule];
      const Rule* src = g.rule_for(ar.base.name());
      ASSERT_NE(src, nullptr);
      EXPECT_EQ(unlabel(lg, r.body).to_string(), src->body.to_string()) << name;
    }
  }
}

TEST(Report, MiniScheme) {
  Scheme g = load_scheme("mini.hors");
  LabelledScheme lg = label_scheme(g);
  SelfCorrectingScheme sc = self_correct(lg);
  std::string text = format_report(make_report(g, lg, sc, sc.scheme));
  EXPECT_EQ(text,
            "rules: source 3, labelled 6, output 7\n"
            "nbvar:\n"
            "  o : 1\n"
            "  o -> o : 4\n"
            "rewritten to Void (3):\n"
            "  S\n"
            "  F#3\n"
            "  F#4\n");
}
