#include "hors/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "hors/bar.hpp"
#include "hors/engine.hpp"
#include "hors/error.hpp"
#include "hors/intersection.hpp"
#include "hors/labelling.hpp"
#include "hors/parser.hpp"

namespace hors::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string input;
  std::string output;
  std::string format = "text";
  std::string policy = "oi";
  std::size_t depth = 5;
  std::size_t steps = 10000;
  std::size_t max_term = 100000;
  std::string to;
  std::string term;
  std::string report;
  bool trace = false;
  bool prune = false;
};

/// Thrown for problems with the invocation itself (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scheme load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scheme(text.str());
  } catch (const ParseError& e) {
    throw Error(path + ":" + e.what());
  }
}

EvalBudget budget_of(const Options& o) {
  if (o.depth == 0 || o.steps == 0 || o.max_term == 0)
    throw UsageError("--depth, --steps and --max-term must be positive");
  return EvalBudget{o.steps, o.max_term, o.depth};
}

Policy policy_of(const Options& o) {
  auto p = parse_policy(o.policy);
  if (!p) throw UsageError("unknown policy '" + o.policy + "'");
  return *p;
}

bool structured(const Options& o) { return o.format == "structured"; }

/// Start term for derive and valuetree: --term if given, else the start symbol.
Term start_term(const Scheme& g, const Options& o) {
  if (o.term.empty()) return Term(g.start());
  return parse_term(o.term, g);
}

ordered_json tree_json(const PartialTree& t) {
  ordered_json j;
  if (t.is_bottom()) {
    j["label"] = nullptr;
    j["children"] = ordered_json::array();
    return j;
  }
  j["label"] = t.label().name();
  j["children"] = ordered_json::array();
  for (const auto& c : t.children()) j["children"].push_back(tree_json(c));
  return j;
}

ordered_json header(const std::string& command) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["command"] = command;
  return j;
}

void budget_warning(std::ostream& err, std::size_t steps) {
  err << "warning: evaluation budget exhausted after " << steps
      << " steps; the result is a lower approximation\n";
}

std::string cmd_check(const Options& o, std::ostream& err, int& status) {
  Scheme g = load(o.input);
  auto diags = validate(g);
  if (structured(o)) {
    auto j = header("check");
    j["ok"] = diags.empty();
    if (diags.empty()) {
      j["order"] = scheme_order(g);
      j["nonterminals"] = g.nonterminals().size();
    }
    j["diagnostics"] = ordered_json::array();
    for (const auto& d : diags) j["diagnostics"].push_back({{"location", d.location}, {"message", d.message}});
    status = diags.empty() ? 0 : 1;
    return j.dump(2) + "\n";
  }
  if (!diags.empty()) {
    for (const auto& d : diags) err << "error: " << d.to_string() << '\n';
    status = 1;
    return {};
  }
  return "ok: order " + std::to_string(scheme_order(g)) + ", " +
         std::to_string(g.nonterminals().size()) + " nonterminals\n";
}

std::string cmd_derive(const Options& o, std::ostream& err) {
  Scheme g = load(o.input);
  require_valid(g);
  auto budget = budget_of(o);
  auto log = derive_log(g, start_term(g, o), policy_of(o), budget);
  if (log.exhausted_budget) budget_warning(err, log.redexes.size());
  if (structured(o)) {
    auto j = header("derive");
    j["policy"] = to_string(policy_of(o));
    j["steps"] = log.redexes.size();
    j["exhausted_budget"] = log.exhausted_budget;
    if (o.trace) {
      j["trace"] = ordered_json::array();
      for (std::size_t i = 0; i < log.redexes.size(); ++i) {
        const auto& r = log.redexes[i];
        j["trace"].push_back({{"index", i + 1},
                              {"position", r.position.to_string()},
                              {"nonterminal", r.nonterminal.name()},
                              {"oi", r.is_oi},
                              {"io", r.is_io}});
      }
    }
    j["final"] = log.final_term.to_string();
    return j.dump(2) + "\n";
  }
  std::string out;
  if (o.trace) out += format_trace(log.redexes);
  out += "steps: " + std::to_string(log.redexes.size()) + "\n";
  out += "final: " + log.final_term.to_string() + "\n";
  return out;
}

std::string cmd_valuetree(const Options& o, std::ostream& err) {
  Scheme g = load(o.input);
  require_valid(g);
  auto budget = budget_of(o);
  auto ev = evaluate(g, start_term(g, o), policy_of(o), budget);
  if (ev.exhausted_budget) budget_warning(err, ev.steps);
  if (structured(o)) {
    auto j = header("valuetree");
    j["policy"] = to_string(policy_of(o));
    j["depth"] = budget.depth;
    j["steps"] = ev.steps;
    j["exhausted_budget"] = ev.exhausted_budget;
    j["tree"] = tree_json(ev.tree);
    return j.dump(2) + "\n";
  }
  return ev.tree.to_indented();
}

std::string cmd_analyze(const Options& o) {
  Scheme g = load(o.input);
  auto fp = theta_star(g);
  std::optional<Term> t;
  std::optional<ConjunctiveMapping> sem;
  if (!o.term.empty()) {
    t = parse_term(o.term, g);
    SemanticsTable table(g, fp.theta);
    sem = table.semantics(*t);
  }
  if (structured(o)) {
    auto j = header("analyze");
    j["iterations"] = fp.iterations;
    j["environment"] = ordered_json::array();
    for (const auto& f : g.nonterminals()) {
      ordered_json e;
      e["nonterminal"] = f.name();
      e["type"] = f.type().to_string();
      e["atoms"] = ordered_json::array();
      if (const auto* c = fp.theta.find(f.name()))
        for (const auto& a : c->atoms()) e["atoms"].push_back(a.to_string());
      j["environment"].push_back(std::move(e));
    }
    if (t) {
      j["term"] = t->to_string();
      j["semantics"] = ordered_json::array();
      for (const auto& a : sem->atoms()) j["semantics"].push_back(a.to_string());
    }
    return j.dump(2) + "\n";
  }
  std::string out = format_environment(g, fp.theta);
  if (t) out += "[" + t->to_string() + "] :: " + sem->to_string() + "\n";
  return out;
}

std::string cmd_transform(const Options& o, std::ostream& err) {
  Scheme g = load(o.input);
  if (o.to == "io") {
    if (o.prune) throw UsageError("--prune only applies to --to oi");
    Scheme out = bar_scheme(g);
    if (structured(o)) {
      auto j = header("transform");
      j["to"] = "io";
      j["scheme"] = render(out);
      return j.dump(2) + "\n";
    }
    return render(out);
  }
  auto lg = label_scheme(g);
  auto sc = self_correct(lg);
  Scheme out = o.prune ? prune_unreachable(sc.scheme) : sc.scheme;
  auto report = make_report(g, lg, sc, out);
  if (structured(o)) {
    auto j = header("transform");
    j["to"] = "oi";
    j["scheme"] = render(out);
    ordered_json r;
    r["rules"] = {{"source", report.source_rules},
                  {"labelled", report.labelled_rules},
                  {"output", report.output_rules}};
    r["nbvar"] = ordered_json::array();
    for (const auto& [t, n] : report.nbvar_table) r["nbvar"].push_back({{"type", t.to_string()}, {"nbvar", n}});
    r["voided"] = report.voided;
    r["unreachable"] = report.unreachable;
    j["report"] = std::move(r);
    return j.dump(2) + "\n";
  }
  std::string text = format_report(report);
  std::string report_path = o.report;
  if (report_path.empty() && !o.output.empty()) report_path = o.output + ".report";
  if (report_path.empty()) {
    err << text;
  } else {
    std::ofstream f(report_path, std::ios::binary);
    if (!f) throw Error("cannot write '" + report_path + "'");
    f << text;
  }
  return render(out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher-order recursion schemes: evaluation, analysis and transformations", "hors"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Scheme file")->required();
    sub->add_option("-o,--out", o.output, "Write the result to this file");
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "structured"}));
  };
  auto budget = [&](CLI::App* sub) {
    sub->add_option("--policy", o.policy, "Derivation policy")
        ->check(CLI::IsMember({"oi", "io", "any"}));
    sub->add_option("--steps", o.steps, "Rewrite step budget");
    sub->add_option("--max-term", o.max_term, "Term size budget");
    sub->add_option("--term", o.term, "Start from this term instead of the start symbol");
  };

  auto* check = app.add_subcommand("check", "Parse and validate a scheme");
  common(check);
  auto* derive = app.add_subcommand("derive", "Run the fair derivation of a policy");
  common(derive);
  budget(derive);
  derive->add_flag("--trace", o.trace, "Print one line per rewrite step");
  auto* valuetree = app.add_subcommand("valuetree", "Depth-truncated value tree");
  common(valuetree);
  budget(valuetree);
  valuetree->add_option("--depth", o.depth, "Tree levels to compute");
  auto* analyze = app.add_subcommand("analyze", "Greatest-fixpoint typing environment");
  common(analyze);
  analyze->add_option("--term", o.term, "Also print the semantics of this term");
  auto* transform = app.add_subcommand("transform", "Scheme transformations");
  common(transform);
  transform->add_option("--to", o.to, "io: IO value tree equals the source value tree; "
                                      "oi: value tree equals the source IO value tree")
      ->required()
      ->check(CLI::IsMember({"io", "oi"}));
  transform->add_flag("--prune", o.prune, "Drop rules unreachable from the start symbol");
  transform->add_option("--report", o.report, "Where to write the size report (oi only)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  int status = 0;
  std::string result;
  try {
    if (*check) result = cmd_check(o, err, status);
    else if (*derive) result = cmd_derive(o, err);
    else if (*valuetree) result = cmd_valuetree(o, err);
    else if (*analyze) result = cmd_analyze(o);
    else result = cmd_transform(o, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (o.output.empty()) {
    out << result;
  } else {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << o.output << "'\n";
      return 1;
    }
    f << result;
  }
  return status;
}

}  // namespace hors::cli
