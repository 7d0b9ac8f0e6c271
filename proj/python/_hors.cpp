#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "hors/bar.hpp"
#include "hors/engine.hpp"
#include "hors/error.hpp"
#include "hors/intersection.hpp"
#include "hors/labelling.hpp"
#include "hors/parser.hpp"

namespace py = pybind11;
using namespace hors;

namespace {

Policy policy_of(const std::string& name) {
  auto p = parse_policy(name);
  if (!p) throw py::value_error("unknown policy '" + name + "' (expected oi, io or any)");
  return *p;
}

EvalBudget make_budget(std::size_t steps, std::size_t max_term, std::size_t depth) {
  EvalBudget b;
  b.max_steps = steps;
  b.max_term_size = max_term;
  b.depth = depth;
  return b;
}

Term start_term(const Scheme& g, const std::optional<std::string>& term) {
  return term ? parse_term(*term, g) : Term(g.start());
}

Scheme load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw py::value_error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scheme(text.str());
}

std::vector<std::string> atom_names(const ConjunctiveMapping& c) {
  std::vector<std::string> out;
  for (const auto& a : c.atoms()) out.push_back(a.to_string());
  return out;
}

}  // namespace

PYBIND11_MODULE(_hors, m) {
  m.doc() = "Higher-order recursion schemes: evaluation, IO/OI transformations and analysis.";

  auto base = py::register_exception<Error>(m, "HorsError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<SchemeError>(m, "SchemeError", base.ptr());
  py::register_exception<ComplexityLimit>(m, "ComplexityLimit", base.ptr());

  py::class_<Scheme>(m, "Scheme")
      .def_property_readonly("start", &Scheme::start_name)
      .def_property_readonly("order", [](const Scheme& g) { return scheme_order(g); })
      .def_property_readonly("nonterminals",
                             [](const Scheme& g) {
                               std::vector<std::string> out;
                               for (const auto& f : g.nonterminals()) out.push_back(f.name());
                               return out;
                             })
      .def_property_readonly("rule_count", [](const Scheme& g) { return g.rules().size(); })
      .def("validate",
           [](const Scheme& g) {
             std::vector<std::string> out;
             for (const auto& d : validate(g)) out.push_back(d.to_string());
             return out;
           })
      .def("render", [](const Scheme& g) { return render(g); })
      .def("__str__", [](const Scheme& g) { return render(g); })
      .def("__eq__", [](const Scheme& a, const Scheme& b) { return a == b; });

  m.def("parse_scheme", [](const std::string& text) { return parse_scheme(text); }, py::arg("text"));
  m.def("load_scheme", &load, py::arg("path"));

  m.def(
      "value_tree",
      [](const Scheme& g, const std::string& policy, std::size_t depth, std::size_t steps,
         std::size_t max_term, std::optional<std::string> term) {
        require_valid(g);
        auto ev = evaluate(g, start_term(g, term), policy_of(policy),
                           make_budget(steps, max_term, depth));
        py::dict d;
        d["tree"] = ev.tree.to_string();
        d["steps"] = ev.steps;
        d["exhausted_budget"] = ev.exhausted_budget;
        return d;
      },
      py::arg("scheme"), py::arg("policy") = "oi", py::arg("depth") = 5,
      py::arg("steps") = 10000, py::arg("max_term") = 100000, py::arg("term") = py::none());

  m.def(
      "derive",
      [](const Scheme& g, const std::string& policy, std::size_t steps, std::size_t max_term,
         std::optional<std::string> term) {
        require_valid(g);
        auto tr = derive(g, start_term(g, term), policy_of(policy),
                         make_budget(steps, max_term, 1));
        py::list trace;
        for (const auto& s : tr.steps) {
          py::dict d;
          d["position"] = s.redex.position.to_string();
          d["nonterminal"] = s.redex.nonterminal.name();
          d["oi"] = s.redex.is_oi;
          d["io"] = s.redex.is_io;
          d["term"] = s.after.to_string();
          trace.append(d);
        }
        py::dict d;
        d["trace"] = trace;
        d["final"] = tr.final_term().to_string();
        d["exhausted_budget"] = tr.exhausted_budget;
        return d;
      },
      py::arg("scheme"), py::arg("policy") = "oi", py::arg("steps") = 1000,
      py::arg("max_term") = 100000, py::arg("term") = py::none());

  m.def("bar_scheme", [](const Scheme& g) { return bar_scheme(g); }, py::arg("scheme"),
        "Scheme whose IO value tree is the value tree of the input.");
  m.def("io_to_oi", &io_to_oi, py::arg("scheme"), py::arg("prune") = false,
        "Scheme whose value tree under any strategy is the IO value tree of the input.");

  m.def(
      "analyze",
      [](const Scheme& g) {
        require_valid(g);
        Fixpoint fp = theta_star(g);
        py::dict env;
        for (const auto& f : g.nonterminals())
          if (const auto* s = fp.theta.find(f.name())) env[py::str(f.name())] = atom_names(*s);
        return py::make_tuple(env, fp.iterations);
      },
      py::arg("scheme"), "Greatest-fixpoint environment and the iteration count.");

  m.def(
      "semantics",
      [](const Scheme& g, const std::string& term) {
        require_valid(g);
        SemanticsTable table(g);
        return atom_names(table.semantics(parse_term(term, g)));
      },
      py::arg("scheme"), py::arg("term"));
}
