// Python face of the toolkit. Thin on purpose: predicates, quantizers and
// expressions get direct classes, the pipeline is driven through spec
// documents and returns its report as a JSON string (the package __init__
// parses it). Counts that can exceed 64 bits cross over as Python ints.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symcomp/io.hpp"
#include "symcomp/system_spec.hpp"

namespace py = pybind11;
using namespace symcomp;

namespace {

py::int_ big_int(unsigned __int128 v) {
  return py::reinterpret_steal<py::int_>(
      PyLong_FromString(dec_string(v).c_str(), nullptr, 10));
}

// shared_ptr<const Expr> does not fit pybind11's holder model, so expression
// handles ride in a one-field wrapper
struct PyExpr {
  ExprPtr e;
};

py::dict summary_dict(const ArtifactSummary& s) {
  py::dict d;
  d["name"] = s.name;
  d["transitions"] = big_int(s.transitions);
  d["inputs_total"] = big_int(s.inputs_total);
  d["nonblocking"] = big_int(s.nonblocking);
  d["nodes"] = s.nodes;
  d["blocking_fraction"] = s.blocking_fraction();
  return d;
}

py::dict harness_dict(const HarnessStats& st) {
  py::dict d;
  d["trials"] = st.trials;
  d["passes"] = st.passes;
  d["failures"] = st.failures;
  py::list failed;
  for (const TrialRecord& t : st.failed) {
    py::dict row;
    row["trial"] = t.index;
    row["seed"] = t.seed;
    row["note"] = t.note;
    failed.append(row);
  }
  d["failed"] = failed;
  return d;
}

std::string run_spec(const SystemSpec& spec, const std::string& out_dir, bool abstract_only,
                     bool check, double check_step, const std::string& synthesize,
                     const std::vector<std::tuple<std::string, double, double>>& sets,
                     std::optional<double> budget) {
  PipelineFlags flags;
  flags.out_dir = out_dir;
  flags.abstract_only = abstract_only;
  flags.check = check;
  flags.check_step = check_step;
  flags.synthesize = synthesize;
  for (const auto& [var, lo, hi] : sets) flags.set.push_back({var, lo, hi});
  flags.budget_seconds = budget;
  PipelineResult run = run_pipeline(spec, flags);
  return run_report_json(run.report).dump();
}

std::string run_flat(const SystemSpec& spec, std::optional<double> budget,
                     const std::string& out_dir) {
  PipelineResult run = run_monolithic(spec, budget, out_dir);
  return run_report_json(run.report).dump();
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "compositional finite abstractions for symbolic controller synthesis";

  // every library error surfaces as ValueError; the budget gets its own type
  // so callers can catch a partial traversal without string matching
  static py::exception<TimeBudgetExceeded> budget_exc(m, "BudgetExceeded");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const TimeBudgetExceeded& e) {
      py::set_error(budget_exc, e.what());
    } catch (const Error& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  py::class_<PyExpr>(m, "Expr")
      .def("__str__", [](const PyExpr& x) { return to_string(x.e); })
      .def("__repr__", [](const PyExpr& x) { return "Expr(" + to_string(x.e) + ")"; })
      .def("inputs", [](const PyExpr& x) { return expr_inputs(x.e); })
      .def("__eq__", [](const PyExpr& a, const PyExpr& b) { return expr_equal(a.e, b.e); });
  m.def("parse_expr", [](const std::string& s) { return PyExpr{parse_expr(s)}; },
        "parse an expression from the grammar in docs/expr-grammar.ebnf");

  py::class_<Quantizer>(m, "Quantizer")
      .def_static("uniform",
                  [](double lower, double upper, double eta, double anchor,
                     std::uint32_t cells) {
                    return Quantizer::uniform({lower, upper}, eta, anchor, cells);
                  },
                  py::arg("lower"), py::arg("upper"), py::arg("eta"), py::arg("anchor"),
                  py::arg("cells"))
      .def_static("identity", &Quantizer::identity, py::arg("labels"))
      .def("quantize", &Quantizer::quantize, py::arg("point"))
      .def("concretize",
           [](const Quantizer& q, std::uint32_t cell) {
             Interval iv = q.concretize(cell);
             return std::make_pair(iv.lo, iv.hi);
           },
           py::arg("cell"))
      .def("center", &Quantizer::center, py::arg("cell"))
      .def("check_strict", &Quantizer::check_strict)
      .def("is_identity", &Quantizer::is_identity)
      .def("cell_count", &Quantizer::cell_count)
      .def("eta", &Quantizer::eta)
      .def("anchor", &Quantizer::anchor)
      .def("labels", &Quantizer::labels);

  py::class_<Variable>(m, "Variable")
      .def_property_readonly("name", &Variable::name)
      .def_property_readonly("domain_size", &Variable::domain_size)
      .def("__repr__", [](const Variable& v) {
        return "Variable(" + v.name() + ":" + std::to_string(v.domain_size()) + ")";
      })
      .def("__eq__", [](const Variable& a, const Variable& b) { return a == b; });

  py::class_<Predicate>(m, "Predicate")
      .def("__eq__", [](const Predicate& a, const Predicate& b) { return a == b; });

  auto keep = py::keep_alive<0, 1>(); // handles pin their context
  py::class_<Context>(m, "Context")
      .def(py::init<>())
      .def("declare", &Context::declare, py::arg("name"), py::arg("domain_size"), keep)
      .def("declare_interleaved", &Context::declare_interleaved, py::arg("group"), keep)
      .def("var", &Context::var, py::arg("name"), keep)
      .def("atoms", &Context::atoms, keep)
      .def("tru", &Context::tru, keep)
      .def("fls", &Context::fls, keep)
      .def("value_eq", &Context::value_eq, py::arg("var"), py::arg("value"), keep)
      .def("range", &Context::range, py::arg("var"), py::arg("lo"), py::arg("hi"), keep)
      .def("conj", &Context::conj, keep)
      .def("disj", &Context::disj, keep)
      .def("neg", &Context::neg, keep)
      .def("implies", &Context::implies, keep)
      .def("exists", &Context::exists, py::arg("vars"), py::arg("p"), keep)
      .def("forall", &Context::forall, py::arg("vars"), py::arg("p"), keep)
      .def("equivalent", &Context::equivalent)
      .def("is_tautology", &Context::is_tautology)
      .def("is_unsat", &Context::is_unsat)
      .def("count_sat",
           [](Context& ctx, Predicate p, const std::vector<Variable>& vars) {
             return big_int(ctx.count_sat_wide(p, vars));
           },
           py::arg("p"), py::arg("vars"))
      .def("rows",
           [](Context& ctx, Predicate p, const std::vector<Variable>& vars) {
             std::vector<std::vector<std::uint64_t>> out;
             ctx.enumerate_sat(p, vars,
                               [&](const std::vector<std::uint64_t>& row) { out.push_back(row); });
             return out;
           },
           py::arg("p"), py::arg("vars"),
           "all satisfying assignments, declaration order, one list per row")
      .def("pick_sat", &Context::pick_sat, py::arg("p"), py::arg("vars"))
      .def("eval", &Context::eval, py::arg("p"), py::arg("vars"), py::arg("values"))
      .def("node_count", &Context::node_count)
      .def("predicate_size", &Context::predicate_size, py::arg("p"));

  py::class_<SystemSpec>(m, "SystemSpec")
      .def_readonly("name", &SystemSpec::name)
      .def_readonly("warnings", &SystemSpec::warnings)
      .def("__repr__", [](const SystemSpec& s) {
        return "SystemSpec(" + s.name + ", " + std::to_string(s.modules.size()) + " modules)";
      });
  m.def("load_spec", &load_spec, py::arg("path"));
  m.def("make_bench_spec", &make_bench_spec, py::arg("n"));
  m.def("spec_to_json", [](const SystemSpec& s) { return spec_json(s).dump(1); });

  m.def("run_spec_json", &run_spec, py::arg("spec"), py::arg("out_dir") = "",
        py::arg("abstract_only") = false, py::arg("check") = false,
        py::arg("check_step") = 0.0, py::arg("synthesize") = "",
        py::arg("sets") = std::vector<std::tuple<std::string, double, double>>{},
        py::arg("budget") = std::nullopt,
        "abstract, compose and optionally check/synthesize; returns the run "
        "report as a JSON string");
  m.def("run_monolithic_json", &run_flat, py::arg("spec"), py::arg("budget") = std::nullopt,
        py::arg("out_dir") = "",
        "abstract the flat product in one traversal; returns the report JSON");

  m.def("summarize_module", [](const std::string& path) { return summary_dict(summarize_module(path)); },
        py::arg("path"));

  m.def("theorem2_harness",
        [](int trials, std::uint64_t seed) { return harness_dict(theorem2_harness(trials, seed)); },
        py::arg("trials"), py::arg("seed") = 1);
  m.def("theorem3_harness",
        [](int trials, std::uint64_t seed) { return harness_dict(theorem3_harness(trials, seed)); },
        py::arg("trials"), py::arg("seed") = 2);
}
