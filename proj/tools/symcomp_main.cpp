// Command-line front end: spec files in, artifacts and reports out.
//
// Exit codes: 0 success, 2 invalid input (spec, arguments, artifacts),
// 3 time budget exceeded, 4 a check or harness found a violation.
// SYMCOMP_DD_MEM_MB caps the decision-diagram working memory.

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symcomp/io.hpp"
#include "symcomp/system_spec.hpp"

using namespace symcomp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;
constexpr int kExitCheckFailed = 4;

// "x1:8..24,x2:0.5..31.5" -> interval constraints on state variables
std::vector<SetInterval> parse_set(const std::string& text) {
  std::vector<SetInterval> out;
  std::size_t at = 0;
  while (at < text.size()) {
    std::size_t comma = text.find(',', at);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(at, comma - at);
    at = comma + 1;
    if (item.empty()) continue;
    std::size_t colon = item.find(':');
    std::size_t dots = item.find("..");
    if (colon == std::string::npos || dots == std::string::npos || dots < colon)
      throw ValidationError("bad set entry '" + item + "', want name:lo..hi");
    SetInterval iv;
    iv.var = item.substr(0, colon);
    try {
      std::size_t used = 0;
      std::string lo = item.substr(colon + 1, dots - colon - 1);
      std::string hi = item.substr(dots + 2);
      iv.lo = std::stod(lo, &used);
      if (used != lo.size()) throw std::invalid_argument(lo);
      iv.hi = std::stod(hi, &used);
      if (used != hi.size()) throw std::invalid_argument(hi);
    } catch (const std::exception&) {
      throw ValidationError("bad bounds in set entry '" + item + "'");
    }
    out.push_back(std::move(iv));
  }
  return out;
}

ProgressFn progress_printer(bool enabled) {
  if (!enabled) return {};
  return [](const Progress& p) {
    std::cerr << "cells " << p.cells_done << "/" << p.cells_total << "  blocking "
              << p.blocking << "  with-transitions " << p.with_transitions << "  dd-nodes "
              << p.dd_nodes << "\n";
  };
}

void print_warnings(const RunReport& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

void print_module_row(const ModuleReport& m) {
  std::cout << "  " << m.name << ": transitions " << dec_string(m.transitions) << " ("
            << sci_string(m.transitions) << "), nodes " << m.nodes << ", blocking inputs "
            << dec_string(m.blocking_inputs);
  if (m.cells) std::cout << ", cells " << m.cells;
  std::printf(", %.2fs\n", m.seconds);
}

void print_report(const RunReport& r, bool with_composed) {
  std::cout << r.spec_name << "\n";
  for (const auto& m : r.modules) print_module_row(m);
  if (with_composed) {
    std::cout << "composed\n";
    print_module_row(r.composed);
  }
  std::cout << "cells traversed: " << r.cells_compositional << "\n";
  std::cout << "stages:";
  for (const auto& s : r.stages) std::printf("  %s %.2fs", s.stage.c_str(), s.seconds);
  std::cout << "\n";
  if (r.frr)
    std::cout << "falsification: " << (r.frr->pass ? "pass" : "FAIL") << " ("
              << r.frr->method << ")\n";
  if (!r.artifacts_dir.empty()) std::cout << "artifacts: " << r.artifacts_dir << "\n";
}

// When asked to, print the composed relation as the plain text dump; only
// sensible for small systems, which is exactly when it is useful.
void maybe_dump(const PipelineResult& run, bool dump) {
  if (!dump || !run.system) return;
  const ControlModule& cm = *run.system;
  std::vector<Variable> vars = cm.states;
  vars.insert(vars.end(), cm.controls.begin(), cm.controls.end());
  vars.insert(vars.end(), cm.primed.begin(), cm.primed.end());
  std::cout << dump_predicate(cm.transitions(), vars);
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const TimeBudgetExceeded& e) {
    std::cerr << "time budget exceeded: " << e.what() << " (cells finished: " << e.cells_done
              << ")\n";
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"compositional finite abstractions for symbolic controller synthesis"};
  app.require_subcommand(1);

  std::string spec_file, out_dir, objective, set_text, artifact;
  double budget = 0, step = 0;
  int bench_n = 0, theorem = 2, trials = 1000;
  std::uint64_t seed = 0;
  bool monolithic = false, dump = false, progress = false, with_check = false;

  auto* cmd_abstract = app.add_subcommand("abstract", "abstract each module of a spec");
  cmd_abstract->add_option("file", spec_file, "system spec (JSON)")->required();
  cmd_abstract->add_option("--out", out_dir, "artifact directory")->required();
  cmd_abstract->add_option("--budget", budget, "abstraction budget in seconds");
  cmd_abstract->add_flag("--progress", progress, "log traversal progress to stderr");

  auto* cmd_compose = app.add_subcommand("compose", "abstract, compose and hide latents");
  cmd_compose->add_option("file", spec_file, "system spec (JSON)")->required();
  cmd_compose->add_option("--out", out_dir, "artifact directory");
  cmd_compose->add_option("--budget", budget, "abstraction budget in seconds");
  cmd_compose->add_flag("--dump", dump, "print the composed relation as a text dump");
  cmd_compose->add_flag("--progress", progress, "log traversal progress to stderr");

  auto* cmd_check = app.add_subcommand("check", "falsify the abstraction against the dynamics");
  cmd_check->add_option("file", spec_file, "system spec (JSON)")->required();
  cmd_check->add_option("--step", step, "sweep step (default: min eta / 10)");
  cmd_check->add_option("--out", out_dir, "artifact directory");

  auto* cmd_synth = app.add_subcommand("synthesize", "solve a safety or reach game");
  cmd_synth->add_option("file", spec_file, "system spec (JSON)")->required();
  cmd_synth->add_option("--spec", objective, "objective: safety or reach")
      ->required()
      ->check(CLI::IsMember({"safety", "reach"}));
  cmd_synth->add_option("--set", set_text, "state set, e.g. x1:8..24,x2:8..24");
  cmd_synth->add_option("--out", out_dir, "artifact directory (controller.json)");
  cmd_synth->add_option("--budget", budget, "abstraction budget in seconds");

  auto* cmd_bench = app.add_subcommand("bench", "run the N-system saturator benchmark");
  cmd_bench->add_option("--n", bench_n, "number of subsystems")->required();
  cmd_bench->add_option("--out", out_dir, "artifact directory")->required();
  cmd_bench->add_flag("--monolithic", monolithic, "abstract the flat product instead");
  cmd_bench->add_option("--budget", budget, "abstraction budget in seconds");
  cmd_bench->add_flag("--check", with_check, "also falsify at eta/10 (small N only)");
  cmd_bench->add_flag("--progress", progress, "log traversal progress to stderr");

  auto* cmd_stats = app.add_subcommand("stats", "summarize a module artifact");
  cmd_stats->add_option("artifact", artifact, "module artifact (JSON)")->required();

  auto* cmd_harness = app.add_subcommand("harness", "randomized composition trials, JSONL out");
  cmd_harness->add_option("--theorem", theorem, "2 (compose) or 3 (hide)")
      ->check(CLI::IsMember({2, 3}));
  cmd_harness->add_option("--trials", trials, "number of trials");
  cmd_harness->add_option("--seed", seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  std::optional<double> budget_opt;
  if (budget > 0) budget_opt = budget;

  if (app.got_subcommand(cmd_abstract)) {
    return run_guarded([&] {
      SystemSpec spec = load_spec(spec_file);
      PipelineFlags flags;
      flags.out_dir = out_dir;
      flags.abstract_only = true;
      flags.budget_seconds = budget_opt;
      flags.progress = progress_printer(progress);
      PipelineResult run = run_pipeline(spec, flags);
      print_warnings(run.report);
      print_report(run.report, false);
      return kExitOk;
    });
  }

  if (app.got_subcommand(cmd_compose)) {
    return run_guarded([&] {
      SystemSpec spec = load_spec(spec_file);
      PipelineFlags flags;
      flags.out_dir = out_dir;
      flags.budget_seconds = budget_opt;
      flags.progress = progress_printer(progress);
      PipelineResult run = run_pipeline(spec, flags);
      print_warnings(run.report);
      print_report(run.report, true);
      maybe_dump(run, dump);
      return kExitOk;
    });
  }

  if (app.got_subcommand(cmd_check)) {
    return run_guarded([&] {
      SystemSpec spec = load_spec(spec_file);
      PipelineFlags flags;
      flags.out_dir = out_dir;
      flags.check = true;
      flags.check_step = step;
      PipelineResult run = run_pipeline(spec, flags);
      print_warnings(run.report);
      std::cout << check_report_json(*run.report.frr).dump(1) << "\n";
      return run.report.frr->pass ? kExitOk : kExitCheckFailed;
    });
  }

  if (app.got_subcommand(cmd_synth)) {
    return run_guarded([&] {
      SystemSpec spec = load_spec(spec_file);
      PipelineFlags flags;
      flags.out_dir = out_dir;
      flags.synthesize = objective;
      flags.set = parse_set(set_text);
      flags.budget_seconds = budget_opt;
      PipelineResult run = run_pipeline(spec, flags);
      print_warnings(run.report);
      Context& ctx = *run.ctx;
      const Controller& c = *run.controller;
      std::uint64_t dom = ctx.count_sat(c.domain(), c.states);
      std::uint64_t total = 1;
      for (auto v : c.states) total *= ctx.var_domain(v);
      std::cout << objective << " domain: " << dom << " of " << total << " states, "
                << c.waves.size() << " iterations\n";
      if (!run.report.artifacts_dir.empty())
        std::cout << "artifacts: " << run.report.artifacts_dir << "\n";
      return kExitOk;
    });
  }

  if (app.got_subcommand(cmd_bench)) {
    return run_guarded([&] {
      SystemSpec spec = make_bench_spec(bench_n);
      PipelineResult run = [&] {
        if (monolithic)
          return run_monolithic(spec, budget_opt, out_dir, progress_printer(progress));
        PipelineFlags flags;
        flags.out_dir = out_dir;
        flags.check = with_check;
        flags.budget_seconds = budget_opt;
        flags.progress = progress_printer(progress);
        return run_pipeline(spec, flags);
      }();
      print_warnings(run.report);
      print_report(run.report, !monolithic);
      if (run.report.frr && !run.report.frr->pass) return kExitCheckFailed;
      return kExitOk;
    });
  }

  if (app.got_subcommand(cmd_stats)) {
    return run_guarded([&] {
      ArtifactSummary s = summarize_module(artifact);
      std::cout << s.name << "\n"
                << "  transitions: " << dec_string(s.transitions) << " ("
                << sci_string(s.transitions) << ")\n"
                << "  nodes: " << s.nodes << "\n"
                << "  inputs: " << dec_string(s.nonblocking) << " nonblocking of "
                << dec_string(s.inputs_total) << " (blocking fraction ";
      std::printf("%.3f)\n", s.blocking_fraction());
      return kExitOk;
    });
  }

  if (app.got_subcommand(cmd_harness)) {
    return run_guarded([&] {
      if (seed == 0) seed = theorem == 2 ? 1 : 2;
      auto emit = [](const TrialRecord& t) { std::cout << trial_json(t).dump() << "\n"; };
      HarnessStats st = theorem == 2 ? theorem2_harness(trials, seed, emit)
                                     : theorem3_harness(trials, seed, emit);
      std::cerr << harness_json(st).dump() << "\n";
      return st.failures == 0 ? kExitOk : kExitCheckFailed;
    });
  }

  return kExitInvalid;
}
