#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symcomp/grid.hpp"
#include "symcomp/module.hpp"
#include "symcomp/oracle.hpp"

namespace symcomp {

/// One grid-abstraction task: a concrete map described by its
/// overapproximation oracle, plus one quantizer per input and output.
/// Quantizer order matches the oracle's input/output order.
struct AbstractionJob {
  std::string name;
  std::vector<BoundQuantizer> inputs;
  std::vector<BoundQuantizer> outputs;
  const BoxOracle* oracle = nullptr; // non-owning
};

struct AbstractionStats {
  std::uint64_t cells_total = 0;
  std::uint64_t cells_done = 0;
  std::uint64_t blocking_cells = 0;   // escapes plus oracle failures
  std::uint64_t transition_cells = 0; // input cells with >= 1 transition
  std::uint64_t oracle_failures = 0;
  double seconds = 0;
  std::vector<std::string> diagnostics; // first few failures, for reports
};

struct AbstractionResult {
  FiniteModule module;
  AbstractionStats stats;
};

struct Progress {
  std::uint64_t cells_done = 0, cells_total = 0;
  std::uint64_t blocking = 0, with_transitions = 0;
  std::size_t dd_nodes = 0;
};
using ProgressFn = std::function<void(const Progress&)>;

/// Builds the abstract module for one job: traverses every abstract input
/// cell in row-major order, asks the oracle for an output box, and either
/// leaves the cell blocking (box escapes the covered output region, or the
/// map is undefined there) or adds transitions to every output cell the
/// ulp-widened box touches.
///
/// progress, when set, fires every 1000 cells and once at the end;
/// budget_seconds, when set, aborts with TimeBudgetExceeded carrying the
/// number of cells finished. Throws StrictnessError for non-strict
/// quantizers and TypeMismatch when a variable's domain does not match its
/// quantizer's cell count.
AbstractionResult abstract_module(const AbstractionJob& job,
                                  const ProgressFn& progress = {},
                                  std::optional<double> budget_seconds = {});

/// Sequentially runs abstract_module per job, capturing each job's error
/// instead of aborting the batch.
struct JobOutcome {
  std::optional<AbstractionResult> result;
  std::string error; // empty on success
};
std::vector<JobOutcome> abstract_many(const std::vector<AbstractionJob>& jobs,
                                      const ProgressFn& progress = {},
                                      std::optional<double> budget_seconds = {});

} // namespace symcomp
