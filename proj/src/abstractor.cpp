#include "symcomp/abstractor.hpp"

#include <chrono>

namespace symcomp {

namespace {

// Balanced disjunction accumulator: predicates are merged like a binary
// counter so the diagram work stays logarithmic in the number of terms
// instead of rescanning one ever-growing operand.
class DisjAccumulator {
public:
  explicit DisjAccumulator(Context& ctx) : ctx_(ctx) {}

  void add(Predicate p) {
    for (std::size_t i = 0;; ++i) {
      if (i == slots_.size()) {
        slots_.push_back(p);
        return;
      }
      if (!slots_[i]) {
        slots_[i] = p;
        return;
      }
      p = ctx_.disj(*slots_[i], p);
      slots_[i].reset();
    }
  }

  Predicate result() {
    Predicate acc = ctx_.fls();
    for (const auto& s : slots_)
      if (s)
        acc = ctx_.disj(acc, *s);
    return acc;
  }

private:
  Context& ctx_;
  std::vector<std::optional<Predicate>> slots_;
};

std::string cell_label(const std::vector<std::uint32_t>& cell) {
  std::string s = "(";
  for (std::size_t i = 0; i < cell.size(); ++i)
    s += (i ? "," : "") + std::to_string(cell[i]);
  return s + ")";
}

} // namespace

AbstractionResult abstract_module(const AbstractionJob& job,
                                  const ProgressFn& progress,
                                  std::optional<double> budget_seconds) {
  if (!job.oracle)
    throw ValidationError("job '" + job.name + "': no oracle");
  if (job.inputs.empty() || job.outputs.empty())
    throw ValidationError("job '" + job.name + "': needs inputs and outputs");
  if (job.oracle->input_arity() != job.inputs.size() ||
      job.oracle->output_arity() != job.outputs.size())
    throw ValidationError("job '" + job.name + "': oracle arity " +
                          std::to_string(job.oracle->input_arity()) + "->" +
                          std::to_string(job.oracle->output_arity()) +
                          " does not match the quantizer lists");

  Context* ctx = nullptr;
  auto check_bound = [&](const BoundQuantizer& bq, const char* role) {
    if (!bq.q.check_strict())
      throw StrictnessError("job '" + job.name + "': " + role + " quantizer for '" +
                            bq.var.name() + "' is not strict");
    if (bq.var.domain_size() != bq.q.cell_count())
      throw TypeMismatch("job '" + job.name + "': '" + bq.var.name() + "' has domain " +
                         std::to_string(bq.var.domain_size()) + " but the quantizer has " +
                         std::to_string(bq.q.cell_count()) + " cells");
    if (!ctx)
      ctx = const_cast<Context*>(bq.var.ctx);
    else if (bq.var.ctx != ctx)
      throw ContextMismatch("job '" + job.name + "': quantizer variables span contexts");
  };
  for (const BoundQuantizer& bq : job.inputs)
    check_bound(bq, "input");
  for (const BoundQuantizer& bq : job.outputs)
    check_bound(bq, "output");

  const std::size_t nin = job.inputs.size(), nout = job.outputs.size();
  std::vector<Interval> covered(nout);
  for (std::size_t d = 0; d < nout; ++d)
    covered[d] = job.outputs[d].q.covered();

  AbstractionStats stats;
  stats.cells_total = 1;
  for (const BoundQuantizer& bq : job.inputs)
    stats.cells_total *= bq.q.cell_count();

  const unsigned ulps = job.oracle->widen_ulps();
  DisjAccumulator acc(*ctx);
  std::vector<std::uint32_t> cell(nin, 0);
  Box in_box(nin), out_box;
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  bool done = stats.cells_total == 0;
  while (!done) {
    if (budget_seconds && (stats.cells_done & 0xff) == 0 && elapsed() > *budget_seconds)
      throw TimeBudgetExceeded("job '" + job.name + "' exceeded its time budget after " +
                                   std::to_string(stats.cells_done) + " of " +
                                   std::to_string(stats.cells_total) + " cells",
                               stats.cells_done);

    for (std::size_t d = 0; d < nin; ++d)
      in_box[d] = job.inputs[d].q.concretize(cell[d]);

    bool blocking = false;
    try {
      out_box = job.oracle->evaluate(in_box);
    } catch (const UndefinedOnBox& e) {
      blocking = true;
      ++stats.oracle_failures;
      if (stats.diagnostics.size() < 16)
        stats.diagnostics.push_back("cell " + cell_label(cell) + ": " + e.what());
    }
    // escape check on the raw box: any part outside the covered output
    // region means this input must stay blocking
    for (std::size_t d = 0; d < nout && !blocking; ++d)
      if (out_box[d].lo < covered[d].lo || out_box[d].hi > covered[d].hi)
        blocking = true;

    std::optional<Predicate> outputs_pred;
    if (!blocking) {
      Predicate p = ctx->tru();
      for (std::size_t d = 0; d < nout; ++d) {
        auto cells = job.outputs[d].q.cells_intersecting(widen_interval(out_box[d], ulps));
        if (!cells) { // identity grid with a gap under the whole box
          blocking = true;
          break;
        }
        p = ctx->conj(p, ctx->range(job.outputs[d].var, cells->first, cells->second));
      }
      if (!blocking)
        outputs_pred = p;
    }

    if (blocking) {
      ++stats.blocking_cells;
    } else {
      Predicate in_cube = ctx->tru();
      for (std::size_t d = 0; d < nin; ++d)
        in_cube = ctx->conj(in_cube, ctx->value_eq(job.inputs[d].var, cell[d]));
      acc.add(ctx->conj(in_cube, *outputs_pred));
      ++stats.transition_cells;
    }

    ++stats.cells_done;
    if (progress && (stats.cells_done % 1000 == 0 || stats.cells_done == stats.cells_total))
      progress({stats.cells_done, stats.cells_total, stats.blocking_cells,
                stats.transition_cells, ctx->node_count()});

    // row-major: last dimension fastest
    std::size_t d = nin;
    for (;;) {
      if (d == 0) {
        done = true;
        break;
      }
      --d;
      if (++cell[d] < job.inputs[d].q.cell_count())
        break;
      cell[d] = 0;
    }
  }

  std::vector<Variable> in_vars, out_vars;
  for (const BoundQuantizer& bq : job.inputs)
    in_vars.push_back(bq.var);
  for (const BoundQuantizer& bq : job.outputs)
    out_vars.push_back(bq.var);
  stats.seconds = elapsed();
  return {FiniteModule(job.name, std::move(in_vars), std::move(out_vars), acc.result()),
          std::move(stats)};
}

std::vector<JobOutcome> abstract_many(const std::vector<AbstractionJob>& jobs,
                                      const ProgressFn& progress,
                                      std::optional<double> budget_seconds) {
  std::vector<JobOutcome> out;
  out.reserve(jobs.size());
  for (const AbstractionJob& job : jobs) {
    try {
      out.push_back({abstract_module(job, progress, budget_seconds), ""});
    } catch (const TimeBudgetExceeded&) {
      throw; // a budget covers the batch, not one job
    } catch (const Error& e) {
      out.push_back({std::nullopt, e.what()});
    }
  }
  return out;
}

} // namespace symcomp
