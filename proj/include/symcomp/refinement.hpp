#pragma once

// Abstraction claims and their checkers.  A claim pairs a concrete finite
// module with a purported abstraction of it, plus the input/output relations
// linking the two variable sets; check_abstraction decides exactly whether
// the claim holds.  The theorem harnesses generate randomized claims, compose
// (resp. hide) on both levels, and verify the composed claim still checks.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symcomp/grid.hpp"
#include "symcomp/expr.hpp"
#include "symcomp/module.hpp"

namespace symcomp {

// Both modules must live in the same Context.  The variable sets need not be
// disjoint: an identity claim uses the same module on both sides with
// relations == true, and control modules at two levels share their control
// inputs outright.
struct AbstractionClaim {
  const FiniteModule* concrete = nullptr;
  const FiniteModule* abstracted = nullptr;
  Predicate q_in;   // relates concrete inputs to abstract inputs
  Predicate q_out;  // relates concrete outputs to abstract outputs
};

struct CheckReport {
  enum class Condition { None, Nonblocking, Overapprox };

  bool pass = false;
  Condition violated = Condition::None;
  // One (variable name, value) entry per variable of the violated condition,
  // in declaration order.  Empty when pass or when the check was sampled.
  std::vector<std::pair<std::string, std::uint64_t>> counterexample;
  std::string note;    // informational only; never implies failure
  std::string method;  // "exact", or a description of the sampling scheme
};

// Exact check of both abstraction conditions:
//   (nonblocking)    Q_in && NB(abstract)  implies  NB(concrete)
//   (overapprox)     Q_in && NB(abstract) && concrete && Q_out  implies  abstract
// Throws StrictnessError if Q_in (or Q_out) leaves some concrete input
// (output) assignment without any abstract partner, ValidationError on null
// modules and ContextMismatch/SupportError on malformed claims.
CheckReport check_abstraction(const AbstractionClaim& claim);

// Feedback-refinement reading for control modules: the two levels must share
// their control variables verbatim (identity quantization on inputs), the
// state relation covers the state inputs and the same relation, transported
// to the primed copies, covers the outputs.  Throws TypeMismatch when the
// control lists differ.
CheckReport check_frr(const ControlModule& concrete, const ControlModule& abstracted,
                      Predicate q_state, Predicate q_primed);

// Dense finitization of a scalar map f over in_grid's domain: samples
// lo, lo+step, ..., hi become the labels of a fresh sample-index variable,
// the distinct defined outputs become the labels of a fresh value variable,
// and the module maps index -> value (blocking where f is undefined).  q_in
// relates sample indices to abs_in via in_grid; q_out relates output values
// to abs_out via out_grid, with an empty row for values that escape the
// grid.  Variable names are prefix + "_s" / "_v".
struct Finitized {
  FiniteModule module;
  Predicate q_in;
  Predicate q_out;
  Variable sample_var;
  Variable value_var;
  std::vector<double> samples;       // label i of sample_var is samples[i]
  std::vector<double> values;        // label i of value_var is values[i]
};

Finitized finitize_scalar(Context& ctx, const std::string& prefix,
                          const std::function<std::optional<double>(double)>& f,
                          const Quantizer& in_grid, Variable abs_in,
                          const Quantizer& out_grid, Variable abs_out,
                          double step);

// Point-wise falsifier for a continuous system against its abstraction.
// next_state[i] gives the i-th next-state coordinate as an expression over
// state_names and control_names; state_grids quantize both x and x', and
// control_grids are the identity grids of the (finite) control inputs.  The
// state space is swept at the given step per dimension crossed with every
// control label.  Finds genuine violations only; a pass is evidence, not
// proof.
struct SampledSystem {
  const ControlModule* abstracted = nullptr;
  std::vector<ExprPtr> next_state;
  std::vector<std::string> state_names;
  std::vector<std::string> control_names;
  std::vector<Quantizer> state_grids;
  std::vector<Quantizer> control_grids;
  double step = 0.1;
};

CheckReport falsify_frr(const SampledSystem& sys);

// Randomized end-to-end trials.  Each trial draws random finite modules and
// strict random quantization relations, abstracts exhaustively, checks the
// per-module claims, composes (theorem 2) or hides an output (theorem 3) on
// both levels, and checks the resulting claim.
struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  bool pass = false;
  std::string note;
};

struct HarnessStats {
  int trials = 0;
  int passes = 0;
  int failures = 0;
  std::vector<TrialRecord> failed;  // first few failures, for diagnostics
};

using TrialCallback = std::function<void(const TrialRecord&)>;

HarnessStats theorem2_harness(int trials, std::uint64_t seed = 1,
                              const TrialCallback& per_trial = {});
HarnessStats theorem3_harness(int trials, std::uint64_t seed = 2,
                              const TrialCallback& per_trial = {});

// Single trials, exposed for the negative-control tests.  With sabotage set,
// theorem2_trial deletes one concrete row of the second module and then
// enlarges the abstract nonblocking set at a related abstract input -- the
// level-2 claim must then fail its nonblocking condition.
struct Theorem2Trial {
  bool level1_pass = false;
  bool level2_pass = false;
  bool composed_pass = false;
  std::string note;
};

Theorem2Trial theorem2_trial(std::uint64_t seed, bool sabotage = false);

struct Theorem3Trial {
  bool base_pass = false;
  bool hidden_pass = false;
};

Theorem3Trial theorem3_trial(std::uint64_t seed);

}  // namespace symcomp
