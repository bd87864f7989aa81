#pragma once

// Fixed-point controller synthesis on finite control modules, and refinement
// of the resulting controllers back to concrete points through the state
// grids.  Blocking control inputs are never admitted, and nondeterminism is
// resolved against the controller (every successor must be acceptable).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "symcomp/grid.hpp"
#include "symcomp/module.hpp"

namespace symcomp {

struct Controller {
  std::string system;               // name of the module it was built for
  std::vector<Variable> states;
  std::vector<Variable> controls;
  Predicate policy;                 // over states + controls
  Predicate at_target;              // reach: states needing no action; else false
  // Winning sets by iteration: reach keeps every wave W_0 .. W_k (the step
  // index of a state is the first wave containing it); safety keeps only the
  // final fixed point.
  std::vector<Predicate> waves;

  // States the controller covers.  For safety this is exactly the fixed
  // point; for reach it includes target states, which need no input at all.
  Predicate domain() const;
};

// (state, control) pairs that are nonblocking and whose every successor
// lands in Z.  Z must be over the abstract states only.
Predicate controlled_pre(const ControlModule& sys, Predicate z);

// Greatest fixed point of W -> Safe && exists u . pre(W); the controller
// keeps every input that stays inside the fixed point (maximally
// permissive).
Controller solve_safety(const ControlModule& sys, Predicate safe);

// Least fixed point of W -> Target || exists u . pre(W).  The policy is
// deterministic: a state entering at wave k gets the single input driving it
// into wave k-1, ties broken by the smallest control assignment in declared
// variable order.
Controller solve_reach(const ControlModule& sys, Predicate target);

// Concrete-point view of an abstract controller.  A point is quantized per
// dimension; when it lies on a cell boundary the admissible inputs are the
// intersection over all related cells (an input is offered only if every
// cell allows it), so the answer may be empty even inside the controller
// domain -- callers should treat an empty set as "controller undefined
// here".  Points off the grid throw OutOfDomain.
class RefinedController {
public:
  RefinedController(Controller abstract, std::vector<Quantizer> state_grids);

  // Admissible control assignments (values aligned with controls()), in
  // lexicographic order.
  std::vector<std::vector<std::uint64_t>> admissible(std::span<const double> point) const;

  const Controller& abstracted() const { return abstract_; }
  const std::vector<Variable>& controls() const { return abstract_.controls; }

private:
  Controller abstract_;
  std::vector<Quantizer> grids_;
};

// Validates that the controller is nonempty and the grids align with its
// state variables (one quantizer per state, cell counts matching domains).
RefinedController refine_controller(Controller c, std::vector<Quantizer> state_grids);

}  // namespace symcomp
