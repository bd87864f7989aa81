#include "symcomp/synthesis.hpp"

#include <algorithm>

#include "symcomp/errors.hpp"

namespace symcomp {

namespace {

void require_state_pred(Context& ctx, const ControlModule& sys, Predicate p, const char* what) {
  for (Variable v : ctx.support_vars(p))
    if (std::find(sys.states.begin(), sys.states.end(), v) == sys.states.end())
      throw SupportError(std::string(what) + " must be over the abstract states only");
}

std::vector<std::pair<Variable, Variable>> prime_map(const ControlModule& sys) {
  std::vector<std::pair<Variable, Variable>> map;
  map.reserve(sys.states.size());
  for (std::size_t i = 0; i < sys.states.size(); ++i)
    map.emplace_back(sys.states[i], sys.primed[i]);
  return map;
}

// Restrict p (over states + controls) to one control assignment per state:
// the lexicographically smallest admissible one, control variables compared
// in their declared order.
Predicate lexmin_controls(Context& ctx, Predicate p, const std::vector<Variable>& controls) {
  for (std::size_t i = 0; i < controls.size(); ++i) {
    Variable u = controls[i];
    std::vector<Variable> rest(controls.begin() + static_cast<std::ptrdiff_t>(i),
                               controls.end());
    Predicate acc = ctx.fls();
    Predicate covered = ctx.fls();
    for (std::uint64_t val = 0; val < u.domain_size(); ++val) {
      Predicate cand = ctx.conj(p, ctx.value_eq(u, val));
      Predicate proj = ctx.exists(rest, cand);
      Predicate fresh = ctx.conj(proj, ctx.neg(covered));
      covered = ctx.disj(covered, proj);
      acc = ctx.disj(acc, ctx.conj(cand, fresh));
    }
    p = acc;
  }
  return p;
}

}  // namespace

Predicate Controller::domain() const {
  Context* ctx = policy.ctx;
  if (ctx == nullptr) throw ValidationError("controller has no predicate attached");
  return ctx->disj(at_target, ctx->exists(controls, policy));
}

Predicate controlled_pre(const ControlModule& sys, Predicate z) {
  Context& ctx = sys.ctx();
  require_state_pred(ctx, sys, z, "pre target set");
  Predicate zp = ctx.rename(z, prime_map(sys));
  Predicate escapes = ctx.exists(sys.primed, ctx.conj(sys.transitions(), ctx.neg(zp)));
  return ctx.conj(sys.nonblocking(), ctx.neg(escapes));
}

Controller solve_safety(const ControlModule& sys, Predicate safe) {
  Context& ctx = sys.ctx();
  require_state_pred(ctx, sys, safe, "safe set");

  Predicate w = safe;
  for (;;) {
    Predicate next = ctx.conj(safe, ctx.exists(sys.controls, controlled_pre(sys, w)));
    if (next == w) break;
    w = next;
  }

  Controller c;
  c.system = sys.module.name();
  c.states = sys.states;
  c.controls = sys.controls;
  c.policy = ctx.conj(safe, controlled_pre(sys, w));
  c.at_target = ctx.fls();
  c.waves = {w};
  return c;
}

Controller solve_reach(const ControlModule& sys, Predicate target) {
  Context& ctx = sys.ctx();
  require_state_pred(ctx, sys, target, "target set");

  Controller c;
  c.system = sys.module.name();
  c.states = sys.states;
  c.controls = sys.controls;
  c.policy = ctx.fls();
  c.at_target = target;
  c.waves = {target};

  Predicate w = target;
  for (;;) {
    Predicate pre = controlled_pre(sys, w);
    Predicate fresh = ctx.conj(ctx.exists(sys.controls, pre), ctx.neg(w));
    if (ctx.is_unsat(fresh)) break;
    // states entering this wave get their first-entry inputs, thinned to the
    // smallest admissible control assignment
    c.policy = ctx.disj(c.policy, lexmin_controls(ctx, ctx.conj(pre, fresh), sys.controls));
    w = ctx.disj(w, fresh);
    c.waves.push_back(w);
  }
  return c;
}

RefinedController::RefinedController(Controller abstract, std::vector<Quantizer> state_grids)
    : abstract_(std::move(abstract)), grids_(std::move(state_grids)) {
  Context* ctx = abstract_.policy.ctx;
  if (ctx == nullptr) throw ValidationError("controller has no predicate attached");
  if (ctx->is_unsat(abstract_.policy) && ctx->is_unsat(abstract_.at_target))
    throw ValidationError("refusing to refine an empty controller");
  if (grids_.size() != abstract_.states.size())
    throw ValidationError("need exactly one state grid per controller state variable");
  for (std::size_t d = 0; d < grids_.size(); ++d)
    if (grids_[d].cell_count() != abstract_.states[d].domain_size())
      throw TypeMismatch("grid cell count does not match the state domain of " +
                         abstract_.states[d].name());
}

std::vector<std::vector<std::uint64_t>>
RefinedController::admissible(std::span<const double> point) const {
  if (point.size() != grids_.size())
    throw ValidationError("point dimension does not match the state grids");
  Context& ctx = *abstract_.policy.ctx;

  std::vector<std::vector<std::uint32_t>> cells(grids_.size());
  for (std::size_t d = 0; d < grids_.size(); ++d)
    cells[d] = grids_[d].quantize(point[d]);  // off-grid points throw here

  // Intersection over every related cell tuple: an input survives only if
  // each tuple's policy row allows it.
  Predicate allowed = ctx.tru();
  std::vector<std::size_t> idx(cells.size(), 0);
  for (;;) {
    Predicate row = abstract_.policy;
    for (std::size_t d = 0; d < cells.size(); ++d)
      row = ctx.fix(row, abstract_.states[d], cells[d][idx[d]]);
    allowed = ctx.conj(allowed, row);
    std::size_t d = cells.size();
    for (;;) {
      if (d == 0) goto enumerate;
      --d;
      if (++idx[d] < cells[d].size()) break;
      idx[d] = 0;
    }
  }

enumerate:
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<Variable> sorted = ctx.enumerate_sat(
      allowed, abstract_.controls,
      [&](const std::vector<std::uint64_t>& vals) { out.push_back(vals); });

  // enumerate_sat aligns values with declaration order; put them back in the
  // controller's control order if that differs
  if (sorted != abstract_.controls) {
    std::vector<std::size_t> pos(sorted.size());
    for (std::size_t i = 0; i < abstract_.controls.size(); ++i)
      pos[i] = static_cast<std::size_t>(
          std::find(sorted.begin(), sorted.end(), abstract_.controls[i]) - sorted.begin());
    for (auto& row : out) {
      std::vector<std::uint64_t> reordered(row.size());
      for (std::size_t i = 0; i < row.size(); ++i) reordered[i] = row[pos[i]];
      row = std::move(reordered);
    }
  }
  return out;
}

RefinedController refine_controller(Controller c, std::vector<Quantizer> state_grids) {
  return RefinedController(std::move(c), std::move(state_grids));
}

}  // namespace symcomp
