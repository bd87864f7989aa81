#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symcomp/errors.hpp"
#include "symcomp/predicate.hpp"

namespace symcomp {

/// A memoryless module: a predicate over disjoint input and output
/// variable lists, constraining which joint assignments are allowed.
/// Dynamics, static maps, relations and sets are all expressed this way;
/// an input with no permitted output is "blocking".
class FiniteModule {
public:
  FiniteModule(std::string name, std::vector<Variable> inputs,
               std::vector<Variable> outputs, Predicate constraint);

  const std::string& name() const { return name_; }
  const std::vector<Variable>& inputs() const { return inputs_; }
  const std::vector<Variable>& outputs() const { return outputs_; }
  Predicate constraint() const { return constraint_; }
  Context& ctx() const { return *constraint_.ctx; }

  /// Inputs admitting at least one output: exists(outputs, constraint).
  Predicate nonblocking() const;

private:
  std::string name_;
  std::vector<Variable> inputs_, outputs_;
  Predicate constraint_;
  mutable std::optional<Predicate> nb_; // lazily computed, constraint is immutable
};

/// Composes two modules, feeding whichever one's outputs appear among the
/// other's inputs (either argument order works; both directions at once is
/// a loop). With m1 feeding m2, the result constrains
///
///   M1 ∧ M2 ∧ forall(o1 ∪ o2, M1 ⟹ nonblocking(M2))
///
/// over inputs (i1 ∪ i2) \ o1 and outputs o1 ∪ o2. The quantified guard
/// removes inputs for which m1 can produce an output that blocks m2 —
/// dropping it would let the pair promise more than the parts deliver.
/// Throws OutputClash when output lists overlap, AlgebraicLoop on a
/// two-way dependency, ContextMismatch across contexts.
FiniteModule compose2(const FiniteModule& a, const FiniteModule& b,
                      std::string name = "");

/// Folds compose2 over a dependency-ordered module list: repeatedly picks
/// the module none of whose outputs feed a not-yet-composed module
/// (ties broken by name), so every composition step feeds forward.
/// Throws AlgebraicLoop naming the modules on a cycle.
FiniteModule compose_all(const std::vector<FiniteModule>& modules,
                         std::string name = "");

/// Drops output variables by existential quantification.
/// Throws NotAnOutput when asked to hide an input or foreign variable.
FiniteModule hide(const FiniteModule& m, const std::vector<Variable>& hidden,
                  std::string name = "");

/// A module read as a control system: inputs split into current states x
/// and control choices u, outputs are the matching next states x'.
struct ControlModule {
  FiniteModule module;
  std::vector<Variable> states;   // aligned with primed
  std::vector<Variable> controls;
  std::vector<Variable> primed;

  Predicate transitions() const { return module.constraint(); }
  Predicate nonblocking() const { return module.nonblocking(); }
  Context& ctx() const { return module.ctx(); }
};

/// Validates the state/control reading of a module: every input is either
/// a paired state or a listed control, every output is some state's primed
/// copy with an equal domain. Hide latent outputs before calling this.
/// Violations throw PairingError.
ControlModule as_control(const FiniteModule& m,
                         const std::vector<std::pair<Variable, Variable>>& pairs,
                         const std::vector<Variable>& controls);

} // namespace symcomp
