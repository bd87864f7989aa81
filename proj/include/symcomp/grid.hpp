#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "symcomp/errors.hpp"
#include "symcomp/interval.hpp"
#include "symcomp/predicate.hpp"

namespace symcomp {

/// Maps a continuous (or already discrete) variable onto cell indices.
///
/// Uniform quantizers put cell c at center anchor + c*eta and give it the
/// closed radius eta/2, so a point sitting exactly on a cell boundary
/// belongs to both neighbours. Identity quantizers enumerate an explicit
/// label list and relate each label to its own index.
class Quantizer {
public:
  static Quantizer uniform(ContinuousDomain dom, double eta, double anchor,
                           std::uint32_t cells);
  static Quantizer identity(std::vector<double> labels);

  bool is_identity() const { return identity_; }
  std::uint32_t cell_count() const { return cells_; }
  double eta() const { return eta_; }
  double anchor() const { return anchor_; }
  const ContinuousDomain& domain() const { return dom_; }
  const std::vector<double>& labels() const { return labels_; }

  /// Cells whose closed concretization contains the point. Boundary points
  /// land in two cells; throws OutOfDomain outside [lower, upper] (or off
  /// the label list for identity quantizers). May be empty only when the
  /// quantizer is not strict.
  std::vector<std::uint32_t> quantize(double point) const;

  /// Closed interval covered by one cell, clipped to the domain.
  Interval concretize(std::uint32_t cell) const;

  /// True when every domain point has at least one cell.
  bool check_strict() const;

  /// Cell center (uniform) or label (identity).
  double center(std::uint32_t cell) const;

  /// Contiguous index range of cells whose concretization intersects the
  /// closed interval; nullopt when no cell does.
  std::optional<std::pair<std::uint32_t, std::uint32_t>>
  cells_intersecting(const Interval& box) const;

  /// Region covered by the union of all cells (used for escape checks).
  Interval covered() const;

private:
  Quantizer() = default;
  bool identity_ = false;
  ContinuousDomain dom_;
  double eta_ = 1, anchor_ = 0;
  std::uint32_t cells_ = 0;
  std::vector<double> labels_; // identity only, strictly increasing
};

/// Quantizer tied to the predicate variable that carries its cell index.
struct BoundQuantizer {
  Quantizer q;
  Variable var;
};

/// Relation predicate between a finite list of sample points (indexed by
/// sample_var) and the quantizer cells (indexed by cell_var):
/// related iff the sample lies inside the cell.
Predicate relation_predicate(Context& ctx, const Quantizer& q,
                             std::span<const double> samples,
                             Variable sample_var, Variable cell_var);

/// Component-wise conjunction across dimensions; samples_per_dim[i] holds
/// the label list of sample_vars[i].
Predicate joint_relation_predicate(Context& ctx,
                                   std::span<const Quantizer> qs,
                                   std::span<const std::vector<double>> samples_per_dim,
                                   std::span<const Variable> sample_vars,
                                   std::span<const Variable> cell_vars);

} // namespace symcomp
