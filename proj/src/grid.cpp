#include "symcomp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace symcomp {

Quantizer Quantizer::uniform(ContinuousDomain dom, double eta, double anchor,
                             std::uint32_t cells) {
  if (!(eta > 0) || !std::isfinite(eta))
    throw ValidationError("quantizer eta must be positive");
  if (!(dom.lower <= dom.upper))
    throw ValidationError("quantizer domain is empty");
  if (cells == 0) throw ValidationError("quantizer needs at least one cell");
  Quantizer q;
  q.dom_ = dom;
  q.eta_ = eta;
  q.anchor_ = anchor;
  q.cells_ = cells;
  return q;
}

Quantizer Quantizer::identity(std::vector<double> labels) {
  if (labels.empty()) throw ValidationError("identity quantizer needs labels");
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (!(labels[i - 1] < labels[i]))
      throw ValidationError("identity labels must be strictly increasing");
  Quantizer q;
  q.identity_ = true;
  q.labels_ = std::move(labels);
  q.cells_ = static_cast<std::uint32_t>(q.labels_.size());
  q.dom_ = {q.labels_.front(), q.labels_.back()};
  return q;
}

double Quantizer::center(std::uint32_t cell) const {
  if (cell >= cells_) throw BadCell("cell " + std::to_string(cell) + " of " +
                                    std::to_string(cells_));
  return identity_ ? labels_[cell] : anchor_ + eta_ * cell;
}

std::vector<std::uint32_t> Quantizer::quantize(double point) const {
  if (identity_) {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), point);
    if (it == labels_.end() || *it != point)
      throw OutOfDomain("point " + std::to_string(point) +
                        " is not one of the discrete labels");
    return {static_cast<std::uint32_t>(it - labels_.begin())};
  }
  if (!(point >= dom_.lower && point <= dom_.upper))
    throw OutOfDomain("point " + std::to_string(point) + " outside [" +
                      std::to_string(dom_.lower) + "," +
                      std::to_string(dom_.upper) + "]");
  std::vector<std::uint32_t> out;
  double t = (point - anchor_) / eta_;
  long long base = static_cast<long long>(std::floor(t));
  // A point mathematically on a cell boundary belongs to both neighbours,
  // but rounding can leave its computed value a few ulps outside each of
  // them.  Widen the test by an ulp-scale slack so such points keep both
  // cells instead of ending up with none; genuine coverage gaps are many
  // orders of magnitude wider than this.
  double slack = 16 * std::numeric_limits<double>::epsilon() *
                 std::max({std::abs(point), std::abs(anchor_) + eta_ * cells_, 1.0});
  for (long long c = base - 1; c <= base + 1; ++c) {
    if (c < 0 || c >= static_cast<long long>(cells_)) continue;
    double center = anchor_ + eta_ * static_cast<double>(c);
    if (std::abs(point - center) <= eta_ / 2 + slack)
      out.push_back(static_cast<std::uint32_t>(c));
  }
  return out;
}

Interval Quantizer::concretize(std::uint32_t cell) const {
  if (cell >= cells_)
    throw BadCell("cell " + std::to_string(cell) + " outside grid of " +
                  std::to_string(cells_));
  if (identity_) return {labels_[cell], labels_[cell]};
  double c = anchor_ + eta_ * cell;
  return {std::max(dom_.lower, c - eta_ / 2), std::min(dom_.upper, c + eta_ / 2)};
}

bool Quantizer::check_strict() const {
  if (identity_) return true;
  // consecutive cells always touch, so covering the two ends is enough
  return anchor_ - eta_ / 2 <= dom_.lower &&
         anchor_ + eta_ * (cells_ - 1) + eta_ / 2 >= dom_.upper;
}

Interval Quantizer::covered() const {
  if (identity_) return {labels_.front(), labels_.back()};
  return {std::max(dom_.lower, anchor_ - eta_ / 2),
          std::min(dom_.upper, anchor_ + eta_ * (cells_ - 1) + eta_ / 2)};
}

std::optional<std::pair<std::uint32_t, std::uint32_t>>
Quantizer::cells_intersecting(const Interval& box) const {
  if (!(box.lo <= box.hi)) return std::nullopt;
  if (identity_) {
    auto lo = std::lower_bound(labels_.begin(), labels_.end(), box.lo);
    if (lo == labels_.end() || *lo > box.hi) return std::nullopt;
    auto hi = std::upper_bound(labels_.begin(), labels_.end(), box.hi);
    return std::make_pair(static_cast<std::uint32_t>(lo - labels_.begin()),
                          static_cast<std::uint32_t>(hi - labels_.begin() - 1));
  }
  // candidate range from arithmetic, then verified against the exact closed
  // intervals so floating point noise can only widen, never drop, a cell
  auto intersects = [&](long long c) {
    if (c < 0 || c >= static_cast<long long>(cells_)) return false;
    Interval cell = concretize(static_cast<std::uint32_t>(c));
    return cell.lo <= box.hi && cell.hi >= box.lo;
  };
  long long lo = static_cast<long long>(std::floor((box.lo - anchor_) / eta_)) - 1;
  long long hi = static_cast<long long>(std::ceil((box.hi - anchor_) / eta_)) + 1;
  while (lo <= hi && !intersects(lo)) ++lo;
  while (hi >= lo && !intersects(hi)) --hi;
  if (lo > hi) return std::nullopt;
  return std::make_pair(static_cast<std::uint32_t>(lo),
                        static_cast<std::uint32_t>(hi));
}

Predicate relation_predicate(Context& ctx, const Quantizer& q,
                             std::span<const double> samples,
                             Variable sample_var, Variable cell_var) {
  if (sample_var.domain_size() != samples.size())
    throw TypeMismatch("sample variable domain does not match the sample list");
  if (cell_var.domain_size() != q.cell_count())
    throw TypeMismatch("cell variable domain does not match the quantizer");
  Predicate rel = ctx.fls();
  for (std::size_t s = 0; s < samples.size(); ++s) {
    auto cells = q.quantize(samples[s]);
    if (cells.empty()) continue;
    Predicate cs = ctx.fls();
    for (std::uint32_t cell : cells) cs = ctx.disj(cs, ctx.value_eq(cell_var, cell));
    rel = ctx.disj(rel, ctx.conj(ctx.value_eq(sample_var, s), cs));
  }
  return rel;
}

Predicate joint_relation_predicate(Context& ctx, std::span<const Quantizer> qs,
                                   std::span<const std::vector<double>> samples_per_dim,
                                   std::span<const Variable> sample_vars,
                                   std::span<const Variable> cell_vars) {
  if (qs.size() != samples_per_dim.size() || qs.size() != sample_vars.size() ||
      qs.size() != cell_vars.size())
    throw TypeMismatch("joint relation: dimension lists do not align");
  Predicate rel = ctx.tru();
  for (std::size_t d = 0; d < qs.size(); ++d)
    rel = ctx.conj(rel, relation_predicate(ctx, qs[d], samples_per_dim[d],
                                           sample_vars[d], cell_vars[d]));
  return rel;
}

} // namespace symcomp
