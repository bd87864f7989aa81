#include "symcomp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace symcomp {

Interval widen_interval(Interval v, unsigned ulps) {
  for (unsigned i = 0; i < ulps; ++i) {
    v.lo = std::nextafter(v.lo, -std::numeric_limits<double>::infinity());
    v.hi = std::nextafter(v.hi, std::numeric_limits<double>::infinity());
  }
  return v;
}

ExprOracle::ExprOracle(OracleKind kind, std::vector<ExprPtr> outputs,
                       std::vector<std::string> inputs)
    : kind_(kind), outputs_(std::move(outputs)), inputs_(std::move(inputs)) {
  if (outputs_.empty())
    throw ValidationError("oracle needs at least one output expression");
  for (const ExprPtr& e : outputs_) {
    for (const std::string& ref : expr_inputs(e)) {
      if (std::find(inputs_.begin(), inputs_.end(), ref) == inputs_.end())
        throw UnboundVariable("expression references undeclared input '" + ref + "'");
    }
    ulps_ = std::max(ulps_, op_count(e));
  }
}

ExprOracle ExprOracle::lipschitz(std::vector<ExprPtr> outputs,
                                 std::vector<std::string> inputs,
                                 std::vector<std::vector<double>> L) {
  ExprOracle o(OracleKind::Lipschitz, std::move(outputs), std::move(inputs));
  if (L.size() != o.outputs_.size())
    throw ValidationError("Lipschitz matrix needs one row per output");
  for (const auto& row : L) {
    if (row.size() != o.inputs_.size())
      throw ValidationError("Lipschitz row needs one entry per input");
    for (double v : row)
      if (!(v >= 0) || !std::isfinite(v))
        throw ValidationError("Lipschitz entries must be finite and nonnegative");
  }
  o.lip_ = std::move(L);
  // center computation plus the L.r dot product all round
  o.ulps_ += 4 + 2 * static_cast<unsigned>(o.inputs_.size());
  return o;
}

ExprOracle ExprOracle::monotone(std::vector<ExprPtr> outputs,
                                std::vector<std::string> inputs, Box domain,
                                std::uint64_t seed) {
  ExprOracle o(OracleKind::Monotone, std::move(outputs), std::move(inputs));
  if (domain.size() != o.inputs_.size())
    throw ValidationError("monotone validation domain needs one interval per input");
  o.ulps_ += 2;

  std::mt19937_64 rng(seed);
  Valuation lo, hi;
  for (int trial = 0; trial < 2000; ++trial) {
    for (std::size_t d = 0; d < domain.size(); ++d) {
      std::uniform_real_distribution<double> dist(domain[d].lo, domain[d].hi);
      double p = dist(rng), q = dist(rng);
      lo[o.inputs_[d]] = std::min(p, q);
      hi[o.inputs_[d]] = std::max(p, q);
    }
    for (std::size_t k = 0; k < o.outputs_.size(); ++k) {
      std::optional<double> flo = eval(o.outputs_[k], lo);
      std::optional<double> fhi = eval(o.outputs_[k], hi);
      if (!flo || !fhi)
        continue; // partial maps are checked only where defined
      double tol = 1e-9 * std::max({1.0, std::fabs(*flo), std::fabs(*fhi)});
      if (*flo > *fhi + tol)
        throw NotMonotone("output " + std::to_string(k) +
                          " decreases on an ordered sample pair (" +
                          format_double(*flo) + " > " + format_double(*fhi) + ")");
    }
  }
  return o;
}

ExprOracle ExprOracle::interval_ext(std::vector<ExprPtr> outputs,
                                    std::vector<std::string> inputs) {
  ExprOracle o(OracleKind::IntervalExt, std::move(outputs), std::move(inputs));
  o.ulps_ += 2;
  return o;
}

Box ExprOracle::evaluate(const Box& input) const {
  if (input.size() != inputs_.size())
    throw ValidationError("oracle expects " + std::to_string(inputs_.size()) +
                          " input intervals, got " + std::to_string(input.size()));
  Box out;
  out.reserve(outputs_.size());

  if (kind_ == OracleKind::IntervalExt) {
    BoxValuation box;
    for (std::size_t d = 0; d < input.size(); ++d)
      box[inputs_[d]] = input[d];
    for (const ExprPtr& e : outputs_) {
      std::optional<Interval> v = interval_eval(e, box);
      if (!v)
        throw UndefinedOnBox("interval extension undefined on the box");
      out.push_back(*v);
    }
    return out;
  }

  if (kind_ == OracleKind::Monotone) {
    Valuation lo, hi;
    for (std::size_t d = 0; d < input.size(); ++d) {
      lo[inputs_[d]] = input[d].lo;
      hi[inputs_[d]] = input[d].hi;
    }
    for (const ExprPtr& e : outputs_) {
      std::optional<double> flo = eval(e, lo);
      std::optional<double> fhi = eval(e, hi);
      if (!flo || !fhi)
        throw UndefinedOnBox("map undefined at a box corner");
      // validated monotone, so any inversion is rounding noise
      out.push_back({std::min(*flo, *fhi), std::max(*flo, *fhi)});
    }
    return out;
  }

  // Lipschitz
  Valuation center;
  std::vector<double> radius(input.size());
  for (std::size_t d = 0; d < input.size(); ++d) {
    center[inputs_[d]] = (input[d].lo + input[d].hi) / 2.0;
    radius[d] = (input[d].hi - input[d].lo) / 2.0;
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    std::optional<double> fc = eval(outputs_[k], center);
    if (!fc)
      throw UndefinedOnBox("map undefined at the box center");
    double slack = 0;
    for (std::size_t d = 0; d < input.size(); ++d)
      slack += lip_[k][d] * radius[d];
    out.push_back({*fc - slack, *fc + slack});
  }
  return out;
}

Box CallableOracle::evaluate(const Box& input) const {
  if (input.size() != in_)
    throw ValidationError("oracle expects " + std::to_string(in_) +
                          " input intervals, got " + std::to_string(input.size()));
  Box out = fn_(input);
  if (out.size() != out_)
    throw ValidationError("oracle callable produced " + std::to_string(out.size()) +
                          " intervals, expected " + std::to_string(out_));
  return out;
}

} // namespace symcomp
