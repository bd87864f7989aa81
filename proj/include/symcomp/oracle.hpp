#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symcomp/errors.hpp"
#include "symcomp/expr.hpp"
#include "symcomp/interval.hpp"

namespace symcomp {

using Box = std::vector<Interval>;

/// Box-to-box overapproximation of a concrete map: evaluate() returns one
/// interval per output containing every value the map can take on the
/// input box. Throws UndefinedOnBox when the map has no usable value
/// there; the abstractor records such cells as blocking.
class BoxOracle {
public:
  virtual ~BoxOracle() = default;
  virtual std::size_t input_arity() const = 0;
  virtual std::size_t output_arity() const = 0;
  virtual Box evaluate(const Box& input) const = 0;
  /// Rounding slack: callers widen each output bound outward by this many
  /// ulps before using the box, so double rounding cannot lose points.
  virtual unsigned widen_ulps() const { return 0; }
};

enum class OracleKind { Lipschitz, Monotone, IntervalExt };

/// Oracle backed by one expression per output. Three flavours:
///  - lipschitz: [F(c) - L*r, F(c) + L*r] with c the box center, r its
///    half-widths, L a nonnegative per-output/per-input bound matrix;
///  - monotone:  [F(lower corner), F(upper corner)];
///  - interval_ext: natural interval extension of the tree.
class ExprOracle final : public BoxOracle {
public:
  static ExprOracle lipschitz(std::vector<ExprPtr> outputs,
                              std::vector<std::string> inputs,
                              std::vector<std::vector<double>> L);
  /// Componentwise monotonicity is not proven: it is spot-checked on 2000
  /// seeded ordered pairs drawn from `domain`, and any observed decrease
  /// throws NotMonotone (callers may fall back to interval_ext).
  static ExprOracle monotone(std::vector<ExprPtr> outputs,
                             std::vector<std::string> inputs, Box domain,
                             std::uint64_t seed = 0x5eed);
  static ExprOracle interval_ext(std::vector<ExprPtr> outputs,
                                 std::vector<std::string> inputs);

  OracleKind kind() const { return kind_; }
  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<ExprPtr>& outputs() const { return outputs_; }

  std::size_t input_arity() const override { return inputs_.size(); }
  std::size_t output_arity() const override { return outputs_.size(); }
  Box evaluate(const Box& input) const override;
  unsigned widen_ulps() const override { return ulps_; }

private:
  ExprOracle(OracleKind kind, std::vector<ExprPtr> outputs,
             std::vector<std::string> inputs);

  OracleKind kind_;
  std::vector<ExprPtr> outputs_;
  std::vector<std::string> inputs_;
  std::vector<std::vector<double>> lip_; // Lipschitz only
  unsigned ulps_ = 0;
};

/// Adapter for hand-written box maps (test oracles, lookup tables).
class CallableOracle final : public BoxOracle {
public:
  CallableOracle(std::size_t input_arity, std::size_t output_arity,
                 std::function<Box(const Box&)> fn, unsigned ulps = 0)
      : in_(input_arity), out_(output_arity), fn_(std::move(fn)), ulps_(ulps) {}

  std::size_t input_arity() const override { return in_; }
  std::size_t output_arity() const override { return out_; }
  Box evaluate(const Box& input) const override;
  unsigned widen_ulps() const override { return ulps_; }

private:
  std::size_t in_, out_;
  std::function<Box(const Box&)> fn_;
  unsigned ulps_;
};

/// Steps each bound outward by `ulps` representable doubles.
Interval widen_interval(Interval v, unsigned ulps);

} // namespace symcomp
