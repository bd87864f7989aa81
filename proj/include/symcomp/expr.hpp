#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "symcomp/errors.hpp"
#include "symcomp/interval.hpp"

namespace symcomp {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree for concrete module right-hand sides.
///
/// Evaluation is partial: sqrt below zero and division by zero yield
/// "no value" (std::nullopt) rather than NaN, and that absence is what
/// later turns into blocking inputs. The glog primitive is the bounded
/// logistic saturator (b-a)/(1+e^(-rate*(x-(a+b)/2))) + a, kept fused so
/// its interval bounds stay tight.
struct Expr {
  enum Kind {
    kConst,
    kInput,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kNeg,
    kSqrt,
    kExp,
    kMin,
    kMax,
    kGlog,
    kGain,
  };

  Kind kind;
  double value = 0;              // kConst
  std::string name;              // kInput
  double a = 0, b = 0, rate = 0; // kGlog
  double scale = 1, offset = 0;  // kGain
  std::vector<ExprPtr> args;

  static ExprPtr constant(double v);
  static ExprPtr input(std::string name);
  static ExprPtr add(ExprPtr l, ExprPtr r);
  static ExprPtr sub(ExprPtr l, ExprPtr r);
  static ExprPtr mul(ExprPtr l, ExprPtr r);
  static ExprPtr div(ExprPtr l, ExprPtr r);
  static ExprPtr neg(ExprPtr e);
  static ExprPtr sqrt(ExprPtr e);
  static ExprPtr exp(ExprPtr e);
  static ExprPtr min(ExprPtr l, ExprPtr r);
  static ExprPtr max(ExprPtr l, ExprPtr r);
  /// Requires a < b and rate > 0 (throws ValidationError).
  static ExprPtr glog(double a, double b, double rate, ExprPtr e);
  static ExprPtr gain(double scale, double offset, ExprPtr e);
};

/// Parses infix arithmetic with function calls; see docs/expr-grammar.ebnf.
/// Unary minus applied to a literal folds into the constant so that
/// printing round-trips. Throws ParseError with line/column on bad input.
ExprPtr parse_expr(std::string_view text);

/// Prints with minimal parentheses; parse_expr(to_string(e)) is
/// structurally equal to e for every parser-produced tree.
std::string to_string(const ExprPtr& e);

/// Structural equality (constants compared by ==).
bool expr_equal(const ExprPtr& x, const ExprPtr& y);

/// Names of all referenced inputs, sorted.
std::set<std::string> expr_inputs(const ExprPtr& e);

/// Replaces input references by whole expressions (used to inline latent
/// variables when building a monolithic right-hand side).
ExprPtr substitute(const ExprPtr& e,
                   const std::unordered_map<std::string, ExprPtr>& map);

using Valuation = std::unordered_map<std::string, double>;
using BoxValuation = std::unordered_map<std::string, Interval>;

/// Point evaluation. nullopt means the expression has no value here
/// (sqrt of a negative, division by zero, or a NaN intermediate).
/// Throws UnboundVariable when a referenced input is missing.
std::optional<double> eval(const ExprPtr& e, const Valuation& v);

/// Natural interval extension; the result contains eval(e, p) for every
/// point p in the box where eval is defined. nullopt when the extension
/// is undefined (denominator interval spans 0, sqrt of an all-negative
/// interval). Bounds may be infinite.
std::optional<Interval> interval_eval(const ExprPtr& e, const BoxValuation& box);

/// Number of rounding arithmetic steps, used to widen oracle boxes by a
/// matching count of ulps. Counts libm calls with extra slack.
unsigned op_count(const ExprPtr& e);

/// The fused saturator (shared by eval and interval_eval).
double glog_value(double a, double b, double rate, double x);

/// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

} // namespace symcomp
