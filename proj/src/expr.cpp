#include "symcomp/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace symcomp {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr binary(Expr::Kind k, ExprPtr l, ExprPtr r) {
  Expr e;
  e.kind = k;
  e.args = {std::move(l), std::move(r)};
  return node(std::move(e));
}

ExprPtr unary(Expr::Kind k, ExprPtr c) {
  Expr e;
  e.kind = k;
  e.args = {std::move(c)};
  return node(std::move(e));
}

} // namespace

ExprPtr Expr::constant(double v) {
  Expr e;
  e.kind = kConst;
  e.value = v;
  return node(std::move(e));
}

ExprPtr Expr::input(std::string name) {
  Expr e;
  e.kind = kInput;
  e.name = std::move(name);
  return node(std::move(e));
}

ExprPtr Expr::add(ExprPtr l, ExprPtr r) { return binary(kAdd, std::move(l), std::move(r)); }
ExprPtr Expr::sub(ExprPtr l, ExprPtr r) { return binary(kSub, std::move(l), std::move(r)); }
ExprPtr Expr::mul(ExprPtr l, ExprPtr r) { return binary(kMul, std::move(l), std::move(r)); }
ExprPtr Expr::div(ExprPtr l, ExprPtr r) { return binary(kDiv, std::move(l), std::move(r)); }
ExprPtr Expr::min(ExprPtr l, ExprPtr r) { return binary(kMin, std::move(l), std::move(r)); }
ExprPtr Expr::max(ExprPtr l, ExprPtr r) { return binary(kMax, std::move(l), std::move(r)); }
ExprPtr Expr::neg(ExprPtr e) { return unary(kNeg, std::move(e)); }
ExprPtr Expr::sqrt(ExprPtr e) { return unary(kSqrt, std::move(e)); }
ExprPtr Expr::exp(ExprPtr e) { return unary(kExp, std::move(e)); }

ExprPtr Expr::glog(double a, double b, double rate, ExprPtr c) {
  if (!(a < b))
    throw ValidationError("glog requires a < b, got a=" + format_double(a) +
                          " b=" + format_double(b));
  if (!(rate > 0))
    throw ValidationError("glog requires rate > 0, got " + format_double(rate));
  Expr e;
  e.kind = kGlog;
  e.a = a;
  e.b = b;
  e.rate = rate;
  e.args = {std::move(c)};
  return node(std::move(e));
}

ExprPtr Expr::gain(double scale, double offset, ExprPtr c) {
  Expr e;
  e.kind = kGain;
  e.scale = scale;
  e.offset = offset;
  e.args = {std::move(c)};
  return node(std::move(e));
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  [[noreturn]] void fail(int l, int c, const std::string& what) const {
    throw ParseError("line " + std::to_string(l) + ", col " + std::to_string(c) +
                     ": " + what);
  }
  [[noreturn]] void fail(const std::string& what) const { fail(line, col, what); }

  bool at_end() const { return pos >= text.size(); }
  char peek() const { return at_end() ? '\0' : text[pos]; }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
      advance();
  }

  bool eat(char c) {
    skip_ws();
    if (peek() != c)
      return false;
    advance();
    return true;
  }

  void expect(char c, const char* where) {
    if (!eat(c))
      fail(std::string("expected '") + c + "' " + where);
  }

  ExprPtr parse() {
    ExprPtr e = sum();
    skip_ws();
    if (!at_end())
      fail("unexpected trailing input");
    return e;
  }

  ExprPtr sum() {
    ExprPtr l = term();
    for (;;) {
      skip_ws();
      if (peek() == '+') {
        advance();
        l = Expr::add(std::move(l), term());
      } else if (peek() == '-') {
        advance();
        l = Expr::sub(std::move(l), term());
      } else {
        return l;
      }
    }
  }

  ExprPtr term() {
    ExprPtr l = factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        advance();
        l = Expr::mul(std::move(l), factor());
      } else if (peek() == '/') {
        advance();
        l = Expr::div(std::move(l), factor());
      } else {
        return l;
      }
    }
  }

  ExprPtr factor() {
    skip_ws();
    if (peek() == '-') {
      advance();
      ExprPtr c = factor();
      // fold so that "-2" is the constant -2 and printing round-trips
      if (c->kind == Expr::kConst)
        return Expr::constant(-c->value);
      return Expr::neg(std::move(c));
    }
    return primary();
  }

  ExprPtr primary() {
    skip_ws();
    int l = line, c = col;
    char ch = peek();
    if (ch == '(') {
      advance();
      ExprPtr e = sum();
      expect(')', "to close parenthesized expression");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.')
      return Expr::constant(number(l, c));
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_')
      return identifier(l, c);
    if (at_end())
      fail(l, c, "expected expression, got end of input");
    fail(l, c, std::string("expected expression, got '") + ch + "'");
  }

  double number(int l, int c) {
    std::size_t start = pos;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      advance();
    if (peek() == '.') {
      advance();
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
        advance();
    }
    if (pos == start || (pos == start + 1 && text[start] == '.'))
      fail(l, c, "malformed number");
    if (peek() == 'e' || peek() == 'E') {
      advance();
      if (peek() == '+' || peek() == '-')
        advance();
      std::size_t digits = pos;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
        advance();
      if (pos == digits)
        fail(l, c, "malformed exponent");
    }
    std::string tok(text.substr(start, pos - start));
    return std::strtod(tok.c_str(), nullptr);
  }

  ExprPtr identifier(int l, int c) {
    std::size_t start = pos;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      advance();
    std::string name(text.substr(start, pos - start));
    skip_ws();
    bool call = peek() == '(';
    static const char* functions[] = {"sqrt", "exp", "min", "max", "glog", "gain"};
    bool reserved = std::find_if(std::begin(functions), std::end(functions),
                                 [&](const char* f) { return name == f; }) !=
                    std::end(functions);
    if (!call) {
      if (reserved)
        fail(l, c, "'" + name + "' is a function name, not a variable");
      return Expr::input(std::move(name));
    }
    if (!reserved)
      fail(l, c, "unknown function '" + name + "'");
    advance(); // '('
    std::vector<ExprPtr> args;
    args.push_back(sum());
    while (eat(','))
      args.push_back(sum());
    expect(')', "to close argument list of " + name);
    return build_call(name, std::move(args), l, c);
  }

  void expect(char ch, const std::string& where) { expect(ch, where.c_str()); }

  double const_arg(const std::string& fn, const std::vector<ExprPtr>& args,
                   std::size_t i, int l, int c) {
    if (args[i]->kind != Expr::kConst)
      fail(l, c, fn + " parameter " + std::to_string(i + 1) + " must be a numeric constant");
    return args[i]->value;
  }

  ExprPtr build_call(const std::string& fn, std::vector<ExprPtr> args, int l, int c) {
    auto want = [&](std::size_t n) {
      if (args.size() != n)
        fail(l, c, fn + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") +
                       ", got " + std::to_string(args.size()));
    };
    try {
      if (fn == "sqrt") {
        want(1);
        return Expr::sqrt(std::move(args[0]));
      }
      if (fn == "exp") {
        want(1);
        return Expr::exp(std::move(args[0]));
      }
      if (fn == "min") {
        want(2);
        return Expr::min(std::move(args[0]), std::move(args[1]));
      }
      if (fn == "max") {
        want(2);
        return Expr::max(std::move(args[0]), std::move(args[1]));
      }
      if (fn == "glog") {
        want(4);
        double a = const_arg(fn, args, 0, l, c);
        double b = const_arg(fn, args, 1, l, c);
        double rate = const_arg(fn, args, 2, l, c);
        return Expr::glog(a, b, rate, std::move(args[3]));
      }
      want(3); // gain
      double scale = const_arg(fn, args, 0, l, c);
      double offset = const_arg(fn, args, 1, l, c);
      return Expr::gain(scale, offset, std::move(args[2]));
    } catch (const ValidationError& e) {
      fail(l, c, e.what());
    }
  }
};

} // namespace

ExprPtr parse_expr(std::string_view text) {
  Parser p{text};
  return p.parse();
}

// ---------------------------------------------------------------------------
// printing

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v)
      break;
  }
  return buf;
}

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
  case Expr::kAdd:
  case Expr::kSub:
    return 1;
  case Expr::kMul:
  case Expr::kDiv:
    return 2;
  case Expr::kNeg:
    return 3;
  default:
    return 4;
  }
}

void render(std::string& out, const ExprPtr& e);

// Parenthesize when the child would otherwise re-associate: lower
// precedence anywhere, or equal precedence on the right of a
// left-associative operator (keeps a+(b+c) distinct from a+b+c).
void child(std::string& out, const ExprPtr& e, int parent, bool right) {
  int p = precedence(e->kind);
  bool paren = p < parent || (right && p == parent);
  if (paren)
    out += '(';
  render(out, e);
  if (paren)
    out += ')';
}

void call(std::string& out, const char* fn, std::initializer_list<std::string> pre,
          const ExprPtr& arg) {
  out += fn;
  out += '(';
  for (const std::string& s : pre) {
    out += s;
    out += ", ";
  }
  render(out, arg);
  out += ')';
}

void render(std::string& out, const ExprPtr& e) {
  switch (e->kind) {
  case Expr::kConst:
    out += format_double(e->value);
    return;
  case Expr::kInput:
    out += e->name;
    return;
  case Expr::kAdd:
    child(out, e->args[0], 1, false);
    out += " + ";
    child(out, e->args[1], 1, true);
    return;
  case Expr::kSub:
    child(out, e->args[0], 1, false);
    out += " - ";
    child(out, e->args[1], 1, true);
    return;
  case Expr::kMul:
    child(out, e->args[0], 2, false);
    out += "*";
    child(out, e->args[1], 2, true);
    return;
  case Expr::kDiv:
    child(out, e->args[0], 2, false);
    out += "/";
    child(out, e->args[1], 2, true);
    return;
  case Expr::kNeg:
    out += '-';
    child(out, e->args[0], 3, false);
    return;
  case Expr::kSqrt:
    call(out, "sqrt", {}, e->args[0]);
    return;
  case Expr::kExp:
    call(out, "exp", {}, e->args[0]);
    return;
  case Expr::kMin:
    out += "min(";
    render(out, e->args[0]);
    out += ", ";
    render(out, e->args[1]);
    out += ')';
    return;
  case Expr::kMax:
    out += "max(";
    render(out, e->args[0]);
    out += ", ";
    render(out, e->args[1]);
    out += ')';
    return;
  case Expr::kGlog:
    call(out, "glog",
         {format_double(e->a), format_double(e->b), format_double(e->rate)},
         e->args[0]);
    return;
  case Expr::kGain:
    call(out, "gain", {format_double(e->scale), format_double(e->offset)},
         e->args[0]);
    return;
  }
}

} // namespace

std::string to_string(const ExprPtr& e) {
  std::string out;
  render(out, e);
  return out;
}

bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
  if (x.get() == y.get())
    return true;
  if (x->kind != y->kind || x->args.size() != y->args.size())
    return false;
  switch (x->kind) {
  case Expr::kConst:
    if (x->value != y->value)
      return false;
    break;
  case Expr::kInput:
    if (x->name != y->name)
      return false;
    break;
  case Expr::kGlog:
    if (x->a != y->a || x->b != y->b || x->rate != y->rate)
      return false;
    break;
  case Expr::kGain:
    if (x->scale != y->scale || x->offset != y->offset)
      return false;
    break;
  default:
    break;
  }
  for (std::size_t i = 0; i < x->args.size(); ++i)
    if (!expr_equal(x->args[i], y->args[i]))
      return false;
  return true;
}

std::set<std::string> expr_inputs(const ExprPtr& e) {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const ExprPtr& n) -> void {
    if (n->kind == Expr::kInput)
      out.insert(n->name);
    for (const ExprPtr& c : n->args)
      self(self, c);
  };
  walk(walk, e);
  return out;
}

ExprPtr substitute(const ExprPtr& e,
                   const std::unordered_map<std::string, ExprPtr>& map) {
  if (e->kind == Expr::kInput) {
    auto it = map.find(e->name);
    return it == map.end() ? e : it->second;
  }
  bool changed = false;
  std::vector<ExprPtr> args;
  args.reserve(e->args.size());
  for (const ExprPtr& c : e->args) {
    args.push_back(substitute(c, map));
    changed = changed || args.back().get() != c.get();
  }
  if (!changed)
    return e;
  Expr n = *e;
  n.args = std::move(args);
  return node(std::move(n));
}

// ---------------------------------------------------------------------------
// evaluation

double glog_value(double a, double b, double rate, double x) {
  return (b - a) / (1.0 + std::exp(-rate * (x - (a + b) / 2.0))) + a;
}

std::optional<double> eval(const ExprPtr& e, const Valuation& v) {
  auto finite_or_inf = [](double d) -> std::optional<double> {
    if (std::isnan(d))
      return std::nullopt;
    return d;
  };
  switch (e->kind) {
  case Expr::kConst:
    return e->value;
  case Expr::kInput: {
    auto it = v.find(e->name);
    if (it == v.end())
      throw UnboundVariable("no value bound for '" + e->name + "'");
    return it->second;
  }
  default:
    break;
  }
  std::optional<double> x = eval(e->args[0], v);
  if (!x)
    return std::nullopt;
  std::optional<double> y;
  if (e->args.size() == 2) {
    y = eval(e->args[1], v);
    if (!y)
      return std::nullopt;
  }
  switch (e->kind) {
  case Expr::kAdd:
    return finite_or_inf(*x + *y);
  case Expr::kSub:
    return finite_or_inf(*x - *y);
  case Expr::kMul:
    return finite_or_inf(*x * *y);
  case Expr::kDiv:
    if (*y == 0.0)
      return std::nullopt;
    return finite_or_inf(*x / *y);
  case Expr::kNeg:
    return -*x;
  case Expr::kSqrt:
    if (*x < 0.0)
      return std::nullopt;
    return std::sqrt(*x);
  case Expr::kExp:
    return std::exp(*x);
  case Expr::kMin:
    return std::min(*x, *y);
  case Expr::kMax:
    return std::max(*x, *y);
  case Expr::kGlog:
    return finite_or_inf(glog_value(e->a, e->b, e->rate, *x));
  case Expr::kGain:
    return finite_or_inf(e->scale * *x + e->offset);
  default:
    return std::nullopt; // unreachable
  }
}

namespace {

// Interval product bound that treats 0 * inf as 0 (the standard interval
// arithmetic convention for bounds).
double mulb(double x, double y) {
  if (x == 0.0 || y == 0.0)
    return 0.0;
  return x * y;
}

std::optional<Interval> checked(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi))
    return std::nullopt;
  return Interval{lo, hi};
}

} // namespace

std::optional<Interval> interval_eval(const ExprPtr& e, const BoxValuation& box) {
  switch (e->kind) {
  case Expr::kConst:
    return Interval{e->value, e->value};
  case Expr::kInput: {
    auto it = box.find(e->name);
    if (it == box.end())
      throw UnboundVariable("no box bound for '" + e->name + "'");
    return it->second;
  }
  default:
    break;
  }
  std::optional<Interval> x = interval_eval(e->args[0], box);
  if (!x)
    return std::nullopt;
  std::optional<Interval> y;
  if (e->args.size() == 2) {
    y = interval_eval(e->args[1], box);
    if (!y)
      return std::nullopt;
  }
  switch (e->kind) {
  case Expr::kAdd:
    return checked(x->lo + y->lo, x->hi + y->hi);
  case Expr::kSub:
    return checked(x->lo - y->hi, x->hi - y->lo);
  case Expr::kMul: {
    double p[4] = {mulb(x->lo, y->lo), mulb(x->lo, y->hi), mulb(x->hi, y->lo),
                   mulb(x->hi, y->hi)};
    return checked(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
  }
  case Expr::kDiv: {
    if (y->lo <= 0.0 && y->hi >= 0.0)
      return std::nullopt; // denominator interval spans zero
    double q[4] = {x->lo / y->lo, x->lo / y->hi, x->hi / y->lo, x->hi / y->hi};
    return checked(*std::min_element(q, q + 4), *std::max_element(q, q + 4));
  }
  case Expr::kNeg:
    return Interval{-x->hi, -x->lo};
  case Expr::kSqrt:
    if (x->hi < 0.0)
      return std::nullopt;
    // the defined part of the box is clipped at zero
    return Interval{std::sqrt(std::max(x->lo, 0.0)), std::sqrt(x->hi)};
  case Expr::kExp:
    return Interval{std::exp(x->lo), std::exp(x->hi)};
  case Expr::kMin:
    return Interval{std::min(x->lo, y->lo), std::min(x->hi, y->hi)};
  case Expr::kMax:
    return Interval{std::max(x->lo, y->lo), std::max(x->hi, y->hi)};
  case Expr::kGlog: // monotone increasing in x
    return checked(glog_value(e->a, e->b, e->rate, x->lo),
                   glog_value(e->a, e->b, e->rate, x->hi));
  case Expr::kGain:
    if (e->scale >= 0)
      return checked(e->scale * x->lo + e->offset, e->scale * x->hi + e->offset);
    return checked(e->scale * x->hi + e->offset, e->scale * x->lo + e->offset);
  default:
    return std::nullopt; // unreachable
  }
}

unsigned op_count(const ExprPtr& e) {
  unsigned n = 0;
  for (const ExprPtr& c : e->args)
    n += op_count(c);
  switch (e->kind) {
  case Expr::kConst:
  case Expr::kInput:
    return n;
  case Expr::kSqrt:
  case Expr::kExp:
  case Expr::kGain:
    return n + 2; // libm result may be off by more than half an ulp
  case Expr::kGlog:
    return n + 8; // shift, scale, exp, one add, one divide, final add
  default:
    return n + 1;
  }
}

} // namespace symcomp
