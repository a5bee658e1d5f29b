#include "hamosc/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace hamosc {

struct Expr::Node {
  ExprKind kind = ExprKind::Number;
  double value = 0.0;
  Function fn = Function::Sin;
  Expr lhs;
  Expr rhs;
  bool has_t = false;
};

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

const Expr::Node& Expr::node() const {
  static const Node zero{};
  return node_ ? *node_ : zero;
}

Expr Expr::number(double value) {
  if (value == 0.0 && !std::signbit(value)) return Expr();
  auto n = std::make_shared<Node>();
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Pi;
  n->value = std::numbers::pi;
  return Expr(std::move(n));
}

Expr Expr::e() {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::E;
  n->value = std::numbers::e;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Variable;
  n->has_t = true;
  return Expr(std::move(n));
}

Expr Expr::neg(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Neg;
  n->has_t = operand.depends_on_t();
  n->lhs = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(ExprKind kind, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->has_t = lhs.depends_on_t() || rhs.depends_on_t();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::call(Function fn, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Call;
  n->fn = fn;
  n->has_t = arg.depends_on_t();
  n->lhs = std::move(arg);
  return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node().kind; }
double Expr::value() const { return node().value; }
Function Expr::function() const { return node().fn; }
const Expr& Expr::lhs() const { return node().lhs; }
const Expr& Expr::rhs() const { return node().rhs; }
bool Expr::depends_on_t() const { return node().has_t; }

bool Expr::is_number(double v) const {
  return kind() == ExprKind::Number && value() == v;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = a.node();
  const auto& y = b.node();
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Number:
      return x.value == y.value;
    case ExprKind::Pi:
    case ExprKind::E:
    case ExprKind::Variable:
      return true;
    case ExprKind::Neg:
      return x.lhs == y.lhs;
    case ExprKind::Call:
      return x.fn == y.fn && x.lhs == y.lhs;
    default:
      return x.lhs == y.lhs && x.rhs == y.rhs;
  }
}

const char* function_name(Function fn) {
  switch (fn) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Tan: return "tan";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sqrt: return "sqrt";
    case Function::Sinh: return "sinh";
    case Function::Cosh: return "cosh";
    case Function::Abs: return "abs";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

double apply_function(Function fn, double x, double t) {
  switch (fn) {
    case Function::Sin: return std::sin(x);
    case Function::Cos: return std::cos(x);
    case Function::Tan: return std::tan(x);
    case Function::Exp: return std::exp(x);
    case Function::Log:
      if (x <= 0.0) throw DomainError("log of non-positive value", t);
      return std::log(x);
    case Function::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative value", t);
      return std::sqrt(x);
    case Function::Sinh: return std::sinh(x);
    case Function::Cosh: return std::cosh(x);
    case Function::Abs: return std::abs(x);
  }
  return x;
}

double eval_node(const Expr& e, double t) {
  double r = 0.0;
  switch (e.kind()) {
    case ExprKind::Number:
    case ExprKind::Pi:
    case ExprKind::E:
      return e.value();
    case ExprKind::Variable:
      return t;
    case ExprKind::Neg:
      return -eval_node(e.lhs(), t);
    case ExprKind::Add:
      r = eval_node(e.lhs(), t) + eval_node(e.rhs(), t);
      break;
    case ExprKind::Sub:
      r = eval_node(e.lhs(), t) - eval_node(e.rhs(), t);
      break;
    case ExprKind::Mul:
      r = eval_node(e.lhs(), t) * eval_node(e.rhs(), t);
      break;
    case ExprKind::Div: {
      const double den = eval_node(e.rhs(), t);
      if (den == 0.0) throw DomainError("division by zero", t);
      r = eval_node(e.lhs(), t) / den;
      break;
    }
    case ExprKind::Pow:
      r = std::pow(eval_node(e.lhs(), t), eval_node(e.rhs(), t));
      break;
    case ExprKind::Call:
      r = apply_function(e.function(), eval_node(e.lhs(), t), t);
      break;
  }
  if (!std::isfinite(r)) throw DomainError("non-finite value", t);
  return r;
}

}  // namespace

double eval_expr(const Expr& e, double t) { return eval_node(e, t); }

// ---------------------------------------------------------------------------
// folding builders

namespace {

bool is_literal(const Expr& e) { return e.kind() == ExprKind::Number; }

Expr fold_or(double v, Expr fallback) {
  return std::isfinite(v) ? Expr::number(v) : std::move(fallback);
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  if (is_literal(a) && is_literal(b))
    return fold_or(a.value() + b.value(), Expr::binary(ExprKind::Add, a, b));
  return Expr::binary(ExprKind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return -b;
  if (is_literal(a) && is_literal(b))
    return fold_or(a.value() - b.value(), Expr::binary(ExprKind::Sub, a, b));
  return Expr::binary(ExprKind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_number(0.0) || b.is_number(0.0)) return Expr();
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return -b;
  if (b.is_number(-1.0)) return -a;
  if (is_literal(a) && is_literal(b))
    return fold_or(a.value() * b.value(), Expr::binary(ExprKind::Mul, a, b));
  return Expr::binary(ExprKind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_number(1.0)) return a;
  if (a.is_number(0.0) && is_literal(b) && b.value() != 0.0) return Expr();
  if (is_literal(a) && is_literal(b) && b.value() != 0.0)
    return fold_or(a.value() / b.value(), Expr::binary(ExprKind::Div, a, b));
  return Expr::binary(ExprKind::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (is_literal(a)) return Expr::number(a.value() == 0.0 ? 0.0 : -a.value());
  if (a.kind() == ExprKind::Neg) return a.lhs();
  return Expr::neg(a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_number(0.0)) return Expr::number(1.0);
  if (exponent.is_number(1.0)) return base;
  if (is_literal(base) && is_literal(exponent))
    return fold_or(std::pow(base.value(), exponent.value()),
                   Expr::binary(ExprKind::Pow, base, exponent));
  return Expr::binary(ExprKind::Pow, base, exponent);
}

Expr apply(Function fn, const Expr& arg) {
  if (is_literal(arg)) {
    try {
      return fold_or(apply_function(fn, arg.value(), 0.0), Expr::call(fn, arg));
    } catch (const DomainError&) {
      return Expr::call(fn, arg);
    }
  }
  return Expr::call(fn, arg);
}

// ---------------------------------------------------------------------------
// differentiation

Expr diff_expr(const Expr& e) {
  if (!e.depends_on_t()) return Expr();
  const Expr& a = e.lhs();
  const Expr& b = e.rhs();
  switch (e.kind()) {
    case ExprKind::Variable:
      return Expr::number(1.0);
    case ExprKind::Neg:
      return -diff_expr(a);
    case ExprKind::Add:
      return diff_expr(a) + diff_expr(b);
    case ExprKind::Sub:
      return diff_expr(a) - diff_expr(b);
    case ExprKind::Mul:
      return diff_expr(a) * b + a * diff_expr(b);
    case ExprKind::Div:
      if (!b.depends_on_t()) return diff_expr(a) / b;
      return (diff_expr(a) * b - a * diff_expr(b)) / pow(b, Expr::number(2.0));
    case ExprKind::Pow:
      if (!b.depends_on_t()) {
        return b * pow(a, b - Expr::number(1.0)) * diff_expr(a);
      }
      // d(a^b) = a^b (b' log a + b a' / a)
      return e * (diff_expr(b) * apply(Function::Log, a) +
                  b * diff_expr(a) / a);
    case ExprKind::Call: {
      const Expr da = diff_expr(a);
      switch (e.function()) {
        case Function::Sin:
          return apply(Function::Cos, a) * da;
        case Function::Cos:
          return -(apply(Function::Sin, a) * da);
        case Function::Tan:
          return da / pow(apply(Function::Cos, a), Expr::number(2.0));
        case Function::Exp:
          return e * da;
        case Function::Log:
          return da / a;
        case Function::Sqrt:
          return da / (Expr::number(2.0) * e);
        case Function::Sinh:
          return apply(Function::Cosh, a) * da;
        case Function::Cosh:
          return apply(Function::Sinh, a) * da;
        case Function::Abs:
          return da * a / e;
      }
      break;
    }
    default:
      break;
  }
  return Expr();
}

// ---------------------------------------------------------------------------
// printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Neg:
      return 3;
    case ExprKind::Pow:
      return 4;
    case ExprKind::Number:
      return e.value() < 0.0 || std::signbit(e.value()) ? 3 : 5;
    default:
      return 5;
  }
}

void print_into(const Expr& e, int min_prec, std::string& out) {
  const bool parens = precedence(e) < min_prec;
  if (parens) out += '(';
  switch (e.kind()) {
    case ExprKind::Number:
      if (std::signbit(e.value())) {
        out += '-';
        out += fmt::format("{}", -e.value());
      } else {
        out += fmt::format("{}", e.value());
      }
      break;
    case ExprKind::Pi:
      out += "pi";
      break;
    case ExprKind::E:
      out += "e";
      break;
    case ExprKind::Variable:
      out += 't';
      break;
    case ExprKind::Neg:
      out += '-';
      print_into(e.lhs(), 3, out);
      break;
    case ExprKind::Add:
    case ExprKind::Sub:
      print_into(e.lhs(), 1, out);
      out += e.kind() == ExprKind::Add ? " + " : " - ";
      print_into(e.rhs(), 2, out);
      break;
    case ExprKind::Mul:
    case ExprKind::Div:
      print_into(e.lhs(), 2, out);
      out += e.kind() == ExprKind::Mul ? "*" : "/";
      print_into(e.rhs(), 3, out);
      break;
    case ExprKind::Pow:
      print_into(e.lhs(), 5, out);
      out += '^';
      print_into(e.rhs(), 4, out);
      break;
    case ExprKind::Call:
      out += function_name(e.function());
      out += '(';
      print_into(e.lhs(), 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::string out;
  print_into(e, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = expression();
    skip_ws();
    if (pos_ < src_.size()) {
      throw SyntaxError(pos_, "operator or end of input");
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(ExprKind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(ExprKind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(ExprKind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::binary(ExprKind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) {
      Expr operand = unary();
      // A negated literal is stored as a negative literal.
      if (operand.kind() == ExprKind::Number) return Expr::number(-operand.value());
      return Expr::neg(operand);
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      // Right associative; the exponent may carry its own sign.
      return Expr::binary(ExprKind::Pow, base, unary());
    }
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw SyntaxError(pos_, "number, identifier or '('");
    }
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expression();
      if (!accept(')')) throw SyntaxError(pos_, "')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(pos_, "number, identifier or '('");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      // Only an exponent when digits follow; otherwise leave `e` alone.
      std::size_t k = pos_ + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
        pos_ = k;
        digits();
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      throw SyntaxError(start, "number");
    }
    return Expr::number(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t") return Expr::variable();
    if (name == "pi") return Expr::pi();
    if (name == "e") return Expr::e();
    static constexpr Function kFunctions[] = {
        Function::Sin,  Function::Cos,  Function::Tan,
        Function::Exp,  Function::Log,  Function::Sqrt,
        Function::Sinh, Function::Cosh, Function::Abs};
    for (Function fn : kFunctions) {
      if (name == function_name(fn)) {
        if (!accept('(')) throw SyntaxError(pos_, "'('");
        Expr arg = expression();
        if (!accept(')')) throw SyntaxError(pos_, "')'");
        return Expr::call(fn, arg);
      }
    }
    throw UnknownIdentifier(std::string(name), start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view source) { return Parser(source).parse(); }

}  // namespace hamosc
