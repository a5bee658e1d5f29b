#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "hamosc/error.hpp"

namespace hamosc {

enum class ExprKind { Number, Pi, E, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Abs };

/// Immutable expression tree in the single variable `t`.
///
/// Grammar: decimal literals, `pi`, `e`, `t`, unary minus, binary
/// `+ - * / ^` and the functions sin cos tan exp log sqrt sinh cosh abs.
/// Precedence from tightest: `^` (right associative), unary minus, `* /`,
/// `+ -`. Copies share structure.
class Expr {
 public:
  /// The literal 0.
  Expr() = default;

  static Expr number(double value);
  static Expr pi();
  static Expr e();
  static Expr variable();
  static Expr neg(Expr operand);
  static Expr binary(ExprKind kind, Expr lhs, Expr rhs);
  static Expr call(Function fn, Expr arg);

  ExprKind kind() const;
  /// Literal value; only meaningful for ExprKind::Number.
  double value() const;
  Function function() const;
  /// Operand of Neg / Call, left operand of binary nodes.
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool depends_on_t() const;
  bool is_number(double v) const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  const Node& node() const;
  // Null means the literal 0.
  std::shared_ptr<const Node> node_;
};

// Builders with light constant folding (0 + x, 1 * x, numeric literals).
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr apply(Function fn, const Expr& arg);

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected)
      : Error("syntax error at offset " + std::to_string(position) +
              ": expected " + expected),
        position_(position),
        expected_(std::move(expected)) {}
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::string name, std::size_t position)
      : Error("unknown identifier '" + name + "' at offset " +
              std::to_string(position)),
        name_(std::move(name)),
        position_(position) {}
  const std::string& name() const { return name_; }
  std::size_t position() const { return position_; }

 private:
  std::string name_;
  std::size_t position_;
};

Expr parse_expr(std::string_view source);

/// Throws DomainError for log/sqrt outside their domain, division by zero,
/// or any non-finite result.
double eval_expr(const Expr& e, double t);

/// Symbolic d/dt.
Expr diff_expr(const Expr& e);

/// Text that parses back to an equal tree.
std::string print_expr(const Expr& e);

const char* function_name(Function fn);

}  // namespace hamosc
