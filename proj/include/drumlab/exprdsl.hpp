#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "drumlab/errors.hpp"

namespace drumlab {

enum class ExprKind { number, variable, negate, binary, call };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Builtin { sin, cos, exp, sqrt, abs };

/// `u`/`x` bind to the first coordinate of an evaluation point, `v`/`y` to
/// the second, so the same expression works in target (u,v) and reference
/// (x,y) coordinates.
enum class VarName { u, v, x, y };

struct Expr {
  ExprKind kind{};
  double number = 0.0;           // kind == number
  VarName var{};                 // kind == variable
  BinaryOp op{};                 // kind == binary
  Builtin fn{};                  // kind == call
  std::shared_ptr<const Expr> lhs;  // binary lhs; negate/call operand
  std::shared_ptr<const Expr> rhs;  // binary rhs
};

/// Immutable density expression rho(u,v) / sigma(x,y). Parsing builds the
/// AST once; evaluation is pure and safe to call from many threads.
class DensityExpr {
 public:
  DensityExpr() = default;  // constant 1

  /// Grammar:
  ///   expr   := term (("+"|"-") term)*
  ///   term   := factor (("*"|"/") factor)*
  ///   factor := ("-")? power
  ///   power  := atom ("^" factor)?
  ///   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
  /// IDENT in {u,v,x,y,pi,sin,cos,exp,sqrt,abs}; whitespace insignificant.
  static DensityExpr parse(std::string_view text);

  /// Evaluate with u/x bound to coords[0] and v/y bound to coords[1] when
  /// present. Referencing a variable the point does not supply is an
  /// EvalError, as are division by zero, sqrt of a negative value and any
  /// operation producing NaN.
  double eval(std::span<const double> coords) const;
  double eval(double u, double v) const;

  /// Minimal-parenthesis rendering; parsing it back yields a structurally
  /// identical AST.
  std::string str() const;

  const Expr& root() const { return *root_; }

  static DensityExpr from_ast(std::shared_ptr<const Expr> root);

 private:
  std::shared_ptr<const Expr> root_;
};

}  // namespace drumlab
