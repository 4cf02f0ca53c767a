#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace parastep {

/// Immutable arithmetic expression in the single real variable `t`.
///
/// Grammar, loosest to tightest binding:
///
///   expr    := term  (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          (right associative)
///   primary := number | 't' | 'pi' | ('abs' | 'log' | 'exp') '(' expr ')'
///            | '(' expr ')'
///
/// The tree is compiled to a postfix program once, so evaluation in inner
/// quadrature loops does not chase pointers.
class Expr {
 public:
  enum class Op { Const, Var, Pi, Add, Sub, Mul, Div, Pow, Neg, Abs, Log, Exp };

  struct Node {
    Op op;
    double value = 0.0;
    std::vector<std::shared_ptr<const Node>> args;
  };

  /// The constant zero.
  Expr();

  static Expr constant(double c);
  static Expr variable();
  static Expr pi();
  static Expr unary(Op op, const Expr& a);
  static Expr binary(Op op, const Expr& a, const Expr& b);

  /// Throws EvalError on division by zero, log of a non-positive number
  /// or any non-finite intermediate value.
  double operator()(double t) const;

  bool uses_variable() const noexcept { return uses_variable_; }
  const Node& root() const noexcept { return *root_; }

  /// Sub-expression `i` of the root node.
  Expr operand(std::size_t i) const;

  /// Returns this expression with `t` replaced by `-t`. Applying it twice
  /// gives back a structurally equal tree.
  Expr reflected() const;

  /// Canonical text form; `parse(str())` yields an equal tree.
  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend Expr parse(std::string_view text);

 private:
  explicit Expr(std::shared_ptr<const Node> root);

  struct Instr {
    Op op;
    double value;
  };

  std::shared_ptr<const Node> root_;
  std::vector<Instr> program_;
  bool uses_variable_ = false;
};

/// Throws SyntaxError carrying the byte offset of the first bad token.
Expr parse(std::string_view text);

inline double eval_expr(const Expr& e, double t) { return e(t); }

/// Parses and evaluates an expression that must not mention `t`.
double parse_constant(std::string_view text);

}  // namespace parastep
