#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "spin2d/jet.hpp"

namespace spin2d {

// Scalar expression in the variables x and y with complex constants.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'i' | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
//
// `^` binds tighter than unary minus and is right associative, so "-x^2"
// is -(x^2) and "2^3^2" is 512.
class Expr {
 public:
  enum class Kind { Number, ImagUnit, VarX, VarY, Add, Sub, Mul, Div, Pow, Neg, Call };
  enum class Func { Sin, Cos, Sinh, Cosh, Exp, Ln, Sqrt };

  struct Node {
    Kind kind;
    double number = 0.0;
    Func func = Func::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  // Throws ParseError with the byte offset of the failure.
  static Expr parse(std::string_view source);
  static Expr constant(Complex c);

  bool empty() const noexcept { return root_ == nullptr; }
  const Node& root() const { return *root_; }

  // Fully parenthesized text that parses back to the same tree.
  std::string to_string() const;

  // Taylor jet of the expression at `base`. Throws DomainError naming the
  // offending subexpression.
  Jet eval_jet(Complex base_x, Complex base_y, int order) const;
  Complex eval(Complex x, Complex y) const { return eval_jet(x, y, 0).value(); }

  bool depends_on(Axis axis) const;
  bool structurally_equal(const Expr& other) const;

 private:
  std::shared_ptr<const Node> root_;
};

const char* func_name(Expr::Func f);

}  // namespace spin2d
