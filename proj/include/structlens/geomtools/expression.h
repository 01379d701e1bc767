#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace structlens::geom {

// Arithmetic expression tree for the numeric computation tool.
struct Expr {
  enum class Kind { number, pi, neg, add, sub, mul, div, pow, call };

  Kind kind = Kind::number;
  double value = 0.0;      // number
  std::string name;        // call
  std::vector<Expr> args;  // operands

  friend bool operator==(const Expr&, const Expr&) = default;
};

// Grammar: + - * / ^ (also ** and the signs x-times, obelus and minus),
// parentheses, unary minus, sqrt sin cos tan atan2 abs radians degrees, pi.
// '^' is right-associative and binds tighter than unary minus, so -2^2 = -4.
// Throws ParseError with the byte offset of the problem.
Expr parse_expression(std::string_view text);

// Throws MathDomain for sqrt of a negative, division by zero and any
// non-finite intermediate.
double evaluate(const Expr& e);

// Fully parenthesised form that parses back to an identical tree.
std::string to_string(const Expr& e);

double eval_expression(std::string_view text);

}  // namespace structlens::geom
