#pragma once

#include <memory>
#include <string>

namespace thetafix {

/// Arithmetic expression over the variables `t` and `x`.
///
/// Grammar: numbers, `t`, `x`, `e`, `pi`, `+ - * / ^`, parentheses, `|expr|`,
/// and the functions abs, exp, log, sqrt, sin, cos, min, max. Parse failures
/// throw std::invalid_argument carrying the offending column.
class Expression {
 public:
  struct Node;

  Expression();
  static Expression parse(const std::string& text);
  static Expression constant(double v);

  double operator()(double t, double x) const;
  double operator()(double x) const { return (*this)(0.0, x); }

  const std::string& text() const { return text_; }
  bool uses_t() const;
  bool uses_x() const;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

/// Parses a constant expression such as "8/9" or "exp(-1)".
double parse_real(const std::string& text);

}  // namespace thetafix
