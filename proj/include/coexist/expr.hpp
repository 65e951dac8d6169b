#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace coexist {

// Arithmetic expressions over named variables with the usual operators
// (+ - * / ^, comparisons) and the functions exp, sqrt, sin, abs, pow, min,
// max and piecewise(c1, v1, ..., [else]).  Comparisons yield 1 or 0.
class Expr {
public:
  struct Node;

  static Expr parse(const std::string& text, const std::vector<std::string>& variables);

  double eval(const double* values) const;
  double eval(const std::vector<double>& values) const { return eval(values.data()); }
  const std::string& text() const { return text_; }

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

struct ExprError : std::runtime_error {
  explicit ExprError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace coexist
