#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "setcalc/errors.hpp"
#include "setcalc/rational.hpp"

namespace setcalc {

/// Parsed arithmetic expression over named variables: +, -, *, /, ^ with
/// integer exponents, parentheses, unary minus, and one-argument calls to
/// exp, log, sin, cos, abs, sqrt. Evaluates in doubles or (arithmetic-only
/// operators plus abs) in exact rationals.
class Expr {
 public:
  static Expr parse(const std::string& text);

  double eval(const std::unordered_map<std::string, double>& vars) const;
  Rational eval_exact(const std::unordered_map<std::string, Rational>& vars) const;

  /// Variable names referenced, sorted, deduplicated.
  std::vector<std::string> variables() const;

  const std::string& text() const { return text_; }

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

 private:
  NodePtr root_;
  std::string text_;
};

}  // namespace setcalc
