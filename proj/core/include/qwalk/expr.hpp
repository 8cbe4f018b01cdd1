#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qwalk {

/// A parsed arithmetic expression over named variables.
///
/// Grammar: numbers, identifiers, + - * / ^ (right-assoc power), unary minus,
/// parentheses, and the functions ln, log, exp, sqrt, abs, floor, min, max,
/// pow. This is the restricted language used for coefficient fields
/// (variables i, j, n) and rate ratios (variable n) in config files.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double evaluate(const std::map<std::string, double>& vars) const;

  const std::string& text() const { return text_; }

 private:
  struct Node;
  Expression() = default;

  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace qwalk
