#include "qwalk/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>

#include "qwalk/errors.hpp"

namespace qwalk {

struct Expression::Node {
  enum class Kind { Number, Variable, Unary, Binary, Call };
  Kind kind;
  double number = 0.0;
  std::string name;                                   // Variable | Call
  char op = 0;                                        // Unary | Binary
  std::vector<std::shared_ptr<const Node>> children;  // operands / arguments
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected trailing input");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression error at position " + std::to_string(pos_) +
                     " in \"" + text_ + "\": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (consume('+')) {
        lhs = make_binary('+', lhs, parse_product());
      } else if (consume('-')) {
        lhs = make_binary('-', lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (consume('*')) {
        lhs = make_binary('*', lhs, parse_unary());
      } else if (consume('/')) {
        lhs = make_binary('/', lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) {
      auto node = std::make_shared<Expression::Node>();
      node->kind = Expression::Node::Kind::Unary;
      node->op = '-';
      node->children.push_back(parse_unary());
      return node;
    }
    (void)consume('+');
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (consume('^')) {
      // Right-associative.
      return make_binary('^', base, parse_unary());
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) {
      fail("unexpected end of input");
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_identifier();
    }
    if (consume('(')) {
      NodePtr e = parse_sum();
      if (!consume(')')) {
        fail("expected ')'");
      }
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) {
      fail("malformed number");
    }
    pos_ += static_cast<std::size_t>(end - begin);
    auto node = std::make_shared<Expression::Node>();
    node->kind = Expression::Node::Kind::Number;
    node->number = value;
    return node;
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name = text_.substr(start, pos_ - start);
    if (peek() == '(') {
      consume('(');
      auto node = std::make_shared<Expression::Node>();
      node->kind = Expression::Node::Kind::Call;
      node->name = name;
      if (!consume(')')) {
        node->children.push_back(parse_sum());
        while (consume(',')) {
          node->children.push_back(parse_sum());
        }
        if (!consume(')')) {
          fail("expected ')' after arguments of " + name);
        }
      }
      return node;
    }
    auto node = std::make_shared<Expression::Node>();
    node->kind = Expression::Node::Kind::Variable;
    node->name = name;
    return node;
  }

  static NodePtr make_binary(char op, NodePtr lhs, NodePtr rhs) {
    auto node = std::make_shared<Expression::Node>();
    node->kind = Expression::Node::Kind::Binary;
    node->op = op;
    node->children = {std::move(lhs), std::move(rhs)};
    return node;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

double eval_node(const Expression::Node& node,
                 const std::map<std::string, double>& vars) {
  using Kind = Expression::Node::Kind;
  switch (node.kind) {
    case Kind::Number:
      return node.number;
    case Kind::Variable: {
      auto it = vars.find(node.name);
      if (it == vars.end()) {
        throw ParseError("unknown variable '" + node.name + "' in expression");
      }
      return it->second;
    }
    case Kind::Unary:
      return -eval_node(*node.children[0], vars);
    case Kind::Binary: {
      const double a = eval_node(*node.children[0], vars);
      const double b = eval_node(*node.children[1], vars);
      switch (node.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      throw ParseError("corrupt expression node");
    }
    case Kind::Call: {
      auto arity = [&](std::size_t n) {
        if (node.children.size() != n) {
          throw ParseError("function " + node.name + " expects " +
                           std::to_string(n) + " argument(s)");
        }
      };
      auto arg = [&](std::size_t k) { return eval_node(*node.children[k], vars); };
      if (node.name == "ln" || node.name == "log") {
        arity(1);
        return std::log(arg(0));
      }
      if (node.name == "exp") { arity(1); return std::exp(arg(0)); }
      if (node.name == "sqrt") { arity(1); return std::sqrt(arg(0)); }
      if (node.name == "abs") { arity(1); return std::fabs(arg(0)); }
      if (node.name == "floor") { arity(1); return std::floor(arg(0)); }
      if (node.name == "pow") { arity(2); return std::pow(arg(0), arg(1)); }
      if (node.name == "min") { arity(2); return std::min(arg(0), arg(1)); }
      if (node.name == "max") { arity(2); return std::max(arg(0), arg(1)); }
      throw ParseError("unknown function '" + node.name + "'");
    }
  }
  throw ParseError("corrupt expression tree");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

double Expression::evaluate(const std::map<std::string, double>& vars) const {
  if (!root_) {
    throw ParseError("evaluating an empty expression");
  }
  return eval_node(*root_, vars);
}

}  // namespace qwalk
