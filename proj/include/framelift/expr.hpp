#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "framelift/error.hpp"
#include "framelift/jet.hpp"

namespace framelift::expr {

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, tan, exp, log, sqrt, sinh, cosh, tanh, atan };
enum class NamedConstant { pi, e };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Variable {
  int index;  // 1 or 2
};
struct Constant {
  NamedConstant which;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Function function;
  NodePtr argument;
};

struct Node {
  std::variant<Number, Variable, Constant, Negate, Binary, Call> value;
  int depth = 1;
};

// Deeper trees are rejected by parse() so that evaluation recursion stays bounded.
inline constexpr int kMaxExprDepth = 256;

// Immutable expression tree over the chart coordinates x1, x2.
class Expr {
 public:
  explicit Expr(NodePtr root);

  const Node& root() const noexcept { return *root_; }
  NodePtr root_ptr() const noexcept { return root_; }

  // Fully parenthesised text that parses back to the same tree.
  std::string to_string() const;
  bool uses_variables() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

// Grammar, loosest to tightest: + -, then * /, then unary minus, then ^ (right
// associative, exponent may carry its own unary minus), then literals,
// x1, x2, pi, e, f(expr) and parentheses. Whitespace is ignored.
// Throws ParseError (with byte offset) or UnknownIdentifier.
Expr parse(std::string_view source);

// Exact partial derivatives of `e` at `at` up to `order` (<= 4) by jet
// arithmetic. Throws DomainError when the point is outside the expression's
// real domain and InvalidArgument for an order outside 0..4.
Jet eval_jet(const Expr& e, Point at, int order);
double eval(const Expr& e, Point at);

std::string_view function_name(Function f) noexcept;
bool depends_on_coordinates(const Node& n);

}  // namespace framelift::expr
