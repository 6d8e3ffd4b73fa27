#include <cmath>
#include <numbers>
#include <string>

#include "framelift/expr.hpp"

namespace framelift::expr {
namespace {

constexpr int kMaxRepeatedPower = 64;

struct Evaluator {
  Point at;
  int order;

  Jet operator()(const Node& n) const {
    return std::visit([&](const auto& v) { return eval(v); }, n.value);
  }

  Jet eval(const Number& v) const { return Jet::constant(v.value, order); }
  Jet eval(const Variable& v) const { return Jet::variable(v.index, v.index == 1 ? at.x1 : at.x2, order); }
  Jet eval(const Constant& v) const {
    return Jet::constant(v.which == NamedConstant::pi ? std::numbers::pi : std::numbers::e, order);
  }
  Jet eval(const Negate& v) const { return -(*this)(*v.operand); }

  Jet eval(const Binary& v) const {
    if (v.op == BinaryOp::pow) return power(v);
    const Jet lhs = (*this)(*v.lhs);
    const Jet rhs = (*this)(*v.rhs);
    switch (v.op) {
      case BinaryOp::add: return lhs + rhs;
      case BinaryOp::sub: return lhs - rhs;
      case BinaryOp::mul: return lhs * rhs;
      case BinaryOp::div: return lhs / rhs;
      case BinaryOp::pow: break;
    }
    throw InvalidArgument("unhandled operator");
  }

  // Constant integer exponents up to kMaxRepeatedPower in magnitude use repeated
  // multiplication (valid for any base sign); everything else is exp(b log a).
  Jet power(const Binary& v) const {
    const Jet base = (*this)(*v.lhs);
    if (!depends_on_coordinates(*v.rhs)) {
      const double k = Evaluator{at, 0}(*v.rhs).value();
      if (std::isfinite(k) && k == std::round(k) && std::abs(k) <= kMaxRepeatedPower) {
        return pow(base, static_cast<int>(k));
      }
    }
    return exp((*this)(*v.rhs) * log(base));
  }

  Jet eval(const Call& v) const {
    const Jet arg = (*this)(*v.argument);
    switch (v.function) {
      case Function::sin: return sin(arg);
      case Function::cos: return cos(arg);
      case Function::tan: return tan(arg);
      case Function::exp: return exp(arg);
      case Function::log: return log(arg);
      case Function::sqrt: return sqrt(arg);
      case Function::sinh: return sinh(arg);
      case Function::cosh: return cosh(arg);
      case Function::tanh: return tanh(arg);
      case Function::atan: return atan(arg);
    }
    throw InvalidArgument("unhandled function");
  }
};

}  // namespace

Jet eval_jet(const Expr& e, Point at, int order) {
  if (order < 0 || order > Jet::kMaxOrder) {
    throw InvalidArgument("jet order must lie in 0..4, got " + std::to_string(order));
  }
  try {
    Jet result = Evaluator{at, order}(e.root());
    if (!result.all_finite()) throw DomainError("expression is not finite at the evaluation point");
    return result;
  } catch (const DomainError& err) {
    if (err.where()) throw;
    throw DomainError(std::string(err.what()) + " at " + format_point(at), at);
  }
}

double eval(const Expr& e, Point at) { return eval_jet(e, at, 0).value(); }

}  // namespace framelift::expr
