#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "framelift/expr.hpp"

namespace framelift::expr {
namespace {

constexpr std::array<std::pair<std::string_view, Function>, 10> kFunctions = {{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"exp", Function::exp},
    {"log", Function::log},
    {"sqrt", Function::sqrt},
    {"sinh", Function::sinh},
    {"cosh", Function::cosh},
    {"tanh", Function::tanh},
    {"atan", Function::atan},
}};

int child_depth(const NodePtr& n) { return n ? n->depth : 0; }

template <class T>
NodePtr make(T value) {
  int depth = 1;
  if constexpr (std::is_same_v<T, Negate>) {
    depth += child_depth(value.operand);
  } else if constexpr (std::is_same_v<T, Binary>) {
    depth += std::max(child_depth(value.lhs), child_depth(value.rhs));
  } else if constexpr (std::is_same_v<T, Call>) {
    depth += child_depth(value.argument);
  }
  return std::make_shared<const Node>(Node{std::move(value), depth});
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError(pos_, "expected expression, found end of input");
    NodePtr root = parse_sum();
    skip_space();
    if (pos_ < src_.size()) throw ParseError(pos_, std::string("expected operator or end of input, found '") + src_[pos_] + "'");
    return root;
  }

 private:
  NodePtr checked(NodePtr n, std::size_t at) const {
    if (n->depth > kMaxExprDepth) throw ParseError(at, "expression nested too deeply");
    return n;
  }

  // Bounds recursion of the descent itself (parentheses, unary minus chains).
  struct Nesting {
    Parser& p;
    explicit Nesting(Parser& parser, std::size_t at) : p(parser) {
      if (++p.nesting_ > kMaxExprDepth) throw ParseError(at, "expression nested too deeply");
    }
    ~Nesting() { --p.nesting_; }
  };

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(pos_, std::string("expected '") + c + "', found end of input");
      throw ParseError(pos_, std::string("expected '") + c + "', found '" + src_[pos_] + "'");
    }
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = checked(make(Binary{BinaryOp::add, lhs, parse_product()}), pos_);
      } else if (accept('-')) {
        lhs = checked(make(Binary{BinaryOp::sub, lhs, parse_product()}), pos_);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = checked(make(Binary{BinaryOp::mul, lhs, parse_unary()}), pos_);
      } else if (accept('/')) {
        lhs = checked(make(Binary{BinaryOp::div, lhs, parse_unary()}), pos_);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    Nesting guard(*this, pos_);
    if (accept('-')) return checked(make(Negate{parse_unary()}), pos_);
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return checked(make(Binary{BinaryOp::pow, base, parse_unary()}), pos_);
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError(pos_, "expected operand, found end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(pos_, std::string("expected operand, found '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      // Only an exponent if digits follow; otherwise "2e" is 2 followed by the constant e.
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double value = 0.0;
    const auto text = src_.substr(start, pos_ - start);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
      throw ParseError(start, "number out of range: " + std::string(text));
    }
    return make(Number{value});
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x1") return make(Variable{1});
    if (name == "x2") return make(Variable{2});
    if (name == "pi") return make(Constant{NamedConstant::pi});
    if (name == "e") return make(Constant{NamedConstant::e});
    for (const auto& [fname, f] : kFunctions) {
      if (name == fname) {
        expect('(');
        NodePtr arg = parse_sum();
        expect(')');
        return checked(make(Call{f, arg}), pos_);
      }
    }
    throw UnknownIdentifier(start, std::string(name));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int nesting_ = 0;
};

void print(const Node& n, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Number>) {
          std::array<char, 32> buf{};
          auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v.value);
          (void)ec;
          out.append(buf.data(), end);
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += v.index == 1 ? "x1" : "x2";
        } else if constexpr (std::is_same_v<T, Constant>) {
          out += v.which == NamedConstant::pi ? "pi" : "e";
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += "(-";
          print(*v.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Binary>) {
          static constexpr std::array<char, 5> kOps = {'+', '-', '*', '/', '^'};
          out += '(';
          print(*v.lhs, out);
          out += ' ';
          out += kOps[static_cast<int>(v.op)];
          out += ' ';
          print(*v.rhs, out);
          out += ')';
        } else {
          out += function_name(v.function);
          out += '(';
          print(*v.argument, out);
          out += ')';
        }
      },
      n.value);
}

bool same(const Node& a, const Node& b) {
  if (a.value.index() != b.value.index()) return false;
  return std::visit(
      [&](const auto& va) {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b.value);
        if constexpr (std::is_same_v<T, Number>) {
          return va.value == vb.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return va.index == vb.index;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return va.which == vb.which;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return same(*va.operand, *vb.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return va.op == vb.op && same(*va.lhs, *vb.lhs) && same(*va.rhs, *vb.rhs);
        } else {
          return va.function == vb.function && same(*va.argument, *vb.argument);
        }
      },
      a.value);
}

}  // namespace

bool depends_on_coordinates(const Node& n) {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return depends_on_coordinates(*v.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return depends_on_coordinates(*v.lhs) || depends_on_coordinates(*v.rhs);
        } else if constexpr (std::is_same_v<T, Call>) {
          return depends_on_coordinates(*v.argument);
        } else {
          return false;
        }
      },
      n.value);
}

Expr::Expr(NodePtr root) : root_(std::move(root)) {
  if (!root_) throw InvalidArgument("expression root must not be null");
}

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool Expr::uses_variables() const { return depends_on_coordinates(*root_); }

bool operator==(const Expr& a, const Expr& b) { return same(*a.root_, *b.root_); }

Expr parse(std::string_view source) { return Expr(Parser(source).parse_all()); }

std::string_view function_name(Function f) noexcept {
  for (const auto& [name, fn] : kFunctions) {
    if (fn == f) return name;
  }
  return "?";
}

}  // namespace framelift::expr
