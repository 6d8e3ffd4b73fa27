#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace framelift {

// Truncated bivariate Taylor expansion of a scalar field in (x1, x2).
//
// Coefficients are stored Taylor-scaled, t(a, b) = d1^a d2^b f / (a! b!), in a
// zero-padded row-major block with row stride kStride so that the product
// kernels can treat a jet as a flat array. Every slot with a + b > order() or
// b > kMaxOrder is zero.
class Jet {
 public:
  static constexpr int kMaxOrder = 4;
  static constexpr int kRows = kMaxOrder + 1;
  static constexpr int kStride = 9;
  static constexpr int kStorage = 48;  // kRows * kStride rounded up to whole AVX2 lanes
  using Storage = std::array<double, kStorage>;

  Jet() = default;

  static Jet constant(double value, int order);
  // The coordinate function x_{index}, index in {1, 2}.
  static Jet variable(int index, double value, int order);
  // Builds a jet from raw partial derivatives listed as d(0,0), d(1,0), d(0,1),
  // d(2,0), d(1,1), d(0,2), ... (graded, x1-major within a degree).
  static Jet from_partials(std::span<const double> partials, int order);

  int order() const noexcept { return order_; }
  // Number of stored coefficients, (order + 1)(order + 2) / 2.
  std::size_t size() const noexcept;

  double value() const noexcept { return t_[0]; }
  // Raw partial derivative d1^a d2^b f at the expansion point.
  double partial(int a, int b) const;
  double taylor(int a, int b) const;
  void set_taylor(int a, int b, double v);

  Jet truncated(int order) const;
  // d/dx_{index} of the field, one order lower.
  Jet derivative(int index) const;
  bool all_finite() const noexcept;

  const Storage& storage() const noexcept { return t_; }
  Storage& storage() noexcept { return t_; }

  Jet operator-() const;
  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s);
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, double s);

  static constexpr int index(int a, int b) { return a * kStride + b; }

 private:
  alignas(32) Storage t_{};
  int order_ = 0;
};

// Composes a univariate function with a jet given the function's derivatives
// f(u0), f'(u0), ..., f^(order)(u0) at u0 = u.value().
Jet compose(const Jet& u, std::span<const double> derivatives);

Jet reciprocal(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sqrt(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet tan(const Jet& u);
Jet sinh(const Jet& u);
Jet cosh(const Jet& u);
Jet tanh(const Jet& u);
Jet atan(const Jet& u);
Jet pow(const Jet& u, int exponent);

}  // namespace framelift
