#include "framelift/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "framelift/error.hpp"
#include "framelift/simd/jet_kernels.hpp"

namespace framelift {
namespace {

constexpr std::array<double, 5> kFactorial = {1.0, 1.0, 2.0, 6.0, 24.0};

void check_order(int order) {
  if (order < 0 || order > Jet::kMaxOrder) {
    throw InvalidArgument("jet order must lie in 0.." + std::to_string(Jet::kMaxOrder) + ", got " +
                          std::to_string(order));
  }
}

void check_finite(const Jet& j, const char* what) {
  if (!j.all_finite()) throw DomainError(std::string("non-finite jet coefficient in ") + what);
}

}  // namespace

std::size_t Jet::size() const noexcept {
  return static_cast<std::size_t>((order_ + 1) * (order_ + 2) / 2);
}

Jet Jet::constant(double value, int order) {
  check_order(order);
  Jet j;
  j.order_ = order;
  j.t_[0] = value;
  return j;
}

Jet Jet::variable(int which, double value, int order) {
  if (which != 1 && which != 2) throw InvalidArgument("jet variable index must be 1 or 2");
  Jet j = constant(value, order);
  if (order >= 1) j.t_[which == 1 ? index(1, 0) : index(0, 1)] = 1.0;
  return j;
}

Jet Jet::from_partials(std::span<const double> partials, int order) {
  check_order(order);
  Jet j;
  j.order_ = order;
  std::size_t k = 0;
  for (int d = 0; d <= order; ++d) {
    for (int a = d; a >= 0; --a) {
      const int b = d - a;
      if (k >= partials.size()) throw InvalidArgument("too few partial derivatives for jet order");
      j.t_[index(a, b)] = partials[k++] / (kFactorial[a] * kFactorial[b]);
    }
  }
  if (k != partials.size()) throw InvalidArgument("too many partial derivatives for jet order");
  return j;
}

double Jet::partial(int a, int b) const { return taylor(a, b) * kFactorial[a] * kFactorial[b]; }

double Jet::taylor(int a, int b) const {
  if (a < 0 || b < 0 || a + b > order_) {
    throw InvalidArgument("partial (" + std::to_string(a) + "," + std::to_string(b) + ") exceeds jet order " +
                          std::to_string(order_));
  }
  return t_[index(a, b)];
}

void Jet::set_taylor(int a, int b, double v) {
  if (a < 0 || b < 0 || a + b > order_) throw InvalidArgument("coefficient index exceeds jet order");
  t_[index(a, b)] = v;
}

Jet Jet::truncated(int order) const {
  check_order(order);
  if (order >= order_) return *this;
  Jet j = *this;
  j.order_ = order;
  for (int a = 0; a <= order_; ++a) {
    for (int b = std::max(0, order + 1 - a); a + b <= order_; ++b) j.t_[index(a, b)] = 0.0;
  }
  return j;
}

Jet Jet::derivative(int which) const {
  if (which != 1 && which != 2) throw InvalidArgument("jet variable index must be 1 or 2");
  if (order_ == 0) throw InvalidArgument("cannot differentiate an order-0 jet");
  Jet j;
  j.order_ = order_ - 1;
  for (int a = 0; a <= j.order_; ++a) {
    for (int b = 0; a + b <= j.order_; ++b) {
      j.t_[index(a, b)] = which == 1 ? (a + 1) * t_[index(a + 1, b)] : (b + 1) * t_[index(a, b + 1)];
    }
  }
  return j;
}

bool Jet::all_finite() const noexcept {
  return std::all_of(t_.begin(), t_.end(), [](double v) { return std::isfinite(v); });
}

Jet Jet::operator-() const {
  Jet j = *this;
  for (double& v : j.t_) v = -v;
  return j;
}

Jet& Jet::operator+=(const Jet& other) {
  if (other.order_ < order_) *this = truncated(other.order_);
  Jet narrowed;
  const Jet* rhs = &other;
  if (other.order_ > order_) {
    narrowed = other.truncated(order_);
    rhs = &narrowed;
  }
  for (int k = 0; k < kStorage; ++k) t_[k] += rhs->t_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) { return *this += -other; }

Jet& Jet::operator*=(double s) {
  for (double& v : t_) v *= s;
  return *this;
}

Jet operator+(Jet a, double s) {
  a.t_[0] += s;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet out;
  out.order_ = std::min(a.order_, b.order_);
  simd::jet_mul_kernel()(a.t_.data(), b.t_.data(), out.t_.data(), out.order_);
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator/(const Jet& a, double s) {
  if (s == 0.0) throw DomainError("division by zero");
  return a * (1.0 / s);
}

Jet compose(const Jet& u, std::span<const double> derivatives) {
  const int n = u.order();
  if (derivatives.size() < static_cast<std::size_t>(n + 1)) {
    throw InvalidArgument("composition needs derivatives up to the jet order");
  }
  // f(u0 + h) = sum_k f^(k)(u0) h^k / k!, where h has no constant term and so
  // h^k vanishes beyond the truncation order.
  Jet h = u;
  h.storage()[0] = 0.0;
  Jet result = Jet::constant(derivatives[0], n);
  Jet power = Jet::constant(1.0, n);
  for (int k = 1; k <= n; ++k) {
    power = power * h;
    result += power * (derivatives[k] / kFactorial[k]);
  }
  check_finite(result, "function composition");
  return result;
}

Jet reciprocal(const Jet& u) {
  const double v = u.value();
  if (v == 0.0) throw DomainError("division by a jet whose value is zero");
  std::array<double, 5> d{};
  double p = 1.0 / v;
  double sign = 1.0;
  for (int k = 0; k <= Jet::kMaxOrder; ++k) {
    d[k] = sign * kFactorial[k] * p;  // (-1)^k k! / v^(k+1)
    p /= v;
    sign = -sign;
  }
  return compose(u, d);
}

Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  const std::array<double, 5> d = {e, e, e, e, e};
  return compose(u, d);
}

Jet log(const Jet& u) {
  const double v = u.value();
  if (!(v > 0.0)) throw DomainError("log of non-positive value " + std::to_string(v));
  const double r = 1.0 / v;
  const std::array<double, 5> d = {std::log(v), r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r};
  return compose(u, d);
}

Jet sqrt(const Jet& u) {
  const double v = u.value();
  if (!(v > 0.0)) throw DomainError("sqrt of non-positive value " + std::to_string(v));
  const double s = std::sqrt(v);
  const double r = 1.0 / v;
  const std::array<double, 5> d = {s, 0.5 * s * r, -0.25 * s * r * r, 0.375 * s * r * r * r,
                                   -0.9375 * s * r * r * r * r};
  return compose(u, d);
}

Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  const std::array<double, 5> d = {s, c, -s, -c, s};
  return compose(u, d);
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  const std::array<double, 5> d = {c, -s, -c, s, c};
  return compose(u, d);
}

Jet tan(const Jet& u) {
  const double t = std::tan(u.value());
  const double q = 1.0 + t * t;
  const std::array<double, 5> d = {t, q, 2.0 * t * q, (2.0 + 6.0 * t * t) * q, (16.0 * t + 24.0 * t * t * t) * q};
  return compose(u, d);
}

Jet sinh(const Jet& u) {
  const double s = std::sinh(u.value()), c = std::cosh(u.value());
  const std::array<double, 5> d = {s, c, s, c, s};
  return compose(u, d);
}

Jet cosh(const Jet& u) {
  const double s = std::sinh(u.value()), c = std::cosh(u.value());
  const std::array<double, 5> d = {c, s, c, s, c};
  return compose(u, d);
}

Jet tanh(const Jet& u) {
  const double t = std::tanh(u.value());
  const double q = 1.0 - t * t;
  const std::array<double, 5> d = {t, q, -2.0 * t * q, (6.0 * t * t - 2.0) * q, (16.0 * t - 24.0 * t * t * t) * q};
  return compose(u, d);
}

Jet atan(const Jet& u) {
  const double x = u.value();
  const double r = 1.0 / (1.0 + x * x);
  const std::array<double, 5> d = {std::atan(x), r, -2.0 * x * r * r, (6.0 * x * x - 2.0) * r * r * r,
                                   24.0 * x * (1.0 - x * x) * r * r * r * r};
  return compose(u, d);
}

Jet pow(const Jet& u, int exponent) {
  if (exponent == 0) return Jet::constant(1.0, u.order());
  Jet base = exponent < 0 ? reciprocal(u) : u;
  int e = exponent < 0 ? -exponent : exponent;
  Jet result = Jet::constant(1.0, u.order());
  for (; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  check_finite(result, "integer power");
  return result;
}

}  // namespace framelift
