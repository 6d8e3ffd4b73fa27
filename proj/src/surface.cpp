#include "framelift/surface.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <string>

namespace framelift {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void require_finite(double v, const char* what, Point x) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " is not finite at " + format_point(x), x);
}

constexpr std::array<std::string_view, 3> kCatalog = {"sphere", "halfplane", "bump"};

}  // namespace

ChartGuard ChartGuard::everywhere() { return ChartGuard(); }

ChartGuard ChartGuard::positive(expr::Expr e) {
  ChartGuard g;
  g.positive_ = std::move(e);
  return g;
}

ChartGuard ChartGuard::parse(std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "all") return everywhere();
  const auto gt = t.rfind('>');
  if (gt == std::string_view::npos || trim(t.substr(gt + 1)) != "0") {
    throw InvalidArgument("chart guard must be \"all\" or \"<expr> > 0\", got \"" + std::string(text) + "\"");
  }
  return positive(expr::parse(t.substr(0, gt)));
}

bool ChartGuard::contains(Point p) const {
  if (!positive_) return std::isfinite(p.x1) && std::isfinite(p.x2);
  if (!std::isfinite(p.x1) || !std::isfinite(p.x2)) return false;
  try {
    return expr::eval(*positive_, p) > 0.0;
  } catch (const EvaluationError&) {
    return false;
  }
}

std::string ChartGuard::to_string() const { return positive_ ? positive_->to_string() + " > 0" : "all"; }

ConformalSurface::ConformalSurface(std::string name, expr::Expr lambda, ChartGuard guard, SampleBox box)
    : name_(std::move(name)), lambda_(std::move(lambda)), guard_(std::move(guard)), box_(box) {
  if (!(box_.x1_min < box_.x1_max) || !(box_.x2_min < box_.x2_max)) {
    throw InvalidArgument("sample box of surface '" + name_ + "' is empty");
  }
}

void ConformalSurface::require_inside(Point p) const {
  if (!contains(p)) throw ChartDomainError(p, guard_.to_string());
}

Jet frame_derivative(const FrameJets& frame, const Jet& f, int i) {
  return frame.inv_scale.truncated(f.order() - 1) * f.derivative(i);
}

FrameJets frame_jets(const ConformalSurface& surface, Point x, int lambda_order) {
  if (lambda_order < 1 || lambda_order > Jet::kMaxOrder) throw InvalidArgument("frame jets need lambda order in 1..4");
  surface.require_inside(x);
  FrameJets f;
  f.lambda = expr::eval_jet(surface.lambda(), x, lambda_order);
  f.inv_scale = exp(-f.lambda);
  const Jet s = f.inv_scale.truncated(lambda_order - 1);
  f.c112 = s * f.lambda.derivative(2);
  f.c212 = -(s * f.lambda.derivative(1));
  if (lambda_order >= 2) {
    // K = e1 c^2_12 - e2 c^1_12 - (c^1_12)^2 - (c^2_12)^2
    const Jet c1 = f.c112.truncated(lambda_order - 2);
    const Jet c2 = f.c212.truncated(lambda_order - 2);
    f.K = frame_derivative(f, f.c212, 1) - frame_derivative(f, f.c112, 2) - c1 * c1 - c2 * c2;
  }
  return f;
}

std::pair<double, double> structure_functions(const ConformalSurface& surface, Point x) {
  const BaseGeometry g = base_geometry(surface, x, FrameDepth::structure);
  return {g.c112, g.c212};
}

BaseGeometry gauss_curvature(const ConformalSurface& surface, Point x) {
  return base_geometry(surface, x, FrameDepth::full);
}

BaseGeometry base_geometry(const ConformalSurface& surface, Point x, FrameDepth depth) {
  const int n = static_cast<int>(depth);
  const FrameJets f = frame_jets(surface, x, n);
  BaseGeometry g;
  g.c112 = f.c112.value();
  g.c212 = f.c212.value();
  require_finite(g.c112, "c^1_12", x);
  require_finite(g.c212, "c^2_12", x);
  if (!f.K) return g;
  const Jet& K = *f.K;
  g.K = K.value();
  require_finite(g.K, "Gaussian curvature", x);
  if (n < 3) return g;
  const Jet e1K = frame_derivative(f, K, 1);
  const Jet e2K = frame_derivative(f, K, 2);
  g.e1K = e1K.value();
  g.e2K = e2K.value();
  require_finite(g.e1K, "e1 K", x);
  require_finite(g.e2K, "e2 K", x);
  if (n < 4 || g.K == 0.0) return g;
  const Jet Kt = K.truncated(1);
  const std::array<Jet, 2> log_grad = {e1K / Kt, e2K / Kt};
  std::array<std::array<double, 2>, 2> second{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      second[i][j] = frame_derivative(f, log_grad[j], i + 1).value();
      require_finite(second[i][j], "e_i(e_j K / K)", x);
    }
  }
  g.second_terms = second;
  return g;
}

double conformal_curvature(const ConformalSurface& surface, Point x) {
  surface.require_inside(x);
  const Jet lam = expr::eval_jet(surface.lambda(), x, 2);
  const double k = -std::exp(-2.0 * lam.value()) * (lam.partial(2, 0) + lam.partial(0, 2));
  require_finite(k, "conformal curvature", x);
  return k;
}

ConformalSurface catalog(std::string_view name) {
  if (name == "sphere") {
    return ConformalSurface("sphere", expr::parse("log(2) - log(1 + x1^2 + x2^2)"), ChartGuard::everywhere(),
                            SampleBox{-1.5, 1.5, -1.5, 1.5});
  }
  if (name == "halfplane") {
    return ConformalSurface("halfplane", expr::parse("-log(x2)"), ChartGuard::parse("x2 > 0"),
                            SampleBox{-1.5, 1.5, 0.25, 3.0});
  }
  if (name == "bump") {
    return ConformalSurface("bump", expr::parse("x1^2 + x2^2"), ChartGuard::everywhere(),
                            SampleBox{-1.0, 1.0, -1.0, 1.0});
  }
  throw InvalidArgument("unknown catalog surface '" + std::string(name) + "' (expected sphere, halfplane or bump)");
}

std::span<const std::string_view> catalog_names() noexcept { return kCatalog; }

}  // namespace framelift
