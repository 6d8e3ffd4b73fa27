#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "framelift/error.hpp"
#include "framelift/expr.hpp"
#include "framelift/jet.hpp"

namespace framelift {

// Chart validity predicate: either the whole plane or { x : e(x) > 0 }.
class ChartGuard {
 public:
  static ChartGuard everywhere();
  static ChartGuard positive(expr::Expr e);
  // "all", or "<expr> > 0" (e.g. "x2>0").
  static ChartGuard parse(std::string_view text);

  bool contains(Point p) const;
  std::string to_string() const;

 private:
  ChartGuard() = default;
  std::optional<expr::Expr> positive_;
};

// Axis-aligned region used when drawing random chart points.
struct SampleBox {
  double x1_min = -1.0, x1_max = 1.0;
  double x2_min = -1.0, x2_max = 1.0;
};

// Metric g = exp(2 lambda) ((dx1)^2 + (dx2)^2) on the region admitted by the
// guard, with canonical orthonormal frame e_a = exp(-lambda) d_a.
class ConformalSurface {
 public:
  ConformalSurface(std::string name, expr::Expr lambda, ChartGuard guard, SampleBox box = {});

  const std::string& name() const noexcept { return name_; }
  const expr::Expr& lambda() const noexcept { return lambda_; }
  const ChartGuard& guard() const noexcept { return guard_; }
  const SampleBox& sample_box() const noexcept { return box_; }

  bool contains(Point p) const { return guard_.contains(p); }
  // Throws ChartDomainError when p is outside the chart.
  void require_inside(Point p) const;

 private:
  std::string name_;
  expr::Expr lambda_;
  ChartGuard guard_;
  SampleBox box_;
};

// Frame data at a point; fields beyond the requested depth are unset.
struct BaseGeometry {
  double c112 = 0.0;  // c^1_{12}
  double c212 = 0.0;  // c^2_{12}
  double K = 0.0;
  double e1K = 0.0;
  double e2K = 0.0;
  // second_terms[i][j] = e_{i+1}(e_{j+1} K / K); absent where K = 0.
  std::optional<std::array<std::array<double, 2>, 2>> second_terms;
};

// How much of BaseGeometry to fill: each level needs one more order of lambda.
enum class FrameDepth { structure = 1, curvature = 2, curvature_gradient = 3, full = 4 };

// Jets of the frame quantities at a point, all expanded in (x1, x2).
struct FrameJets {
  Jet lambda;
  Jet inv_scale;  // exp(-lambda)
  Jet c112;       // exp(-lambda) d2 lambda
  Jet c212;       // -exp(-lambda) d1 lambda
  std::optional<Jet> K;
};

// e_i applied to a field given as a jet: exp(-lambda) d_i f, one order lower.
Jet frame_derivative(const FrameJets& frame, const Jet& f, int i);

// Expands the frame to the given lambda order (>= 1; K needs >= 2).
FrameJets frame_jets(const ConformalSurface& surface, Point x, int lambda_order);

std::pair<double, double> structure_functions(const ConformalSurface& surface, Point x);
BaseGeometry gauss_curvature(const ConformalSurface& surface, Point x);
BaseGeometry base_geometry(const ConformalSurface& surface, Point x, FrameDepth depth);

// -exp(-2 lambda)(d11 lambda + d22 lambda): the conformal-Laplacian form of K.
double conformal_curvature(const ConformalSurface& surface, Point x);

// "sphere" (stereographic chart, K = 1), "halfplane" (Poincare, K = -1),
// "bump" (lambda = x1^2 + x2^2, K = -4 exp(-2 lambda)).
ConformalSurface catalog(std::string_view name);
std::span<const std::string_view> catalog_names() noexcept;

}  // namespace framelift
