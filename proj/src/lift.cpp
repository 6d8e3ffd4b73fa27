#include "framelift/lift.hpp"

#include <cmath>
#include <sstream>

namespace framelift {
namespace {

BaseGeometry checked_base(const ConformalSurface& surface, Point x, FrameDepth depth, double kappa_min) {
  BaseGeometry g = base_geometry(surface, x, depth);
  if (!(std::abs(g.K) >= kappa_min)) throw SingularCurvature(x, g.K);
  return g;
}

Jet along(const std::array<Jet, 3>& field, const Jet& g) {
  const int n = g.order() - 1;
  return field[0].truncated(n) * g.derivative(1) + field[1].truncated(n) * g.derivative(2);
}

// Pair index for the 3-d bivector basis (12, 13, 23) and its orientation sign.
int pair_index(int a, int b) { return a + b - 1; }
double pair_sign(int a, int b) { return a < b ? 1.0 : -1.0; }

}  // namespace

LiftedFrame lifted_frame(const ConformalSurface& surface, Point x, double kappa_min) {
  const BaseGeometry g = checked_base(surface, x, FrameDepth::curvature, kappa_min);
  const double s = std::exp(-expr::eval(surface.lambda(), x));
  LiftedFrame f;
  f.m[0] = {s, 0.0, -g.c112};
  f.m[1] = {0.0, s, -g.c212};
  f.m[2] = {0.0, 0.0, g.K};
  return f;
}

double nonholonomity(const ConformalSurface& surface, Point x) {
  const FrameJets f = frame_jets(surface, x, 2);
  const Jet zero = Jet::constant(0.0, 1);
  const std::array<Jet, 3> h1 = {f.inv_scale.truncated(1), zero, -f.c112};
  const std::array<Jet, 3> h2 = {zero, f.inv_scale.truncated(1), -f.c212};
  std::array<double, 3> bracket{};
  for (int mu = 0; mu < 3; ++mu) bracket[mu] = (along(h1, h2[mu]) - along(h2, h1[mu])).value();
  // [E^h_1, E^h_2] = a E^h_1 + b E^h_2 + v d_phi; the base part fixes a, b.
  const double s = f.inv_scale.value();
  const double a = bracket[0] / s;
  const double b = bracket[1] / s;
  return bracket[2] + a * f.c112.value() + b * f.c212.value();
}

StructureTable lifted_structure_table(double c112, double c212, double e1K_over_K, double e2K_over_K, double one) {
  StructureTable t;
  t.dim = 3;
  auto set = [&](int k, int i, int j, double v) {
    t.c[k][i][j] = v;
    t.c[k][j][i] = -v;
  };
  set(0, 0, 1, c112);
  set(1, 0, 1, c212);
  set(2, 0, 1, -one);
  set(2, 0, 2, e1K_over_K);
  set(2, 1, 2, e2K_over_K);
  return t;
}

LiftedStructure lifted_structure(const ConformalSurface& surface, Point x, double kappa_min) {
  LiftedStructure s;
  s.base = checked_base(surface, x, FrameDepth::curvature_gradient, kappa_min);
  s.table = lifted_structure_table(s.base.c112, s.base.c212, s.base.e1K / s.base.K, s.base.e2K / s.base.K);
  return s;
}

ConnectionTable lifted_connection(const ConformalSurface& surface, Point x, double kappa_min) {
  return koszul(lifted_structure(surface, x, kappa_min).table);
}

LiftedComponents lifted_components_closed(const BaseGeometry& g) {
  if (!g.second_terms) throw InvalidArgument("lifted curvature needs e_i(e_j K / K)");
  const double a = g.e1K / g.K;
  const double b = g.e2K / g.K;
  const auto& d = *g.second_terms;
  LiftedComponents r;
  r.r1212 = 0.75 - g.K;
  r.r1213 = -a;
  r.r1223 = -b;
  r.r1313 = -0.25 - d[0][0] - g.c112 * b + a * a;
  r.r1323 = -d[0][1] + g.c112 * a + a * b;
  r.r2323 = -0.25 - d[1][1] + g.c212 * a + b * b;
  return r;
}

LiftedComponents lifted_components_printed(const BaseGeometry& g) {
  LiftedComponents r = lifted_components_closed(g);
  r.r1213 = g.e1K / g.K;
  r.r1223 = g.e2K / g.K;
  return r;
}

LiftedComponents components_of(const CurvatureTable& t) {
  if (t.dim != 3) throw InvalidArgument("lifted components need a dim-3 curvature table");
  return LiftedComponents{t.component(0, 1, 0, 1), t.component(0, 1, 0, 2), t.component(0, 1, 1, 2),
                          t.component(0, 2, 0, 2), t.component(0, 2, 1, 2), t.component(1, 2, 1, 2)};
}

CurvatureTable assemble_curvature(const LiftedComponents& c) {
  // Symmetric 3x3 form on bivectors (12, 13, 23).
  const double s[3][3] = {{c.r1212, c.r1213, c.r1223}, {c.r1213, c.r1313, c.r1323}, {c.r1223, c.r1323, c.r2323}};
  CurvatureTable t;
  t.dim = 3;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      for (int cc = 0; cc < 3; ++cc) {
        for (int d = 0; d < 3; ++d) {
          if (cc == d) continue;
          t.r[d][a][b][cc] = pair_sign(a, b) * pair_sign(cc, d) *
                             s[pair_index(std::min(a, b), std::max(a, b))][pair_index(std::min(cc, d), std::max(cc, d))];
        }
      }
    }
  }
  return t;
}

CurvatureTable lifted_curvature_closed(const ConformalSurface& surface, Point x, double kappa_min) {
  const BaseGeometry g = checked_base(surface, x, FrameDepth::full, kappa_min);
  return assemble_curvature(lifted_components_closed(g));
}

double lifted_sectional(const ConformalSurface& surface, Point x, int i, int j, double kappa_min) {
  if (i < 0 || j < 0 || i > 2 || j > 2) throw InvalidArgument("lifted frame index must be 0, 1 or 2");
  if (i == j) throw InvalidArgument("sectional curvature needs two distinct frame vectors");
  return sectional(lifted_curvature_closed(surface, x, kappa_min), i, j);
}

FrameSampler lifted_frame_sampler(const ConformalSurface& surface, double kappa_min) {
  return FrameSampler(3, [surface, kappa_min](Point x) {
    const FrameJets f = frame_jets(surface, x, 4);
    if (!(std::abs(f.K->value()) >= kappa_min)) throw SingularCurvature(x, f.K->value());
    const Jet zero = Jet::constant(0.0, 2);
    const Jet s = f.inv_scale.truncated(2);
    FrameFields out;
    out.dim = 3;
    out.coeff[0] = {s, zero, -f.c112.truncated(2)};
    out.coeff[1] = {zero, s, -f.c212.truncated(2)};
    out.coeff[2] = {zero, zero, *f.K};
    return out;
  });
}

FrameSampler base_frame_sampler(const ConformalSurface& surface) {
  return FrameSampler(2, [surface](Point x) {
    const FrameJets f = frame_jets(surface, x, 2);
    const Jet zero = Jet::constant(0.0, 2);
    FrameFields out;
    out.dim = 2;
    out.coeff[0] = {f.inv_scale, zero, zero};
    out.coeff[1] = {zero, f.inv_scale, zero};
    return out;
  });
}

Table3<LinearForm> lifted_connection_symbolic() {
  // Koszul is linear in the structure table, and the lifted table is affine
  // in the basis symbols, so evaluating on unit inputs recovers each form.
  const std::array<StructureTable, 5> basis = {
      lifted_structure_table(0, 0, 0, 0, 1.0), lifted_structure_table(1, 0, 0, 0, 0.0),
      lifted_structure_table(0, 1, 0, 0, 0.0), lifted_structure_table(0, 0, 1, 0, 0.0),
      lifted_structure_table(0, 0, 0, 1, 0.0)};
  Table3<LinearForm> out{};
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const ConnectionTable g = koszul(basis[b]);
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) out[k][i][j][b] = g.gamma[k][i][j];
      }
    }
  }
  return out;
}

std::string format_linear_form(const LinearForm& form) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t b = 0; b < form.size(); ++b) {
    const double v = form[b];
    if (v == 0.0) continue;
    const double mag = std::abs(v);
    os << (v < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    std::ostringstream coef;
    if (mag == 0.5) {
      coef << "1/2";
    } else if (mag != 1.0) {
      coef << mag;
    }
    if (b == 0) {
      os << (coef.str().empty() ? "1" : coef.str());
    } else {
      if (!coef.str().empty()) os << coef.str() << " ";
      os << kLinearFormBasis[b];
    }
    first = false;
  }
  return first ? "0" : os.str();
}

std::string format_lifted_connection_symbolic() {
  const Table3<LinearForm> g = lifted_connection_symbolic();
  std::ostringstream os;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const std::string text = format_linear_form(g[k][i][j]);
        if (text != "0") os << "Gamma^" << k + 1 << "_" << i + 1 << j + 1 << " = " << text << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace framelift
