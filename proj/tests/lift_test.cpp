#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "framelift/lift.hpp"
#include "framelift/verify.hpp"

namespace framelift {
namespace {

const char* const kSurfaces[] = {"sphere", "halfplane", "bump"};

ConformalSurface flat() { return ConformalSurface("flat", expr::parse("0.25"), ChartGuard::everywhere()); }

void expect_row(const std::array<double, 3>& row, double a, double b, double c) {
  EXPECT_NEAR(row[0], a, 1e-15);
  EXPECT_NEAR(row[1], b, 1e-15);
  EXPECT_NEAR(row[2], c, 1e-15);
}

TEST(LiftedFrame, HalfPlaneAtUnitHeight) {
  const LiftedFrame f = lifted_frame(catalog("halfplane"), {0, 1});
  expect_row(f.m[0], 1, 0, 1);  // e1 + d_phi
  expect_row(f.m[1], 0, 1, 0);
  expect_row(f.m[2], 0, 0, -1);  // K d_phi with K = -1
}

TEST(LiftedFrame, SphereOrigin) {
  const LiftedFrame f = lifted_frame(catalog("sphere"), {0, 0});
  expect_row(f.m[0], 0.5, 0, 0);  // e1 = d1 / 2 at the origin
  expect_row(f.m[1], 0, 0.5, 0);
  expect_row(f.m[2], 0, 0, 1);
}

TEST(LiftedFrame, ProjectsOntoBaseFrame) {
  for (const char* name : kSurfaces) {
    const ConformalSurface s = catalog(name);
    for (Point x : sample_points(s, 20, 12)) {
      const LiftedFrame f = lifted_frame(s, x);
      const double e = std::exp(-expr::eval(s.lambda(), x));
      EXPECT_NEAR(f.m[0][0], e, 1e-15);
      EXPECT_EQ(f.m[0][1], 0.0);
      EXPECT_EQ(f.m[1][0], 0.0);
      EXPECT_NEAR(f.m[1][1], e, 1e-15);
      EXPECT_EQ(f.m[2][0], 0.0);
      EXPECT_EQ(f.m[2][1], 0.0);
      EXPECT_NE(f.m[0][0] * f.m[1][1] * f.m[2][2], 0.0);
    }
  }
}

TEST(LiftedFrame, OrthonormalForLiftedMetric) {
  // Coframe: theta^a = e^lambda dx^a, theta^3 = (dphi + c^1 e^lambda dx1 + c^2 e^lambda dx2) / K.
  for (const char* name : kSurfaces) {
    const ConformalSurface s = catalog(name);
    for (Point x : sample_points(s, 20, 13)) {
      const LiftedFrame f = lifted_frame(s, x);
      const BaseGeometry g = base_geometry(s, x, FrameDepth::curvature);
      const double el = std::exp(expr::eval(s.lambda(), x));
      const double theta[3][3] = {{el, 0, 0}, {0, el, 0}, {g.c112 * el / g.K, g.c212 * el / g.K, 1 / g.K}};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          double v = 0;
          for (int mu = 0; mu < 3; ++mu) v += theta[a][mu] * f.m[b][mu];
          EXPECT_NEAR(v, a == b ? 1.0 : 0.0, 1e-14);
        }
      }
    }
  }
}

TEST(Singularity, FlatSurfaceRejectedByEveryLiftOperation) {
  const ConformalSurface s = flat();
  const Point x{0.5, -0.25};
  EXPECT_THROW(lifted_frame(s, x), SingularCurvature);
  EXPECT_THROW(lifted_structure(s, x), SingularCurvature);
  EXPECT_THROW(lifted_connection(s, x), SingularCurvature);
  EXPECT_THROW(lifted_curvature_closed(s, x), SingularCurvature);
  EXPECT_THROW(lifted_sectional(s, x, 0, 1), SingularCurvature);
  EXPECT_THROW(lifted_frame_sampler(s).sample(x), SingularCurvature);
  EXPECT_THROW(verify_lift(s, 5, 1, 1e-8), SingularCurvature);
  try {
    lifted_frame(s, x);
  } catch (const SingularCurvature& e) {
    ASSERT_TRUE(e.where().has_value());
    EXPECT_EQ(e.where()->x1, 0.5);
    EXPECT_EQ(e.where()->x2, -0.25);
    EXPECT_EQ(e.curvature(), 0.0);
  }
}

TEST(Singularity, ThresholdIsConfigurable) {
  const ConformalSurface s = catalog("bump");
  const Point far{2.5, 0.0};  // K = -4 exp(-12.5), about -1.5e-5
  EXPECT_NO_THROW(lifted_frame(s, far));
  EXPECT_THROW(lifted_frame(s, far, 1e-4), SingularCurvature);
}

TEST(Nonholonomity, CatalogValues) {
  EXPECT_NEAR(nonholonomity(catalog("halfplane"), {0.4, 1.3}), 1.0, 1e-14);
  EXPECT_NEAR(nonholonomity(catalog("bump"), {0, 0}), 4.0, 1e-14);
  const ConformalSurface sphere = catalog("sphere");
  for (Point x : sample_points(sphere, 20, 2)) EXPECT_NEAR(nonholonomity(sphere, x), -1.0, 1e-12);
}

TEST(Nonholonomity, EqualsMinusGaussCurvature) {
  for (const char* name : kSurfaces) {
    const ConformalSurface s = catalog(name);
    for (Point x : sample_points(s, 100, 31)) {
      EXPECT_NEAR(nonholonomity(s, x) + gauss_curvature(s, x).K, 0.0, 1e-9) << name;
    }
  }
}

TEST(LiftedStructure, HalfPlaneBrackets) {
  const ConformalSurface s = catalog("halfplane");
  const Point x{0.2, 0.9};
  const LiftedStructure ls = lifted_structure(s, x);
  EXPECT_NEAR(ls.table.c[0][0][1], -1.0, 1e-15);
  EXPECT_NEAR(ls.table.c[2][0][1], -1.0, 1e-15);
  EXPECT_NEAR(ls.table.c[2][0][2], 0.0, 1e-15);
  EXPECT_NEAR(ls.table.c[2][1][2], 0.0, 1e-15);
  // [E1, E2] = -E1 - E3, [E2, E3] = [E3, E1] = 0 from the chart brackets.
  const StructureSample b = lifted_frame_sampler(s).sample(x);
  const double e12[3] = {-1, 0, -1};
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(b.table.c[k][0][1], e12[k], 1e-14);
    EXPECT_NEAR(b.table.c[k][1][2], 0.0, 1e-14);
    EXPECT_NEAR(b.table.c[k][2][0], 0.0, 1e-14);
  }
}

TEST(LiftedStructure, Invariants) {
  for (const char* name : kSurfaces) {
    const ConformalSurface s = catalog(name);
    for (Point x : sample_points(s, 50, 4)) {
      const LiftedStructure ls = lifted_structure(s, x);
      const auto& c = ls.table.c;
      EXPECT_EQ(c[0][0][2], 0.0);
      EXPECT_EQ(c[0][1][2], 0.0);
      EXPECT_EQ(c[1][0][2], 0.0);
      EXPECT_EQ(c[1][1][2], 0.0);
      EXPECT_EQ(c[2][0][1], -1.0);
      EXPECT_EQ(c[0][0][1], ls.base.c112);
      EXPECT_EQ(c[1][0][1], ls.base.c212);
      EXPECT_EQ(c[2][0][2], ls.base.e1K / ls.base.K);
      EXPECT_EQ(c[2][1][2], ls.base.e2K / ls.base.K);
      if (std::string(name) != "bump") {
        EXPECT_NEAR(c[2][0][2], 0.0, 1e-12);
        EXPECT_NEAR(c[2][1][2], 0.0, 1e-12);
      }
    }
  }
}

TEST(LiftedStructure, BumpLogarithmicDerivative) {
  const ConformalSurface s = catalog("bump");
  const Point x{0.5, 0.0};
  const LiftedStructure ls = lifted_structure(s, x);
  // K = -4 exp(-2 r^2): e1K / K = exp(-r^2) (-4 x1).
  EXPECT_NEAR(ls.table.c[2][0][2], -2.0 * std::exp(-0.25), 1e-14);
  const double h = 1e-5;
  auto K = [&](double dx) { return gauss_curvature(s, {x.x1 + dx, x.x2}).K; };
  const double fd = std::exp(-0.25) * (K(h) - K(-h)) / (2 * h) / K(0);
  EXPECT_NEAR(ls.table.c[2][0][2], fd, 1e-8);
}

TEST(LiftedStructure, MatchesChartBrackets) {
  for (const char* name : kSurfaces) {
    const ConformalSurface s = catalog(name);
    const FrameSampler sampler = lifted_frame_sampler(s);
    for (Point x : sample_points(s, 100, 14)) {
      const LiftedStructure ls = lifted_structure(s, x);
      const StructureSample b = sampler.sample(x);
      for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) EXPECT_NEAR(ls.table.c[k][i][j], b.table.c[k][i][j], 1e-8) << name;
        }
      }
    }
  }
}

TEST(LiftedConnection, ConstantCurvatureHalves) {
  for (const char* name : {"sphere", "halfplane"}) {
    const ConformalSurface s = catalog(name);
    for (Point x : sample_points(s, 10, 15)) {
      const ConnectionTable g = lifted_connection(s, x);
      EXPECT_NEAR(g.gamma[2][0][1], -0.5, 1e-15);
      EXPECT_NEAR(g.gamma[2][1][0], 0.5, 1e-15);
      EXPECT_NEAR(g.gamma[1][0][2], 0.5, 1e-15);
      EXPECT_NEAR(g.gamma[0][1][2], -0.5, 1e-15);
      EXPECT_NEAR(g.gamma[0][2][2], 0.0, 1e-12);
      EXPECT_NEAR(g.gamma[1][2][2], 0.0, 1e-12);
      EXPECT_NEAR(g.gamma[2][2][0], 0.0, 1e-12);
      EXPECT_NEAR(g.gamma[2][2][1], 0.0, 1e-12);
    }
  }
}

TEST(LiftedConnection, MatchesLinearSolve) {
  for (const char* name : kSurfaces) {
    const ConformalSurface s = catalog(name);
    for (Point x : sample_points(s, 100, 16)) {
      const LiftedStructure ls = lifted_structure(s, x);
      const ConnectionTable g = lifted_connection(s, x);
      const ConnectionTable solved = solve_levi_civita(ls.table);
      for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(g.gamma[k][i][j], solved.gamma[k][i][j], 1e-12);
            EXPECT_NEAR(g.gamma[k][i][j] + g.gamma[j][i][k], 0.0, 1e-12);
            EXPECT_NEAR(g.gamma[k][i][j] - g.gamma[k][j][i], ls.table.c[k][i][j], 1e-12);
          }
        }
      }
    }
  }
}

TEST(LiftedConnection, SymbolicTableMatchesGolden) {
  std::ifstream in(std::string(FRAMELIFT_GOLDEN_DIR) + "/lifted_connection.txt");
  ASSERT_TRUE(in.good());
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(format_lifted_connection_symbolic(), golden.str());
}

TEST(LiftedConnection, SymbolicTableMatchesNumbers) {
  const ConformalSurface s = catalog("bump");
  const Table3<LinearForm> sym = lifted_connection_symbolic();
  for (Point x : sample_points(s, 20, 18)) {
    const LiftedStructure ls = lifted_structure(s, x);
    const ConnectionTable g = lifted_connection(s, x);
    const double basis[5] = {1, ls.base.c112, ls.base.c212, ls.base.e1K / ls.base.K, ls.base.e2K / ls.base.K};
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double v = 0;
          for (int b = 0; b < 5; ++b) v += sym[k][i][j][b] * basis[b];
          EXPECT_NEAR(v, g.gamma[k][i][j], 1e-14);
        }
      }
    }
  }
}

TEST(LiftedCurvature, HalfPlaneComponents) {
  const CurvatureTable r = lifted_curvature_closed(catalog("halfplane"), {0.1, 1.1});
  const LiftedComponents c = components_of(r);
  EXPECT_NEAR(c.r1212, 1.75, 1e-12);
  EXPECT_NEAR(c.r1213, 0.0, 1e-12);
  EXPECT_NEAR(c.r1223, 0.0, 1e-12);
  EXPECT_NEAR(c.r1313, -0.25, 1e-12);
  EXPECT_NEAR(c.r2323, -0.25, 1e-12);
}

TEST(LiftedCurvature, SphereComponents) {
  for (Point x : sample_points(catalog("sphere"), 20, 19)) {
    const LiftedComponents c = components_of(lifted_curvature_closed(catalog("sphere"), x));
    EXPECT_NEAR(c.r1212, -0.25, 1e-12);
    EXPECT_NEAR(c.r1313, -0.25, 1e-12);
    EXPECT_NEAR(c.r2323, -0.25, 1e-12);
    EXPECT_NEAR(c.r1213, 0.0, 1e-12);
    EXPECT_NEAR(c.r1223, 0.0, 1e-12);
    EXPECT_NEAR(c.r1323, 0.0, 1e-12);
  }
}

TEST(LiftedCurvature, ClosedFormMatchesFrameCalculus) {
  for (const char* name : kSurfaces) {
    const ConformalSurface s = catalog(name);
    const double tol = std::string(name) == "bump" ? 1e-6 : 1e-8;
    const FrameSampler sampler = lifted_frame_sampler(s);
    for (Point x : sample_points(s, 100, 20)) {
      const CurvatureTable closed = lifted_curvature_closed(s, x);
      const CurvatureTable oracle = curvature(sampler, x);
      for (int l = 0; l < 3; ++l) {
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) EXPECT_NEAR(closed.lowered(l, i, j, k), oracle.lowered(l, i, j, k), tol) << name;
          }
        }
      }
    }
  }
}

TEST(LiftedCurvature, PublishedMixedComponentsHaveOppositeSign) {
  const ConformalSurface s = catalog("bump");
  const FrameSampler sampler = lifted_frame_sampler(s);
  for (Point x : sample_points(s, 20, 21)) {
    const BaseGeometry g = base_geometry(s, x, FrameDepth::full);
    const LiftedComponents oracle = components_of(curvature(sampler, x));
    const LiftedComponents published = lifted_components_printed(g);
    EXPECT_NEAR(published.r1213, -oracle.r1213, 1e-9);
    EXPECT_NEAR(published.r1223, -oracle.r1223, 1e-9);
    EXPECT_NEAR(published.r1212, oracle.r1212, 1e-9);
    EXPECT_NEAR(published.r1313, oracle.r1313, 1e-9);
  }
}

TEST(LiftedSectional, SphereIsQuarterEverywhere) {
  const ConformalSurface s = catalog("sphere");
  for (Point x : sample_points(s, 20, 22)) {
    EXPECT_NEAR(lifted_sectional(s, x, 0, 1), 0.25, 1e-9);
    EXPECT_NEAR(lifted_sectional(s, x, 0, 2), 0.25, 1e-9);
    EXPECT_NEAR(lifted_sectional(s, x, 1, 2), 0.25, 1e-9);
  }
}

TEST(LiftedSectional, HalfPlaneSigns) {
  const ConformalSurface s = catalog("halfplane");
  for (Point x : sample_points(s, 20, 23)) {
    EXPECT_NEAR(lifted_sectional(s, x, 0, 1), -1.75, 1e-9);
    EXPECT_NEAR(lifted_sectional(s, x, 0, 2), 0.25, 1e-9);
    EXPECT_NEAR(lifted_sectional(s, x, 1, 2), 0.25, 1e-9);
  }
}

TEST(LiftedSectional, ConstantCurvatureIsPointIndependent) {
  for (const char* name : {"sphere", "halfplane"}) {
    const ConformalSurface s = catalog(name);
    const auto points = sample_points(s, 50, 24);
    for (int p = 0; p < 3; ++p) {
      const int i = p < 2 ? 0 : 1;
      const int j = p == 0 ? 1 : 2;
      double lo = 1e300, hi = -1e300;
      for (Point x : points) {
        const double k = lifted_sectional(s, x, i, j);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
      EXPECT_LT(hi - lo, 1e-9) << name;
    }
  }
}

TEST(LiftedSectional, BadIndices) {
  const ConformalSurface s = catalog("sphere");
  EXPECT_THROW(lifted_sectional(s, {0, 0}, 1, 1), InvalidArgument);
  EXPECT_THROW(lifted_sectional(s, {0, 0}, 0, 3), InvalidArgument);
}

TEST(VerifyLift, CatalogPasses) {
  for (const char* name : kSurfaces) {
    const double tol = std::string(name) == "bump" ? 1e-6 : 1e-8;
    const LiftReport r = verify_lift(catalog(name), 100, 7, tol);
    EXPECT_TRUE(r.passed()) << name;
    for (const auto& plane : r.sectional) EXPECT_TRUE(plane.sign_stable) << name;
  }
}

TEST(VerifyLift, HalfPlaneReport) {
  const LiftReport r = verify_lift(catalog("halfplane"), 100, 7, 1e-8);
  EXPECT_NEAR(r.r1212_min, 1.75, 1e-12);
  EXPECT_NEAR(r.r1212_max, 1.75, 1e-12);
  EXPECT_EQ(r.sectional[0].sign, -1);
  EXPECT_EQ(r.sectional[1].sign, 1);
  EXPECT_EQ(r.sectional[2].sign, 1);
}

TEST(VerifyLift, DeterministicForSeed) {
  const LiftReport a = verify_lift(catalog("bump"), 40, 5, 1e-6);
  const LiftReport b = verify_lift(catalog("bump"), 40, 5, 1e-6);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) EXPECT_EQ(a.checks[i].value, b.checks[i].value);
  EXPECT_EQ(a.r1212_min, b.r1212_min);
}

TEST(VerifyLift, RejectsBadArguments) {
  EXPECT_THROW(verify_lift(catalog("sphere"), 0, 1, 1e-8), InvalidArgument);
  EXPECT_THROW(verify_lift(catalog("sphere"), 5, 1, 0.0), InvalidArgument);
}

}  // namespace
}  // namespace framelift
