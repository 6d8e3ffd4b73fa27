#pragma once

#include <array>
#include <string>

#include "framelift/connection.hpp"
#include "framelift/surface.hpp"

// Lift of a conformal surface metric to its orthonormal frame bundle P, in
// the trivialisation (x1, x2, phi) induced by the canonical frame. The lifted
// frame is
//   E_1 = e_1 - c^1_12 d_phi,  E_2 = e_2 - c^2_12 d_phi,  E_3 = K d_phi,
// orthonormal for the lifted metric; nothing depends on phi.
namespace framelift {

inline constexpr double kDefaultKappaMin = 1e-8;

// Rows E_1, E_2, E_3; columns the chart basis (d1, d2, d_phi).
struct LiftedFrame {
  std::array<std::array<double, 3>, 3> m{};
};

struct LiftedStructure {
  StructureTable table;  // dim 3
  BaseGeometry base;
};

// The six independent components <R(E_a, E_b) E_c, E_d> of the lifted curvature.
struct LiftedComponents {
  double r1212 = 0.0;
  double r1213 = 0.0;
  double r1223 = 0.0;
  double r1313 = 0.0;
  double r1323 = 0.0;
  double r2323 = 0.0;

  std::array<double, 6> values() const { return {r1212, r1213, r1223, r1313, r1323, r2323}; }
  static constexpr std::array<const char*, 6> kLabels = {"R1212", "R1213", "R1223", "R1313", "R1323", "R2323"};
};

// Throws SingularCurvature when |K(x)| < kappa_min.
LiftedFrame lifted_frame(const ConformalSurface& surface, Point x, double kappa_min = kDefaultKappaMin);

// d_phi component of the vertical part of [E^h_1, E^h_2], computed from the
// chart bracket of the horizontal lifts. Equals -K(x).
double nonholonomity(const ConformalSurface& surface, Point x);

LiftedStructure lifted_structure(const ConformalSurface& surface, Point x, double kappa_min = kDefaultKappaMin);
// Structure table of the lifted frame from base data; `one` scales the
// constant entry c^3_12 = -1 (pass 0 to isolate the linear part).
StructureTable lifted_structure_table(double c112, double c212, double e1K_over_K, double e2K_over_K,
                                      double one = 1.0);

ConnectionTable lifted_connection(const ConformalSurface& surface, Point x, double kappa_min = kDefaultKappaMin);

// Closed-form lifted curvature from the base curvature and its derivatives.
LiftedComponents lifted_components_closed(const BaseGeometry& base);
// The same six components exactly as they appear in the published table,
// kept for comparison against the oracle.
LiftedComponents lifted_components_printed(const BaseGeometry& base);
LiftedComponents components_of(const CurvatureTable& table);
// Full dim-3 table from six components via pair antisymmetry and pair symmetry.
CurvatureTable assemble_curvature(const LiftedComponents& c);

CurvatureTable lifted_curvature_closed(const ConformalSurface& surface, Point x,
                                       double kappa_min = kDefaultKappaMin);
// Sectional curvature <R(E_i,E_j)E_j,E_i> of a frame plane, zero-based indices.
double lifted_sectional(const ConformalSurface& surface, Point x, int i, int j,
                        double kappa_min = kDefaultKappaMin);

// Coefficient jets of the lifted frame, for the generic bracket/Koszul oracle.
FrameSampler lifted_frame_sampler(const ConformalSurface& surface, double kappa_min = kDefaultKappaMin);
FrameSampler base_frame_sampler(const ConformalSurface& surface);

// Lifted connection coefficients as linear forms over the basis
// {1, c^1_12, c^2_12, e_1K/K, e_2K/K}.
using LinearForm = std::array<double, 5>;
inline constexpr std::array<const char*, 5> kLinearFormBasis = {"1", "c^1_12", "c^2_12", "e1K/K", "e2K/K"};
Table3<LinearForm> lifted_connection_symbolic();
std::string format_linear_form(const LinearForm& form);
// One line per nonzero coefficient, "Gamma^k_ij = ..." with one-based indices.
std::string format_lifted_connection_symbolic();

}  // namespace framelift
