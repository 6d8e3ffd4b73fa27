#pragma once

#include <optional>
#include <string>
#include <vector>

#include "framelift/lift.hpp"
#include "framelift/surface.hpp"

namespace framelift {

// Point of P with velocity Q^i E_i in lifted-frame components.
struct LiftState {
  double x1 = 0.0, x2 = 0.0, phi = 0.0;
  double q1 = 0.0, q2 = 0.0, q3 = 0.0;
};

// Point of M with velocity P^a e_a in base-frame components.
struct BaseState {
  double x1 = 0.0, x2 = 0.0;
  double p1 = 0.0, p2 = 0.0;
};

struct Monitors {
  double speed = 0.0;
  std::optional<double> q3_over_K;
  std::optional<double> wong_residual;
};

template <class State>
struct Sample {
  double t = 0.0;
  State state;
  Monitors monitors;
};

enum class HaltReason { singular_curvature, chart_domain, step_failure, evaluation };

// Why integration stopped before t_max; t_last is the last accepted sample.
struct Halt {
  HaltReason reason;
  double t_last;
  Point where;
  std::string message;
};

template <class State>
struct Trajectory {
  std::vector<Sample<State>> samples;
  std::optional<Halt> halt;
};

using LiftTrajectory = Trajectory<LiftState>;
using BaseTrajectory = Trajectory<BaseState>;

enum class Method { rk4, rk45 };

struct IntegrationOptions {
  double t_max = 1.0;
  double h = 1e-3;  // fixed step for rk4, initial step for rk45
  Method method = Method::rk4;
  double abs_tol = 1e-9;  // rk45 only
  double kappa_min = kDefaultKappaMin;
};

// Geodesic vector field of the lifted metric:
//   dx/dt   = exp(-lambda) (Q1, Q2)
//   dphi/dt = -Q1 c^1_12 - Q2 c^2_12 + Q3 K
//   dQ^k/dt = -Gamma^k_ij Q^i Q^j
// with the Koszul coefficients of the lifted frame. Throws SingularCurvature or
// ChartDomainError for an invalid state.
LiftState lift_rhs(const ConformalSurface& surface, const LiftState& s, double kappa_min = kDefaultKappaMin);
BaseState base_rhs(const ConformalSurface& surface, const BaseState& b);

// Throws for an invalid initial state or options; failures along the path end
// the trajectory early with a Halt record.
LiftTrajectory integrate_lift(const ConformalSurface& surface, const LiftState& s0, const IntegrationOptions& opts);
BaseTrajectory integrate_base(const ConformalSurface& surface, const BaseState& b0, const IntegrationOptions& opts);

// Drops (phi, Q3); P^a = Q^a. The Q3/K monitor is carried along.
BaseTrajectory project(const LiftTrajectory& lift);

// Comparison of the geodesic equations obtained from the Koszul connection
// with the published component equations, term by term. Each equation is a
// quadratic form in Q whose coefficients are linear forms over
// kLinearFormBasis.
struct GeodesicTerm {
  int equation;  // k in dQ^k/dt, zero-based
  int i, j;      // monomial Q^i Q^j, i <= j, zero-based
  LinearForm derived;
  LinearForm printed;
};
struct GeodesicEquationComparison {
  std::vector<GeodesicTerm> terms;  // every monomial with a nonzero side
  std::vector<GeodesicTerm> mismatches;
  // derived / printed ratio of the Q^2 Q^3 term of dQ^1/dt: the sign of the
  // magnetic coupling in the projected equation relative to the printed one.
  double coupling_sign = 0.0;
};
GeodesicEquationComparison compare_geodesic_equations();

// Sign s such that projected lift geodesics satisfy
//   nabla_{dgamma} dgamma = s C K J(dgamma) - C^2 K grad K,
// read off the derived equations.
double derived_charge_sign();

// Residual norms of nabla_{dgamma} dgamma - s C K J(dgamma) + C^2 K grad K at
// the interior samples, with the covariant derivative built from three-point
// differences of the sampled P^a. J(P1, P2) = (-P2, P1).
struct WongResidual {
  std::vector<double> t;
  std::vector<double> norm;
  double max() const;
};
WongResidual wong_residual(const ConformalSurface& surface, const BaseTrajectory& traj, double C,
                           double charge_sign);
WongResidual wong_residual(const ConformalSurface& surface, const BaseTrajectory& traj, double C);
// C read from the first sample's Q3/K monitor.
WongResidual wong_residual(const ConformalSurface& surface, const BaseTrajectory& traj);

}  // namespace framelift
