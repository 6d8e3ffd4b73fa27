#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "framelift/geodesic.hpp"
#include "framelift/lift.hpp"
#include "framelift/surface.hpp"

namespace framelift {

// One compared quantity. For upper-bound checks `value` is a max deviation and
// must not exceed `limit`; for lower-bound checks (convergence ratios) it must
// reach it.
struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool lower_bound = false;
  bool pass = false;
  std::string note;
};

Check upper_check(std::string name, double value, double limit, std::string note = {});
Check lower_check(std::string name, double value, double limit, std::string note = {});

// Sectional curvature of a lifted frame plane over all samples.
struct PlaneCurvature {
  int i = 0, j = 0;  // zero-based
  double min = 0.0, max = 0.0;
  int sign = 0;  // -1, 0, +1 of the values; 0 also when they disagree
  bool sign_stable = false;
};

// Published curvature component vs. the oracle.
struct ComponentAgreement {
  std::string label;
  double max_deviation = 0.0;
  bool agrees = false;
};

struct LiftReport {
  std::string surface;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<Check> checks;
  std::array<PlaneCurvature, 3> sectional{};
  double r1212_min = 0.0, r1212_max = 0.0;
  std::vector<ComponentAgreement> printed_components;
  bool passed() const;
};

// Chart points drawn uniformly from the surface's sample box; points outside
// the guard are re-drawn. Same (surface, n, seed) gives the same points on
// every platform.
std::vector<Point> sample_points(const ConformalSurface& surface, std::size_t n, std::uint64_t seed);

// Compares every closed form of the lift against the generic frame calculus
// at `sample_count` seeded points. Points are evaluated concurrently; results
// are merged in sample order.
LiftReport verify_lift(const ConformalSurface& surface, std::size_t sample_count, std::uint64_t seed, double tol,
                       double kappa_min = kDefaultKappaMin);

struct GeodesicReport {
  std::vector<Check> checks;
  double charge_sign = 0.0;
  double printed_sign_wong_residual = 0.0;
  GeodesicEquationComparison equations;
  std::vector<LiftState> conservation_states;
  std::vector<LiftState> horizontal_states;
  bool passed() const;
};

// Fixed-tolerance geodesic invariants:
//   Q3/K drift over [0, 10] at h = 1e-3        <= 1e-6
//   speed drift over [0, 10] at h = 1e-3       <= 1e-8
//   drift ratio between h = 0.05 and h = 0.025 >= 8
//   |Q3| for horizontal starts                 <= 1e-12
//   projection vs. base integrator on [0, 5]   <= 1e-6
//   Wong residual, C = 0.5, on [0, 5]          <= 1e-5 (constant K) or 1e-4
GeodesicReport verify_geodesics(const ConformalSurface& surface, std::uint64_t seed,
                                double kappa_min = kDefaultKappaMin);

inline constexpr int kSuiteStates = 5;
inline constexpr double kSuiteRadius = 4.0;  // trajectories must stay in |x| <= this

}  // namespace framelift
