#include "framelift/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <thread>

namespace framelift {
namespace {

constexpr double kInvariantTol = 1e-12;
constexpr double kNonholonomityTol = 1e-9;
constexpr double kBaseCurvatureTol = 1e-9;

constexpr double kConservationTol = 1e-6;
constexpr double kSpeedTol = 1e-8;
constexpr double kConvergenceRatio = 8.0;
constexpr double kHorizontalTol = 1e-12;
constexpr double kProjectionTol = 1e-6;
constexpr double kWongTolConstant = 1e-5;
constexpr double kWongTolGeneral = 1e-4;
constexpr double kWongCharge = 0.5;
constexpr double kRoundoffDrift = 1e-13;

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

double lerp(double lo, double hi, double u) { return lo + (hi - lo) * u; }

struct PointResult {
  double structure = 0.0;
  double connection_solve = 0.0;
  double connection_bracket = 0.0;
  double compatibility = 0.0;
  double torsion = 0.0;
  double curvature = 0.0;
  double nonholonomity = 0.0;
  double base_curvature = 0.0;
  std::array<double, 3> sectional{};
  double r1212 = 0.0;
  std::array<double, 6> printed{};
};

void track(double& acc, double v) { acc = std::max(acc, std::abs(v)); }

void invariants(const ConnectionTable& g, const StructureTable& c, PointResult& r) {
  for (int k = 0; k < g.dim; ++k) {
    for (int i = 0; i < g.dim; ++i) {
      for (int j = 0; j < g.dim; ++j) {
        track(r.compatibility, g.gamma[k][i][j] + g.gamma[j][i][k]);
        track(r.torsion, g.gamma[k][i][j] - g.gamma[k][j][i] - c.c[k][i][j]);
      }
    }
  }
}

PointResult evaluate(const ConformalSurface& surface, const FrameSampler& lifted, const FrameSampler& base, Point x,
                     double kappa_min) {
  PointResult r;
  const LiftedStructure ls = lifted_structure(surface, x, kappa_min);
  const StructureSample bracket = lifted.sample(x);
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) track(r.structure, ls.table.c[k][i][j] - bracket.table.c[k][i][j]);
    }
  }

  const ConnectionTable gamma = koszul(ls.table);
  const ConnectionTable solved = solve_levi_civita(ls.table);
  const ConnectionTable from_bracket = koszul(bracket.table);
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        track(r.connection_solve, gamma.gamma[k][i][j] - solved.gamma[k][i][j]);
        track(r.connection_bracket, gamma.gamma[k][i][j] - from_bracket.gamma[k][i][j]);
      }
    }
  }
  invariants(gamma, ls.table, r);
  const StructureSample base_sample = base.sample(x);
  invariants(koszul(base_sample.table), base_sample.table, r);

  const BaseGeometry full = base_geometry(surface, x, FrameDepth::full);
  const LiftedComponents closed = lifted_components_closed(full);
  const LiftedComponents oracle = components_of(curvature(bracket));
  const LiftedComponents printed = lifted_components_printed(full);
  const auto cv = closed.values();
  const auto ov = oracle.values();
  const auto pv = printed.values();
  for (std::size_t n = 0; n < 6; ++n) {
    track(r.curvature, cv[n] - ov[n]);
    r.printed[n] = std::abs(pv[n] - ov[n]);
  }

  r.nonholonomity = std::abs(nonholonomity(surface, x) + full.K);
  const CurvatureTable base_curv = curvature(base_sample);
  r.base_curvature = std::max(std::abs(sectional(base_curv, 0, 1) - full.K),
                              std::abs(conformal_curvature(surface, x) - full.K));

  const CurvatureTable table = assemble_curvature(closed);
  r.sectional = {sectional(table, 0, 1), sectional(table, 0, 2), sectional(table, 1, 2)};
  r.r1212 = closed.r1212;
  return r;
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n));
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double max_drift(const LiftTrajectory& traj, bool speed) {
  const auto& s = traj.samples;
  double drift = 0.0;
  for (const auto& sample : s) {
    const double d = speed ? sample.monitors.speed - s.front().monitors.speed
                           : *sample.monitors.q3_over_K - *s.front().monitors.q3_over_K;
    drift = std::max(drift, std::abs(d));
  }
  return drift;
}

bool stays_in_region(const LiftTrajectory& traj) {
  if (traj.halt) return false;
  return std::all_of(traj.samples.begin(), traj.samples.end(),
                     [](const auto& s) { return std::hypot(s.state.x1, s.state.x2) <= kSuiteRadius; });
}

// Draws initial states until `count` of them give trajectories that stay in
// the suite region; returns the accepted states with their trajectories.
template <class Make>
std::vector<std::pair<LiftState, LiftTrajectory>> draw_states(const ConformalSurface& surface, std::mt19937_64& rng,
                                                              const IntegrationOptions& opts, Make make) {
  std::vector<std::pair<LiftState, LiftTrajectory>> out;
  const SampleBox& box = surface.sample_box();
  for (int attempt = 0; attempt < 200 && static_cast<int>(out.size()) < kSuiteStates; ++attempt) {
    const Point x{lerp(box.x1_min, box.x1_max, uniform(rng)), lerp(box.x2_min, box.x2_max, uniform(rng))};
    const double angle = 2.0 * std::numbers::pi * uniform(rng);
    if (!surface.contains(x)) continue;
    const LiftState s0 = make(x, angle);
    LiftTrajectory traj = integrate_lift(surface, s0, opts);
    if (stays_in_region(traj)) out.emplace_back(s0, std::move(traj));
  }
  if (static_cast<int>(out.size()) < kSuiteStates) {
    throw Error("could not draw " + std::to_string(kSuiteStates) + " geodesic initial states for surface '" +
                surface.name() + "' whose trajectories stay in the suite region");
  }
  return out;
}

}  // namespace

Check upper_check(std::string name, double value, double limit, std::string note) {
  return Check{std::move(name), value, limit, false, std::isfinite(value) && value <= limit, std::move(note)};
}

Check lower_check(std::string name, double value, double limit, std::string note) {
  return Check{std::move(name), value, limit, true, value >= limit, std::move(note)};
}

bool LiftReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool GeodesicReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<Point> sample_points(const ConformalSurface& surface, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const SampleBox& box = surface.sample_box();
  std::vector<Point> points;
  points.reserve(n);
  std::size_t rejected = 0;
  while (points.size() < n) {
    const Point x{lerp(box.x1_min, box.x1_max, uniform(rng)), lerp(box.x2_min, box.x2_max, uniform(rng))};
    if (surface.contains(x)) {
      points.push_back(x);
    } else if (++rejected > 1000 * (n + 1)) {
      throw Error("sample box of surface '" + surface.name() + "' does not meet its chart guard");
    }
  }
  return points;
}

LiftReport verify_lift(const ConformalSurface& surface, std::size_t sample_count, std::uint64_t seed, double tol,
                       double kappa_min) {
  if (sample_count < 1) throw InvalidArgument("sample count must be at least 1");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  const std::vector<Point> points = sample_points(surface, sample_count, seed);
  const FrameSampler lifted = lifted_frame_sampler(surface, kappa_min);
  const FrameSampler base = base_frame_sampler(surface);

  std::vector<PointResult> results(points.size());
  parallel_for(points.size(), [&](std::size_t i) { results[i] = evaluate(surface, lifted, base, points[i], kappa_min); });

  PointResult worst;
  LiftReport report;
  report.surface = surface.name();
  report.samples = sample_count;
  report.seed = seed;
  report.tol = tol;
  report.r1212_min = report.r1212_max = results.front().r1212;
  for (int p = 0; p < 3; ++p) {
    const int i = p < 2 ? 0 : 1;
    const int j = p == 0 ? 1 : 2;
    report.sectional[p] = PlaneCurvature{i, j, results.front().sectional[p], results.front().sectional[p], 0, false};
  }
  for (const PointResult& r : results) {
    worst.structure = std::max(worst.structure, r.structure);
    worst.connection_solve = std::max(worst.connection_solve, r.connection_solve);
    worst.connection_bracket = std::max(worst.connection_bracket, r.connection_bracket);
    worst.compatibility = std::max(worst.compatibility, r.compatibility);
    worst.torsion = std::max(worst.torsion, r.torsion);
    worst.curvature = std::max(worst.curvature, r.curvature);
    worst.nonholonomity = std::max(worst.nonholonomity, r.nonholonomity);
    worst.base_curvature = std::max(worst.base_curvature, r.base_curvature);
    for (std::size_t n = 0; n < 6; ++n) worst.printed[n] = std::max(worst.printed[n], r.printed[n]);
    for (int p = 0; p < 3; ++p) {
      report.sectional[p].min = std::min(report.sectional[p].min, r.sectional[p]);
      report.sectional[p].max = std::max(report.sectional[p].max, r.sectional[p]);
    }
    report.r1212_min = std::min(report.r1212_min, r.r1212);
    report.r1212_max = std::max(report.r1212_max, r.r1212);
  }
  for (auto& plane : report.sectional) {
    const int lo = plane.min > 0.0 ? 1 : (plane.min < 0.0 ? -1 : 0);
    const int hi = plane.max > 0.0 ? 1 : (plane.max < 0.0 ? -1 : 0);
    plane.sign_stable = lo == hi;
    plane.sign = plane.sign_stable ? lo : 0;
  }

  report.checks = {
      upper_check("structure_vs_bracket", worst.structure, tol),
      upper_check("connection_vs_linear_solve", worst.connection_solve, kInvariantTol),
      upper_check("connection_vs_bracket_koszul", worst.connection_bracket, tol),
      upper_check("metric_compatibility", worst.compatibility, kInvariantTol, "dims 2 and 3"),
      upper_check("torsion_identity", worst.torsion, kInvariantTol, "dims 2 and 3"),
      upper_check("curvature_closed_vs_oracle", worst.curvature, tol),
      upper_check("nonholonomity_plus_K", worst.nonholonomity, kNonholonomityTol),
      upper_check("base_curvature_consistency", worst.base_curvature, kBaseCurvatureTol),
  };
  for (std::size_t n = 0; n < 6; ++n) {
    report.printed_components.push_back(
        ComponentAgreement{LiftedComponents::kLabels[n], worst.printed[n], worst.printed[n] <= tol});
  }
  return report;
}

GeodesicReport verify_geodesics(const ConformalSurface& surface, std::uint64_t seed, double kappa_min) {
  GeodesicReport report;
  report.charge_sign = derived_charge_sign();
  report.equations = compare_geodesic_equations();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);

  IntegrationOptions fine{10.0, 1e-3, Method::rk4, 1e-9, kappa_min};
  auto charged = [](Point x, double angle) {
    return LiftState{x.x1, x.x2, 0.0, 0.6 * std::cos(angle), 0.6 * std::sin(angle), 0.8};
  };
  const auto conserved = draw_states(surface, rng, fine, charged);
  double drift = 0.0, speed = 0.0;
  for (const auto& [s0, traj] : conserved) {
    report.conservation_states.push_back(s0);
    drift = std::max(drift, max_drift(traj, false));
    speed = std::max(speed, max_drift(traj, true));
  }
  report.checks.push_back(upper_check("conservation_Q3_over_K", drift, kConservationTol, "t in [0, 10], h = 1e-3"));
  report.checks.push_back(upper_check("speed_drift", speed, kSpeedTol, "t in [0, 10], h = 1e-3"));

  IntegrationOptions coarse = fine;
  coarse.h = 0.05;
  IntegrationOptions halved = fine;
  halved.h = 0.025;
  double drift_coarse = 0.0, drift_halved = 0.0, speed_coarse = 0.0, speed_halved = 0.0;
  for (const auto& entry : conserved) {
    const LiftTrajectory a = integrate_lift(surface, entry.first, coarse);
    const LiftTrajectory b = integrate_lift(surface, entry.first, halved);
    if (a.halt || b.halt) throw Error("coarse-step geodesic left the admissible region");
    drift_coarse = std::max(drift_coarse, max_drift(a, false));
    drift_halved = std::max(drift_halved, max_drift(b, false));
    speed_coarse = std::max(speed_coarse, max_drift(a, true));
    speed_halved = std::max(speed_halved, max_drift(b, true));
  }
  if (drift_halved <= kRoundoffDrift) {
    report.checks.push_back(lower_check("conservation_convergence", kConvergenceRatio, kConvergenceRatio,
                                        "Q3/K drift at roundoff level for h = 0.025; conserved exactly"));
  } else {
    report.checks.push_back(lower_check("conservation_convergence", drift_coarse / drift_halved, kConvergenceRatio,
                                        "Q3/K drift ratio, h = 0.05 vs 0.025"));
  }
  report.checks.push_back(lower_check("speed_convergence", speed_coarse / speed_halved, kConvergenceRatio,
                                      "speed drift ratio, h = 0.05 vs 0.025"));

  IntegrationOptions proj{5.0, 1e-3, Method::rk4, 1e-9, kappa_min};
  auto horizontal = [](Point x, double angle) {
    return LiftState{x.x1, x.x2, 0.0, std::cos(angle), std::sin(angle), 0.0};
  };
  const auto flat = draw_states(surface, rng, proj, horizontal);
  double q3 = 0.0, distance = 0.0, residual0 = 0.0;
  for (const auto& [s0, traj] : flat) {
    report.horizontal_states.push_back(s0);
    for (const auto& s : traj.samples) q3 = std::max(q3, std::abs(s.state.q3));
    const BaseTrajectory projected = project(traj);
    const BaseTrajectory base = integrate_base(surface, BaseState{s0.x1, s0.x2, s0.q1, s0.q2}, proj);
    if (base.halt || base.samples.size() != projected.samples.size()) {
      throw Error("base geodesic integrator stopped early");
    }
    for (std::size_t n = 0; n < base.samples.size(); ++n) {
      const auto& p = projected.samples[n].state;
      const auto& b = base.samples[n].state;
      distance = std::max({distance, std::hypot(p.x1 - b.x1, p.x2 - b.x2), std::hypot(p.p1 - b.p1, p.p2 - b.p2)});
    }
    residual0 = std::max(residual0, wong_residual(surface, projected, 0.0).max());
  }
  report.checks.push_back(upper_check("horizontality", q3, kHorizontalTol));
  report.checks.push_back(upper_check("projection_vs_base", distance, kProjectionTol, "t in [0, 5]"));
  report.checks.push_back(upper_check("base_geodesic_residual", residual0, kWongTolConstant, "C = 0"));

  bool constant_K = true;
  auto wong_state = [&](Point x, double angle) {
    const BaseGeometry g = base_geometry(surface, x, FrameDepth::curvature_gradient);
    constant_K = constant_K && std::abs(g.e1K) <= 1e-12 && std::abs(g.e2K) <= 1e-12;
    return LiftState{x.x1, x.x2, 0.0, 0.6 * std::cos(angle), 0.6 * std::sin(angle), kWongCharge * g.K};
  };
  const auto charged_paths = draw_states(surface, rng, proj, wong_state);
  double residual = 0.0, printed = 0.0;
  for (const auto& entry : charged_paths) {
    const BaseTrajectory projected = project(entry.second);
    residual = std::max(residual, wong_residual(surface, projected, kWongCharge, report.charge_sign).max());
    printed = std::max(printed, wong_residual(surface, projected, kWongCharge, 1.0).max());
  }
  report.printed_sign_wong_residual = printed;
  report.checks.push_back(upper_check("wong_residual", residual, constant_K ? kWongTolConstant : kWongTolGeneral,
                                      "C = 0.5, t in [0, 5]"));
  return report;
}

}  // namespace framelift
