#include "framelift/geodesic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace framelift {
namespace {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double a, const Vec<N>& x) {
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * x[i];
  return out;
}

Vec<6> pack(const LiftState& s) { return {s.x1, s.x2, s.phi, s.q1, s.q2, s.q3}; }
LiftState unpack_lift(const Vec<6>& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }
Vec<4> pack(const BaseState& s) { return {s.x1, s.x2, s.p1, s.p2}; }
BaseState unpack_base(const Vec<4>& v) { return {v[0], v[1], v[2], v[3]}; }

Halt halt_from(const EvaluationError& err, double t_last, Point fallback) {
  HaltReason reason = HaltReason::evaluation;
  if (dynamic_cast<const SingularCurvature*>(&err)) {
    reason = HaltReason::singular_curvature;
  } else if (dynamic_cast<const ChartDomainError*>(&err)) {
    reason = HaltReason::chart_domain;
  } else if (dynamic_cast<const StepFailure*>(&err)) {
    reason = HaltReason::step_failure;
  }
  return Halt{reason, t_last, err.where().value_or(fallback), err.what()};
}

// Generic driver: `rhs` may throw EvaluationError, `sample` builds the
// monitored sample for an accepted state (and may throw as well).
template <std::size_t N, class State>
Trajectory<State> drive(const Vec<N>& y0, const IntegrationOptions& opts,
                        const std::function<Vec<N>(const Vec<N>&)>& rhs,
                        const std::function<Sample<State>(double, const Vec<N>&)>& sample) {
  if (!(opts.h > 0.0) || !std::isfinite(opts.h)) throw InvalidArgument("step size must be positive");
  if (!(opts.t_max > 0.0) || !std::isfinite(opts.t_max)) throw InvalidArgument("t_max must be positive");

  Trajectory<State> traj;
  traj.samples.push_back(sample(0.0, y0));  // invalid initial states throw
  Vec<N> y = y0;
  double t = 0.0;
  auto here = [&] { return Point{y[0], y[1]}; };

  if (opts.method == Method::rk4) {
    const auto steps = static_cast<long>(std::ceil(opts.t_max / opts.h - 1e-9));
    for (long n = 1; n <= steps; ++n) {
      const double t_next = std::min(static_cast<double>(n) * opts.h, opts.t_max);
      const double h = t_next - t;
      try {
        const Vec<N> k1 = rhs(y);
        const Vec<N> k2 = rhs(axpy(y, 0.5 * h, k1));
        const Vec<N> k3 = rhs(axpy(y, 0.5 * h, k2));
        const Vec<N> k4 = rhs(axpy(y, h, k3));
        Vec<N> next;
        for (std::size_t i = 0; i < N; ++i) next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        traj.samples.push_back(sample(t_next, next));
        y = next;
        t = t_next;
      } catch (const EvaluationError& err) {
        traj.halt = halt_from(err, t, here());
        return traj;
      }
    }
    return traj;
  }

  // Dormand-Prince 5(4) with first-same-as-last, absolute error control.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;

  double h = std::min(opts.h, opts.t_max);
  Vec<N> k1;
  try {
    k1 = rhs(y);
  } catch (const EvaluationError& err) {
    traj.halt = halt_from(err, t, here());
    return traj;
  }
  while (t < opts.t_max) {
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      traj.halt = halt_from(StepFailure("adaptive step size underflow", here()), t, here());
      return traj;
    }
    const bool last = t + h >= opts.t_max;
    const double step = last ? opts.t_max - t : h;
    try {
      auto stage = [&](std::initializer_list<std::pair<double, const Vec<N>*>> terms) {
        Vec<N> z = y;
        for (const auto& [a, k] : terms) z = axpy(z, step * a, *k);
        return z;
      };
      const Vec<N> k2 = rhs(stage({{a21, &k1}}));
      const Vec<N> k3 = rhs(stage({{a31, &k1}, {a32, &k2}}));
      const Vec<N> k4 = rhs(stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const Vec<N> k5 = rhs(stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const Vec<N> k6 = rhs(stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      const Vec<N> next = stage({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const Vec<N> k7 = rhs(next);
      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double ei = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        err = std::max(err, std::abs(ei) / opts.abs_tol);
      }
      if (!std::isfinite(err)) throw DomainError("non-finite error estimate", here());
      if (err <= 1.0) {
        const double t_next = last ? opts.t_max : t + step;
        traj.samples.push_back(sample(t_next, next));
        y = next;
        t = t_next;
        k1 = k7;
      }
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = step * factor;
    } catch (const SingularCurvature& err) {
      // A trial stage may leave the admissible region; retry smaller unless
      // the current point itself is bad.
      h = step * 0.25;
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        traj.halt = halt_from(err, t, here());
        return traj;
      }
    } catch (const ChartDomainError& err) {
      h = step * 0.25;
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        traj.halt = halt_from(err, t, here());
        return traj;
      }
    } catch (const EvaluationError& err) {
      traj.halt = halt_from(err, t, here());
      return traj;
    }
  }
  return traj;
}

void require_finite_state(std::initializer_list<double> values, Point x) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("non-finite geodesic state", x);
  }
}

// Published right-hand sides of dQ^k/dt, as quadratic forms over the basis.
struct PrintedTerm {
  int equation, i, j;
  LinearForm form;
};
constexpr std::array<PrintedTerm, 10> kPrinted = {{
    {0, 0, 1, {0, -1, 0, 0, 0}},
    {0, 1, 1, {0, 0, -1, 0, 0}},
    {0, 1, 2, {-1, 0, 0, 0, 0}},
    {0, 2, 2, {0, 0, 0, -1, 0}},
    {1, 0, 0, {0, 1, 0, 0, 0}},
    {1, 0, 1, {0, 0, 1, 0, 0}},
    {1, 0, 2, {1, 0, 0, 0, 0}},
    {1, 2, 2, {0, 0, 0, 0, -1}},
    {2, 0, 2, {0, 0, 0, 1, 0}},
    {2, 1, 2, {0, 0, 0, 0, 1}},
}};

}  // namespace

LiftState lift_rhs(const ConformalSurface& surface, const LiftState& s, double kappa_min) {
  const Point x{s.x1, s.x2};
  require_finite_state({s.x1, s.x2, s.phi, s.q1, s.q2, s.q3}, x);
  const FrameJets f = frame_jets(surface, x, 3);
  const double K = f.K->value();
  if (!(std::abs(K) >= kappa_min)) throw SingularCurvature(x, K);
  const double sc = f.inv_scale.value();
  const double c1 = f.c112.value();
  const double c2 = f.c212.value();
  const double a = frame_derivative(f, *f.K, 1).value() / K;
  const double b = frame_derivative(f, *f.K, 2).value() / K;
  const double q1 = s.q1, q2 = s.q2, q3 = s.q3;

  LiftState d;
  d.x1 = sc * q1;
  d.x2 = sc * q2;
  d.phi = -q1 * c1 - q2 * c2 + q3 * K;
  d.q1 = -c1 * q1 * q2 - c2 * q2 * q2 + q2 * q3 - a * q3 * q3;
  d.q2 = c1 * q1 * q1 + c2 * q1 * q2 - q1 * q3 - b * q3 * q3;
  d.q3 = a * q1 * q3 + b * q2 * q3;
  require_finite_state({d.x1, d.x2, d.phi, d.q1, d.q2, d.q3}, x);
  return d;
}

BaseState base_rhs(const ConformalSurface& surface, const BaseState& b) {
  const Point x{b.x1, b.x2};
  require_finite_state({b.x1, b.x2, b.p1, b.p2}, x);
  const BaseGeometry g = base_geometry(surface, x, FrameDepth::structure);
  StructureTable c;
  c.dim = 2;
  c.c[0][0][1] = g.c112;
  c.c[0][1][0] = -g.c112;
  c.c[1][0][1] = g.c212;
  c.c[1][1][0] = -g.c212;
  const ConnectionTable gamma = koszul(c);
  const double sc = std::exp(-expr::eval(surface.lambda(), x));
  const std::array<double, 2> p = {b.p1, b.p2};
  std::array<double, 2> dp{};
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) dp[k] -= gamma.gamma[k][i][j] * p[i] * p[j];
    }
  }
  BaseState d{sc * b.p1, sc * b.p2, dp[0], dp[1]};
  require_finite_state({d.x1, d.x2, d.p1, d.p2}, x);
  return d;
}

LiftTrajectory integrate_lift(const ConformalSurface& surface, const LiftState& s0, const IntegrationOptions& opts) {
  const double kappa = opts.kappa_min;
  double previous_K = 0.0;
  std::function<Vec<6>(const Vec<6>&)> rhs = [&](const Vec<6>& y) { return pack(lift_rhs(surface, unpack_lift(y), kappa)); };
  std::function<Sample<LiftState>(double, const Vec<6>&)> sample = [&](double t, const Vec<6>& y) {
    const LiftState s = unpack_lift(y);
    const Point x{s.x1, s.x2};
    require_finite_state({s.x1, s.x2, s.phi, s.q1, s.q2, s.q3}, x);
    const double K = base_geometry(surface, x, FrameDepth::curvature).K;
    if (!(std::abs(K) >= kappa)) throw SingularCurvature(x, K);
    // A step across the zero set of K never lands on it.
    if (previous_K * K < 0.0) {
      throw SingularCurvature(x, K, "Gaussian curvature changes sign before " + format_point(x) +
                                        "; the lifted metric is singular where K = 0");
    }
    previous_K = K;
    Sample<LiftState> out{t, s, {}};
    out.monitors.speed = std::sqrt(s.q1 * s.q1 + s.q2 * s.q2 + s.q3 * s.q3);
    out.monitors.q3_over_K = s.q3 / K;
    return out;
  };
  return drive<6, LiftState>(pack(s0), opts, rhs, sample);
}

BaseTrajectory integrate_base(const ConformalSurface& surface, const BaseState& b0, const IntegrationOptions& opts) {
  std::function<Vec<4>(const Vec<4>&)> rhs = [&](const Vec<4>& y) { return pack(base_rhs(surface, unpack_base(y))); };
  std::function<Sample<BaseState>(double, const Vec<4>&)> sample = [&](double t, const Vec<4>& y) {
    const BaseState s = unpack_base(y);
    const Point x{s.x1, s.x2};
    require_finite_state({s.x1, s.x2, s.p1, s.p2}, x);
    surface.require_inside(x);
    Sample<BaseState> out{t, s, {}};
    out.monitors.speed = std::hypot(s.p1, s.p2);
    return out;
  };
  return drive<4, BaseState>(pack(b0), opts, rhs, sample);
}

BaseTrajectory project(const LiftTrajectory& lift) {
  BaseTrajectory out;
  out.halt = lift.halt;
  out.samples.reserve(lift.samples.size());
  for (const auto& s : lift.samples) {
    Sample<BaseState> b{s.t, BaseState{s.state.x1, s.state.x2, s.state.q1, s.state.q2}, {}};
    b.monitors.speed = std::hypot(s.state.q1, s.state.q2);
    b.monitors.q3_over_K = s.monitors.q3_over_K;
    out.samples.push_back(b);
  }
  return out;
}

GeodesicEquationComparison compare_geodesic_equations() {
  const Table3<LinearForm> gamma = lifted_connection_symbolic();
  GeodesicEquationComparison cmp;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        GeodesicTerm term{k, i, j, {}, {}};
        for (std::size_t b = 0; b < 5; ++b) {
          term.derived[b] = -(i == j ? gamma[k][i][i][b] : gamma[k][i][j][b] + gamma[k][j][i][b]);
        }
        for (const auto& p : kPrinted) {
          if (p.equation == k && p.i == i && p.j == j) term.printed = p.form;
        }
        const bool derived_zero = term.derived == LinearForm{};
        const bool printed_zero = term.printed == LinearForm{};
        if (derived_zero && printed_zero) continue;
        cmp.terms.push_back(term);
        if (term.derived != term.printed) cmp.mismatches.push_back(term);
        if (k == 0 && i == 1 && j == 2) cmp.coupling_sign = term.derived[0] / term.printed[0];
      }
    }
  }
  return cmp;
}

double derived_charge_sign() {
  // With Q3 = C K the Q^2 Q^3 term of dQ^1/dt contributes coeff * C K P^2,
  // while s C K J(P) has first component -s C K P^2.
  const Table3<LinearForm> gamma = lifted_connection_symbolic();
  const double coeff = -(gamma[0][1][2][0] + gamma[0][2][1][0]);
  return -coeff;
}

double WongResidual::max() const {
  double m = 0.0;
  for (double v : norm) m = std::max(m, v);
  return m;
}

WongResidual wong_residual(const ConformalSurface& surface, const BaseTrajectory& traj, double C,
                           double charge_sign) {
  const auto& s = traj.samples;
  if (s.size() < 3) throw InvalidArgument("Wong residual needs at least three trajectory samples");
  WongResidual out;
  for (std::size_t n = 1; n + 1 < s.size(); ++n) {
    const double h0 = s[n].t - s[n - 1].t;
    const double h1 = s[n + 1].t - s[n].t;
    auto ddt = [&](double fm, double f0, double fp) {
      return (h0 * h0 * fp - h1 * h1 * fm + (h1 * h1 - h0 * h0) * f0) / (h0 * h1 * (h0 + h1));
    };
    const BaseState& b = s[n].state;
    const Point x{b.x1, b.x2};
    const BaseGeometry g = base_geometry(surface, x, FrameDepth::curvature_gradient);
    StructureTable c;
    c.dim = 2;
    c.c[0][0][1] = g.c112;
    c.c[0][1][0] = -g.c112;
    c.c[1][0][1] = g.c212;
    c.c[1][1][0] = -g.c212;
    const ConnectionTable gamma = koszul(c);
    const std::array<double, 2> p = {b.p1, b.p2};
    std::array<double, 2> accel = {ddt(s[n - 1].state.p1, b.p1, s[n + 1].state.p1),
                                   ddt(s[n - 1].state.p2, b.p2, s[n + 1].state.p2)};
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) accel[k] += gamma.gamma[k][i][j] * p[i] * p[j];
      }
    }
    const std::array<double, 2> jp = {-p[1], p[0]};
    const std::array<double, 2> grad = {g.e1K, g.e2K};
    double sq = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double r = accel[k] - charge_sign * C * g.K * jp[k] + C * C * g.K * grad[k];
      sq += r * r;
    }
    out.t.push_back(s[n].t);
    out.norm.push_back(std::sqrt(sq));
  }
  return out;
}

WongResidual wong_residual(const ConformalSurface& surface, const BaseTrajectory& traj, double C) {
  return wong_residual(surface, traj, C, derived_charge_sign());
}

WongResidual wong_residual(const ConformalSurface& surface, const BaseTrajectory& traj) {
  if (traj.samples.empty() || !traj.samples.front().monitors.q3_over_K) {
    throw InvalidArgument("trajectory carries no Q3/K monitor; pass C explicitly");
  }
  return wong_residual(surface, traj, *traj.samples.front().monitors.q3_over_K);
}

}  // namespace framelift
