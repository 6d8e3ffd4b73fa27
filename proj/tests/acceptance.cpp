// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "framelift/cli.hpp"
#include "framelift/geodesic.hpp"
#include "framelift/lift.hpp"
#include "framelift/verify.hpp"
#include "oracle.hpp"

namespace fl = framelift;

namespace {

constexpr std::uint64_t kSeed = 20240607;
constexpr double kSectionalTol = 1e-9;
constexpr double kOracleTol = 1e-8;
constexpr double kOracleTolBump = 1e-6;
constexpr double kNonholonomityTol = 1e-9;
constexpr double kInvariantTol = 1e-12;
constexpr double kWongSphereTol = 1e-5;
constexpr double kWongBumpTol = 1e-4;
constexpr double kFdRelTol = 1e-5;
constexpr double kJetRelTol = 1e-12;

const char* const kSurfaces[] = {"sphere", "halfplane", "bump"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double max_over_tables(F&& f) {
  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) worst = std::max(worst, f(a, b, c));
    }
  }
  return worst;
}

const fl::Check& find_check(const fl::GeodesicReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("missing check " + name);
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const fl::ConformalSurface s = fl::catalog("sphere");
  double worst = 0.0;
  for (fl::Point x : fl::sample_points(s, 20, kSeed)) {
    for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
      worst = std::max(worst, std::abs(fl::lifted_sectional(s, x, i, j) - 0.25));
    }
  }
  const double dt = seconds_since(t0);
  return {worst <= kSectionalTol && dt < 1.0,
          "sphere, 20 points, max |K - 0.25| = " + fmt(worst) + " (tol " + fmt(kSectionalTol) + "), " + fmt(dt) +
              " s (limit 1 s)"};
}

Outcome criterion2() {
  const fl::ConformalSurface s = fl::catalog("halfplane");
  double worst = 0.0;
  for (fl::Point x : fl::sample_points(s, 20, kSeed)) {
    const fl::LiftedComponents c = fl::components_of(fl::lifted_curvature_closed(s, x));
    worst = std::max(worst, std::abs(std::abs(c.r1212) - 1.75));
    worst = std::max(worst, std::abs(std::abs(fl::lifted_sectional(s, x, 0, 2)) - 0.25));
    worst = std::max(worst, std::abs(std::abs(fl::lifted_sectional(s, x, 1, 2)) - 0.25));
  }
  const fl::LiftReport r = fl::verify_lift(s, 20, kSeed, kOracleTol);
  bool stable = true;
  std::string signs;
  for (const auto& p : r.sectional) {
    stable = stable && p.sign_stable;
    signs += " K(E" + std::to_string(p.i + 1) + "^E" + std::to_string(p.j + 1) + ")" + (p.sign < 0 ? "<0" : ">0");
  }
  const bool r1212_stable = r.r1212_min > 0 && r.r1212_max > 0;
  return {worst <= kSectionalTol && stable && r1212_stable,
          "halfplane, 20 points, max deviation " + fmt(worst) + " (tol " + fmt(kSectionalTol) + "); R1212 = +" +
              fmt(r.r1212_min) + ";" + signs + (stable ? ", signs stable" : ", signs NOT stable")};
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  for (const char* name : kSurfaces) {
    const fl::ConformalSurface s = fl::catalog(name);
    const double tol = std::string(name) == "bump" ? kOracleTolBump : kOracleTol;
    const fl::FrameSampler sampler = fl::lifted_frame_sampler(s);
    double worst = 0.0;
    for (fl::Point x : fl::sample_points(s, 100, kSeed)) {
      const auto closed = fl::components_of(fl::lifted_curvature_closed(s, x)).values();
      const auto oracle = fl::components_of(fl::curvature(sampler, x)).values();
      for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(closed[k] - oracle[k]));
    }
    out.pass = out.pass && worst <= tol;
    out.detail += std::string(name) + " " + fmt(worst) + " (tol " + fmt(tol) + "), ";
  }
  const double dt = seconds_since(t0);
  out.pass = out.pass && dt < 5.0;
  out.detail += fmt(dt) + " s (limit 5 s)";
  return out;
}

Outcome criterion4() {
  Outcome out;
  for (const char* name : kSurfaces) {
    const fl::ConformalSurface s = fl::catalog(name);
    double worst = 0.0;
    for (fl::Point x : fl::sample_points(s, 100, kSeed)) {
      worst = std::max(worst, std::abs(fl::nonholonomity(s, x) + fl::gauss_curvature(s, x).K));
    }
    out.pass = out.pass && worst <= kNonholonomityTol;
    out.detail += std::string(name) + " max |N + K| = " + fmt(worst) + ", ";
  }
  out.detail += "tol " + fmt(kNonholonomityTol);
  return out;
}

double connection_invariants(const fl::StructureTable& c, const fl::ConnectionTable& g) {
  const int n = c.dim;
  return max_over_tables([&](int k, int i, int j) {
    if (k >= n || i >= n || j >= n) return 0.0;
    return std::max(std::abs(g.gamma[k][i][j] + g.gamma[j][i][k]),
                    std::abs(g.gamma[k][i][j] - g.gamma[k][j][i] - c.c[k][i][j]));
  });
}

Outcome criterion5() {
  Outcome out;
  for (const char* name : kSurfaces) {
    const fl::ConformalSurface s = fl::catalog(name);
    const fl::FrameSampler base = fl::base_frame_sampler(s);
    const fl::FrameSampler lifted = fl::lifted_frame_sampler(s);
    double worst2 = 0.0, worst3 = 0.0;
    for (fl::Point x : fl::sample_points(s, 100, kSeed)) {
      const fl::StructureTable c2 = base.sample(x).table;
      worst2 = std::max(worst2, connection_invariants(c2, fl::koszul(c2)));
      const fl::StructureTable c3 = fl::lifted_structure(s, x).table;
      worst3 = std::max(worst3, connection_invariants(c3, fl::lifted_connection(s, x)));
      const fl::StructureTable b3 = lifted.sample(x).table;
      worst3 = std::max(worst3, connection_invariants(b3, fl::koszul(b3)));
    }
    out.pass = out.pass && worst2 <= kInvariantTol && worst3 <= kInvariantTol;
    out.detail += std::string(name) + " dim2 " + fmt(worst2) + " dim3 " + fmt(worst3) + ", ";
  }
  out.detail += "tol " + fmt(kInvariantTol);
  return out;
}

Outcome criterion6(const std::vector<fl::GeodesicReport>& reports) {
  Outcome out;
  for (std::size_t n = 0; n < reports.size(); ++n) {
    const auto& drift = find_check(reports[n], "conservation_Q3_over_K");
    const auto& speed = find_check(reports[n], "speed_drift");
    const auto& conv = find_check(reports[n], "conservation_convergence");
    const auto& sconv = find_check(reports[n], "speed_convergence");
    out.pass = out.pass && drift.pass && speed.pass && conv.pass && sconv.pass;
    out.detail += std::string(kSurfaces[n]) + ": Q3/K drift " + fmt(drift.value) + ", speed drift " + fmt(speed.value);
    if (conv.note.find("exactly") != std::string::npos) {
      out.detail += ", Q3/K drift at roundoff level at h = 0.025 so no ratio is defined";
    } else {
      out.detail += ", Q3/K drift ratio " + fmt(conv.value);
    }
    out.detail += ", speed drift ratio " + fmt(sconv.value) + "; ";
  }
  out.detail += "limits 1e-06, 1e-08, ratio >= 8";
  return out;
}

Outcome criterion7(const std::vector<fl::GeodesicReport>& reports) {
  Outcome out;
  for (std::size_t n = 0; n < reports.size(); ++n) {
    const auto& proj = find_check(reports[n], "projection_vs_base");
    const auto& horiz = find_check(reports[n], "horizontality");
    out.pass = out.pass && proj.pass && horiz.pass;
    out.detail += std::string(kSurfaces[n]) + " " + fmt(proj.value) + ", ";
  }
  out.detail += "sup-distance limit 1e-06 over t in [0, 5]";
  return out;
}

Outcome criterion8() {
  fl::IntegrationOptions o;
  o.t_max = 5.0;
  o.h = 1e-3;
  const double C = 0.5;
  const fl::ConformalSurface sphere = fl::catalog("sphere");
  const fl::ConformalSurface bump = fl::catalog("bump");
  const fl::BaseTrajectory ps = fl::project(fl::integrate_lift(sphere, {0.3, 0.2, 0, 0.6, 0, C}, o));
  const double K0 = fl::gauss_curvature(bump, {0.3, 0.1}).K;
  const fl::BaseTrajectory pb = fl::project(fl::integrate_lift(bump, {0.3, 0.1, 0, 0.6, 0, C * K0}, o));
  if (ps.halt || pb.halt) return {false, "trajectory halted"};
  const double s = fl::derived_charge_sign();
  const double rs = fl::wong_residual(sphere, ps, C, s).max();
  const double rb = fl::wong_residual(bump, pb, C, s).max();
  const double alt = fl::wong_residual(sphere, ps, C, -s).max();
  return {rs <= kWongSphereTol && rb <= kWongBumpTol,
          "C = 0.5, charge sign " + fmt(s) + ": sphere " + fmt(rs) + " (tol " + fmt(kWongSphereTol) + "), bump " +
              fmt(rb) + " (tol " + fmt(kWongBumpTol) + "); with charge sign " + fmt(-s) + " the sphere residual is " +
              fmt(alt)};
}

Outcome criterion9() {
  const fl::ConformalSurface flat("flat", fl::expr::parse("0.25"), fl::ChartGuard::everywhere());
  const fl::Point x{0.5, -0.25};
  const std::vector<std::pair<const char*, std::function<void()>>> ops = {
      {"lifted_frame", [&] { fl::lifted_frame(flat, x); }},
      {"lifted_structure", [&] { fl::lifted_structure(flat, x); }},
      {"lifted_connection", [&] { fl::lifted_connection(flat, x); }},
      {"lifted_curvature_closed", [&] { fl::lifted_curvature_closed(flat, x); }},
      {"lifted_sectional", [&] { fl::lifted_sectional(flat, x, 0, 1); }},
      {"lifted_frame_sampler", [&] { fl::lifted_frame_sampler(flat).sample(x); }},
      {"verify_lift", [&] { fl::verify_lift(flat, 5, kSeed, kOracleTol); }},
      {"lift_rhs", [&] { fl::lift_rhs(flat, {x.x1, x.x2, 0, 1, 0, 0}); }},
      {"integrate_lift", [&] { fl::integrate_lift(flat, {x.x1, x.x2, 0, 1, 0, 0}, {}); }},
  };
  Outcome out;
  int raised = 0;
  for (const auto& [name, op] : ops) {
    try {
      op();
      out.pass = false;
      out.detail += std::string(name) + " did not raise; ";
    } catch (const fl::SingularCurvature&) {
      ++raised;
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail += std::string(name) + " raised " + e.what() + "; ";
    }
  }
  const auto path = std::filesystem::temp_directory_path() / "framelift_acceptance_flat.json";
  std::ofstream(path) << R"({"name": "flat", "lambda": "0.25", "guard": "all"})";
  const std::string p = path.string();
  const char* argv[] = {"framelift", "lift", "table", "--surface", p.c_str(), "--at", "0.5,-0.25"};
  std::ostringstream cout, cerr;
  const int code = fl::cli::run(7, argv, cout, cerr);
  std::filesystem::remove(path);
  const bool point_shown = cerr.str().find("(0.5, -0.25)") != std::string::npos;
  out.pass = out.pass && code == fl::cli::kExitRuntime && point_shown;
  out.detail += std::to_string(raised) + "/" + std::to_string(ops.size()) +
                " lift operations raise SingularCurvature; CLI exit " + std::to_string(code) +
                (point_shown ? " with point (0.5, -0.25)" : " without the point");
  return out;
}

Outcome criterion10() {
  using fl::expr::parse;
  int failures = 0;
  double poly_dev = 0.0, prod_dev = 0.0, chain_dev = 0.0;
  for (int n = 0; n < 200; ++n) {
    std::mt19937_64 rng(kSeed + n);
    const fl::oracle::Polynomial p = fl::oracle::random_polynomial(rng);
    const fl::Point xp{fl::oracle::uniform(rng, -1.5, 1.5), fl::oracle::uniform(rng, -1.5, 1.5)};
    const fl::Jet jp = fl::expr::eval_jet(parse(p.text), xp, 4);
    const std::string f = fl::oracle::random_smooth_expression(rng, 2);
    const std::string g = fl::oracle::random_smooth_expression(rng, 2);
    const fl::Point x{fl::oracle::uniform(rng, -1, 1), fl::oracle::uniform(rng, -1, 1)};
    const fl::Jet jf = fl::expr::eval_jet(parse(f), x, 4);
    const fl::Jet jg = fl::expr::eval_jet(parse(g), x, 4);
    const fl::Jet fg = fl::expr::eval_jet(parse("(" + f + ") * (" + g + ")"), x, 4);
    const fl::Jet ef = fl::expr::eval_jet(parse("exp(" + f + ")"), x, 4);
    const double ev = std::exp(jf.value());
    const fl::Jet prod = jf * jg;
    const std::array<double, 5> derivs = {ev, ev, ev, ev, ev};
    const fl::Jet composed = fl::compose(jf, derivs);
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; a + b <= 4; ++b) {
        const double want = p.partial(xp, a, b);
        const double d1 = std::abs(jp.partial(a, b) - want) / std::max(1.0, std::abs(want));
        const double d2 = std::abs(fg.partial(a, b) - prod.partial(a, b)) / std::max(1.0, std::abs(prod.partial(a, b)));
        const double d3 =
            std::abs(ef.partial(a, b) - composed.partial(a, b)) / std::max(1.0, std::abs(composed.partial(a, b)));
        poly_dev = std::max(poly_dev, d1);
        prod_dev = std::max(prod_dev, d2);
        chain_dev = std::max(chain_dev, d3);
        failures += (d1 > kJetRelTol) + (d2 > kJetRelTol) + (d3 > kJetRelTol);
      }
    }
    for (int k = 0; k < 20; ++k) {
      const std::string src = k % 2 ? fl::oracle::random_token_soup(rng) : fl::oracle::random_bytes(rng);
      try {
        const fl::expr::Expr e = parse(src);
        if (!(parse(e.to_string()) == e)) ++failures;
        try {
          fl::expr::eval_jet(e, {fl::oracle::uniform(rng, -2, 2), fl::oracle::uniform(rng, -2, 2)}, 4);
        } catch (const fl::DomainError&) {
        }
      } catch (const fl::ParseError& e) {
        if (e.offset() > src.size()) ++failures;
      }
    }
  }
  double fd_dev = 0.0;
  for (int n = 0; n < 50; ++n) {
    std::mt19937_64 rng(kSeed + 1000 + n);
    const fl::expr::Expr e = parse(fl::oracle::random_smooth_expression(rng, 3));
    const fl::Point x{fl::oracle::uniform(rng, -1, 1), fl::oracle::uniform(rng, -1, 1)};
    const fl::Jet j = fl::expr::eval_jet(e, x, 4);
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; a + b <= 4; ++b) {
        const double fd = fl::oracle::fd_partial(e, x, a, b);
        const double d = std::abs(j.partial(a, b) - fd) / std::max(1.0, std::abs(fd));
        fd_dev = std::max(fd_dev, d);
        failures += d > kFdRelTol;
      }
    }
  }
  return {failures == 0, "200 cases with 4000 fuzz inputs, " + std::to_string(failures) +
                             " failures; max rel deviation polynomial " + fmt(poly_dev) + ", product " +
                             fmt(prod_dev) + ", chain " + fmt(chain_dev) + " (tol " + fmt(kJetRelTol) +
                             "); jet vs finite differences on 50 expressions " + fmt(fd_dev) + " (tol " +
                             fmt(kFdRelTol) + ")"};
}

}  // namespace

int main() {
  std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5};
  std::vector<fl::GeodesicReport> reports;
  bool all = true;
  auto report = [&](int n, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  };
  for (int n = 0; n < 5; ++n) report(n + 1, criteria[n]);
  try {
    for (const char* name : kSurfaces) reports.push_back(fl::verify_geodesics(fl::catalog(name), kSeed));
  } catch (const std::exception& e) {
    std::printf("geodesic suite failed: %s\n", e.what());
    reports.clear();
  }
  auto needs_reports = [&](Outcome (*f)(const std::vector<fl::GeodesicReport>&)) {
    return [&reports, f] { return reports.empty() ? Outcome{false, "no geodesic reports"} : f(reports); };
  };
  report(6, needs_reports(criterion6));
  report(7, needs_reports(criterion7));
  report(8, criterion8);
  report(9, criterion9);
  report(10, criterion10);
  return all ? 0 : 1;
}
