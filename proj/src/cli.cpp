#include "framelift/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "framelift/io.hpp"
#include "framelift/verify.hpp"

namespace framelift::cli {
namespace {

struct UsageError : Error {
  using Error::Error;
};

std::vector<double> parse_list(const std::string& text, std::size_t count, const char* option) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    double v = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (item.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw UsageError(std::string(option) + ": '" + item + "' is not a finite decimal number");
    }
    values.push_back(v);
    pos = comma + 1;
  }
  if (values.size() != count) {
    throw UsageError(std::string(option) + " expects " + std::to_string(count) + " comma-separated numbers");
  }
  return values;
}

ConformalSurface resolve_surface(const std::string& source) {
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), source) != names.end()) return catalog(source);
  std::ifstream probe(source);
  if (!probe) {
    std::string known;
    for (auto n : names) known += (known.empty() ? "" : ", ") + std::string(n);
    throw UsageError("--surface: '" + source + "' is neither a catalog surface (" + known + ") nor a readable file");
  }
  try {
    return io::load_surface_config(source);
  } catch (const ParseError& e) {
    throw UsageError("--surface: " + source + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--surface: ") + e.what());
  }
}

Point parse_point(const std::string& text) {
  const auto v = parse_list(text, 2, "--at");
  return Point{v[0], v[1]};
}

std::string num(double v) { return io::format_number(v); }

// Opens PATH for writing, or returns stdout for "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw UsageError("--out: cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void print_surface_info(std::ostream& out, const ConformalSurface& s, Point x) {
  s.require_inside(x);
  const BaseGeometry g = base_geometry(s, x, FrameDepth::curvature_gradient);
  out << "surface  " << s.name() << '\n'
      << "lambda   " << s.lambda().to_string() << '\n'
      << "guard    " << s.guard().to_string() << '\n'
      << "at       " << format_point(x) << '\n'
      << "lambda(x) " << num(expr::eval(s.lambda(), x)) << '\n'
      << "c^1_12   " << num(g.c112) << '\n'
      << "c^2_12   " << num(g.c212) << '\n'
      << "K        " << num(g.K) << '\n'
      << "e1K      " << num(g.e1K) << '\n'
      << "e2K      " << num(g.e2K) << '\n';
}

void print_lift_table(std::ostream& out, const ConformalSurface& s, Point x, double kappa_min) {
  s.require_inside(x);
  const LiftedFrame frame = lifted_frame(s, x, kappa_min);
  const LiftedStructure ls = lifted_structure(s, x, kappa_min);
  const ConnectionTable gamma = koszul(ls.table);
  const BaseGeometry full = base_geometry(s, x, FrameDepth::full);
  const LiftedComponents r = lifted_components_closed(full);
  const CurvatureTable table = assemble_curvature(r);

  out << "surface " << s.name() << " at " << format_point(x) << "\n\n";
  out << "lifted frame (columns d1, d2, dphi)\n";
  for (int a = 0; a < 3; ++a) {
    out << "  E" << a + 1;
    for (int mu = 0; mu < 3; ++mu) out << ' ' << std::setw(24) << num(frame.m[a][mu]);
    out << '\n';
  }
  out << "\nstructure functions c^k_ij (i < j)\n";
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        out << "  c^" << k + 1 << '_' << i + 1 << j + 1 << " = " << num(ls.table.c[k][i][j]) << '\n';
      }
    }
  }
  out << "\nconnection coefficients Gamma^k_ij (nonzero)\n";
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (gamma.gamma[k][i][j] != 0.0) {
          out << "  Gamma^" << k + 1 << '_' << i + 1 << j + 1 << " = " << num(gamma.gamma[k][i][j]) << '\n';
        }
      }
    }
  }
  out << "\ncurvature <R(E_a,E_b)E_c,E_d>\n";
  const auto values = r.values();
  for (std::size_t n = 0; n < values.size(); ++n) {
    out << "  " << LiftedComponents::kLabels[n] << " = " << num(values[n]) << '\n';
  }
  out << "\nsectional curvature <R(X,Y)Y,X>\n";
  out << "  K(E1^E2) = " << num(sectional(table, 0, 1)) << '\n'
      << "  K(E1^E3) = " << num(sectional(table, 0, 2)) << '\n'
      << "  K(E2^E3) = " << num(sectional(table, 1, 2)) << '\n';
}

Method parse_method(const std::string& m) { return m == "rk45" ? Method::rk45 : Method::rk4; }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wagner lift of conformal surface metrics to the orthonormal frame bundle", "framelift"};
  app.require_subcommand(1);

  std::string surface_src;
  std::string at = "0,0";
  double kappa_min = kDefaultKappaMin;

  auto* surface_cmd = app.add_subcommand("surface", "Base surface geometry");
  surface_cmd->require_subcommand(1);
  auto* info = surface_cmd->add_subcommand("info", "lambda, structure functions, K and its frame derivatives");
  info->add_option("--surface", surface_src, "catalog name or surface config file")->required();
  info->add_option("--at", at, "chart point X1,X2");

  auto* lift_cmd = app.add_subcommand("lift", "Lifted metric on the frame bundle");
  lift_cmd->require_subcommand(1);
  auto* table = lift_cmd->add_subcommand("table", "lifted frame, structure, connection and curvature at a point");
  table->add_option("--surface", surface_src, "catalog name or surface config file")->required();
  table->add_option("--at", at, "chart point X1,X2");
  table->add_option("--kappa-min", kappa_min, "smallest admissible |K|")->check(CLI::PositiveNumber);

  std::string start, velocity, out_path = "-", method = "rk4", format = "csv";
  double t_max = 1.0, step = 1e-3, abs_tol = 1e-9;
  bool wong = false;
  auto add_integration = [&](CLI::App* cmd, const char* start_help, const char* velocity_help) {
    cmd->add_option("--surface", surface_src, "catalog name or surface config file")->required();
    cmd->add_option("--start", start, start_help)->required();
    cmd->add_option("--velocity", velocity, velocity_help)->required();
    cmd->add_option("--t-max", t_max, "integration time")->check(CLI::PositiveNumber);
    cmd->add_option("--step", step, "fixed step (rk4) or initial step (rk45)")->check(CLI::PositiveNumber);
    cmd->add_option("--method", method, "rk4 or rk45")->check(CLI::IsMember({"rk4", "rk45"}));
    cmd->add_option("--abs-tol", abs_tol, "rk45 absolute tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", out_path, "output file, - for stdout");
    cmd->add_flag("--wong", wong, "fill the wong_residual column");
  };
  auto* geodesic = app.add_subcommand("geodesic", "Geodesic of the lifted metric");
  add_integration(geodesic, "X1,X2,PHI", "Q1,Q2,Q3 in the lifted frame");
  geodesic->add_option("--kappa-min", kappa_min, "smallest admissible |K|")->check(CLI::PositiveNumber);
  auto* base_geodesic = app.add_subcommand("base-geodesic", "Geodesic of the base metric");
  add_integration(base_geodesic, "X1,X2", "P1,P2 in the base frame");

  std::size_t samples = 100;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  bool skip_geodesics = false;
  auto* verify = app.add_subcommand("verify", "Cross-check the closed forms against the frame calculus");
  verify->add_option("--surface", surface_src, "catalog name or surface config file")->required();
  verify->add_option("--samples", samples, "number of chart points")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "sampling seed");
  verify->add_option("--tol", tol, "tolerance for the oracle comparisons")->check(CLI::PositiveNumber);
  verify->add_option("--out", out_path, "report file, - for stdout");
  verify->add_flag("--skip-geodesics", skip_geodesics, "lift checks only");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n\n" << app.help();
      return kExitUsage;
    }

    if (*info || *table) {
      const ConformalSurface s = resolve_surface(surface_src);
      const Point x = parse_point(at);
      if (*info) {
        print_surface_info(out, s, x);
      } else {
        print_lift_table(out, s, x, kappa_min);
      }
      return kExitOk;
    }

    if (*geodesic || *base_geodesic) {
      const ConformalSurface s = resolve_surface(surface_src);
      const IntegrationOptions opts{t_max, step, parse_method(method), abs_tol, kappa_min};
      std::optional<Halt> halt;
      std::ostringstream buffer;
      if (*geodesic) {
        const auto x = parse_list(start, 3, "--start");
        const auto q = parse_list(velocity, 3, "--velocity");
        const LiftTrajectory traj = integrate_lift(s, LiftState{x[0], x[1], x[2], q[0], q[1], q[2]}, opts);
        std::optional<WongResidual> residual;
        if (wong) {
          if (traj.samples.size() < 3) throw UsageError("--wong needs at least three samples; lower --step");
          residual = wong_residual(s, project(traj));
        }
        format == "json" ? io::write_json(buffer, traj, residual) : io::write_csv(buffer, traj, residual);
        halt = traj.halt;
      } else {
        const auto x = parse_list(start, 2, "--start");
        const auto p = parse_list(velocity, 2, "--velocity");
        const BaseTrajectory traj = integrate_base(s, BaseState{x[0], x[1], p[0], p[1]}, opts);
        std::optional<WongResidual> residual;
        if (wong) {
          if (traj.samples.size() < 3) throw UsageError("--wong needs at least three samples; lower --step");
          residual = wong_residual(s, traj, 0.0);
        }
        format == "json" ? io::write_json(buffer, traj, residual) : io::write_csv(buffer, traj, residual);
        halt = traj.halt;
      }
      Output sink(out_path, out);
      sink.get() << buffer.str();
      if (halt) {
        err << "error: integration stopped at t = " << num(halt->t_last) << ", point " << format_point(halt->where)
            << ": " << halt->message << '\n';
        return kExitRuntime;
      }
      return kExitOk;
    }

    if (*verify) {
      const ConformalSurface s = resolve_surface(surface_src);
      const LiftReport lift = verify_lift(s, samples, seed, tol);
      std::optional<GeodesicReport> geo;
      if (!skip_geodesics) geo = verify_geodesics(s, seed);
      Output sink(out_path, out);
      sink.get() << io::report_json(lift, geo) << '\n';
      const bool pass = lift.passed() && (!geo || geo->passed());
      return pass ? kExitOk : kExitVerifyFailed;
    }
    err << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what();
    if (e.where()) err << " (point " << format_point(*e.where()) << ")";
    err << '\n';
    return kExitRuntime;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace framelift::cli
