#include "framelift/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace framelift::io {
namespace {

using nlohmann::ordered_json;

std::string field_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("surface config is missing \"") + key + "\"");
  if (!j[key].is_string()) throw InvalidArgument(std::string("surface config field \"") + key + "\" must be a string");
  return j[key].get<std::string>();
}

// Residuals exist for interior samples only; look them up by sample time.
std::string residual_at(const std::optional<WongResidual>& wong, std::size_t index, std::size_t count) {
  if (!wong || index == 0 || index + 1 >= count || index - 1 >= wong->norm.size()) return {};
  return format_number(wong->norm[index - 1]);
}

ordered_json halt_json(const std::optional<Halt>& halt) {
  if (!halt) return nullptr;
  return ordered_json{{"reason", halt_reason_name(halt->reason)},
                      {"t_last", halt->t_last},
                      {"x1", halt->where.x1},
                      {"x2", halt->where.x2},
                      {"message", halt->message}};
}

void write_halt_comment(std::ostream& out, const std::optional<Halt>& halt) {
  if (!halt) return;
  out << "# halted: " << halt_reason_name(halt->reason) << " after t = " << format_number(halt->t_last) << " at "
      << format_point(halt->where) << ": " << halt->message << '\n';
}

ordered_json checks_json(const std::vector<Check>& checks) {
  ordered_json out = ordered_json::array();
  for (const Check& c : checks) {
    ordered_json j{{"name", c.name}, {"value", c.value}};
    j[c.lower_bound ? "minimum" : "tolerance"] = c.limit;
    j["pass"] = c.pass;
    if (!c.note.empty()) j["note"] = c.note;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace

ConformalSurface parse_surface_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("surface config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("surface config must be a JSON object");
  const std::string name = field_string(j, "name");
  expr::Expr lambda = expr::parse(field_string(j, "lambda"));
  ChartGuard guard = ChartGuard::parse(field_string(j, "guard"));
  SampleBox box;
  if (j.contains("box")) {
    const auto& b = j["box"];
    if (!b.is_array() || b.size() != 4 || !std::all_of(b.begin(), b.end(), [](const auto& v) { return v.is_number(); })) {
      throw InvalidArgument("surface config field \"box\" must be [x1_min, x1_max, x2_min, x2_max]");
    }
    box = SampleBox{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
    if (!(box.x1_min < box.x1_max) || !(box.x2_min < box.x2_max)) {
      throw InvalidArgument("surface config box must have min < max on both axes");
    }
  }
  return ConformalSurface(name, std::move(lambda), std::move(guard), box);
}

ConformalSurface load_surface_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open surface config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_surface_config(text.str());
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

double reduce_angle(double phi) {
  const double r = std::fmod(phi, 2.0 * std::numbers::pi);
  return r < 0.0 ? r + 2.0 * std::numbers::pi : r;
}

std::string halt_reason_name(HaltReason r) {
  switch (r) {
    case HaltReason::singular_curvature:
      return "singular_curvature";
    case HaltReason::chart_domain:
      return "chart_domain";
    case HaltReason::step_failure:
      return "step_failure";
    case HaltReason::evaluation:
      return "evaluation";
  }
  return "unknown";
}

void write_csv(std::ostream& out, const LiftTrajectory& traj, const std::optional<WongResidual>& wong) {
  out << "t,x1,x2,phi,Q1,Q2,Q3,speed,Q3_over_K,wong_residual\n";
  const std::size_t n = traj.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = traj.samples[i];
    out << format_number(s.t) << ',' << format_number(s.state.x1) << ',' << format_number(s.state.x2) << ','
        << format_number(reduce_angle(s.state.phi)) << ',' << format_number(s.state.q1) << ','
        << format_number(s.state.q2) << ',' << format_number(s.state.q3) << ',' << format_number(s.monitors.speed)
        << ',' << (s.monitors.q3_over_K ? format_number(*s.monitors.q3_over_K) : "") << ','
        << residual_at(wong, i, n) << '\n';
  }
  write_halt_comment(out, traj.halt);
}

void write_csv(std::ostream& out, const BaseTrajectory& traj, const std::optional<WongResidual>& wong) {
  out << "t,x1,x2,phi,Q1,Q2,Q3,speed,Q3_over_K,wong_residual\n";
  const std::size_t n = traj.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = traj.samples[i];
    out << format_number(s.t) << ',' << format_number(s.state.x1) << ',' << format_number(s.state.x2) << ",,"
        << format_number(s.state.p1) << ',' << format_number(s.state.p2) << ",," << format_number(s.monitors.speed)
        << ",," << residual_at(wong, i, n) << '\n';
  }
  write_halt_comment(out, traj.halt);
}

void write_json(std::ostream& out, const LiftTrajectory& traj, const std::optional<WongResidual>& wong) {
  ordered_json samples = ordered_json::array();
  const std::size_t n = traj.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = traj.samples[i];
    ordered_json j{{"t", s.t},          {"x1", s.state.x1}, {"x2", s.state.x2},
                   {"phi", reduce_angle(s.state.phi)},     {"Q1", s.state.q1}, {"Q2", s.state.q2},
                   {"Q3", s.state.q3},  {"speed", s.monitors.speed}};
    j["Q3_over_K"] = s.monitors.q3_over_K ? ordered_json(*s.monitors.q3_over_K) : ordered_json(nullptr);
    const std::string r = residual_at(wong, i, n);
    j["wong_residual"] = r.empty() ? ordered_json(nullptr) : ordered_json(wong->norm[i - 1]);
    samples.push_back(std::move(j));
  }
  out << ordered_json{{"kind", "lift"}, {"samples", samples}, {"halt", halt_json(traj.halt)}}.dump(1) << '\n';
}

void write_json(std::ostream& out, const BaseTrajectory& traj, const std::optional<WongResidual>& wong) {
  ordered_json samples = ordered_json::array();
  const std::size_t n = traj.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = traj.samples[i];
    ordered_json j{{"t", s.t},          {"x1", s.state.x1}, {"x2", s.state.x2},
                   {"P1", s.state.p1},  {"P2", s.state.p2}, {"speed", s.monitors.speed}};
    const std::string r = residual_at(wong, i, n);
    j["wong_residual"] = r.empty() ? ordered_json(nullptr) : ordered_json(wong->norm[i - 1]);
    samples.push_back(std::move(j));
  }
  out << ordered_json{{"kind", "base"}, {"samples", samples}, {"halt", halt_json(traj.halt)}}.dump(1) << '\n';
}

std::string report_json(const LiftReport& lift, const std::optional<GeodesicReport>& geodesic) {
  ordered_json planes = ordered_json::array();
  for (const auto& p : lift.sectional) {
    planes.push_back(ordered_json{{"plane", "E" + std::to_string(p.i + 1) + "^E" + std::to_string(p.j + 1)},
                                  {"min", p.min},
                                  {"max", p.max},
                                  {"sign", p.sign},
                                  {"sign_stable", p.sign_stable}});
  }
  ordered_json printed = ordered_json::array();
  for (const auto& c : lift.printed_components) {
    printed.push_back(ordered_json{{"component", c.label}, {"max_deviation", c.max_deviation}, {"agrees", c.agrees}});
  }
  ordered_json out{{"surface", lift.surface},
                   {"samples", lift.samples},
                   {"seed", lift.seed},
                   {"tol", lift.tol},
                   {"lift_checks", checks_json(lift.checks)},
                   {"sectional_curvature", planes},
                   {"R1212", ordered_json{{"min", lift.r1212_min}, {"max", lift.r1212_max}}},
                   {"published_components_vs_oracle", printed}};
  bool pass = lift.passed();
  if (geodesic) {
    ordered_json mismatches = ordered_json::array();
    for (const auto& m : geodesic->equations.mismatches) {
      mismatches.push_back(ordered_json{
          {"equation", "dQ" + std::to_string(m.equation + 1) + "/dt"},
          {"monomial", "Q" + std::to_string(m.i + 1) + "Q" + std::to_string(m.j + 1)},
          {"derived", format_linear_form(m.derived)},
          {"published", format_linear_form(m.printed)}});
    }
    out["geodesic_checks"] = checks_json(geodesic->checks);
    out["geodesic_equations"] = ordered_json{{"published_terms_matching", geodesic->equations.mismatches.empty()},
                                             {"mismatches", mismatches},
                                             {"coupling_sign_vs_published", geodesic->equations.coupling_sign},
                                             {"wong_charge_sign", geodesic->charge_sign},
                                             {"wong_residual_with_published_sign", geodesic->printed_sign_wong_residual}};
    pass = pass && geodesic->passed();
  }
  out["pass"] = pass;
  return out.dump(2);
}

}  // namespace framelift::io
