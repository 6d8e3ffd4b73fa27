#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "framelift/geodesic.hpp"
#include "framelift/surface.hpp"
#include "framelift/verify.hpp"

namespace framelift::io {

// {"name": ..., "lambda": "<expr>", "guard": "all" | "<expr> > 0",
//  "box": [x1_min, x1_max, x2_min, x2_max]}; "box" is optional.
ConformalSurface parse_surface_config(std::string_view json_text);
ConformalSurface load_surface_config(const std::string& path);

// Shortest form that keeps 17 significant digits.
std::string format_number(double v);
double reduce_angle(double phi);

// Columns t,x1,x2,phi,Q1,Q2,Q3,speed,Q3_over_K,wong_residual. Base
// trajectories leave phi, Q3 and Q3_over_K empty.
void write_csv(std::ostream& out, const LiftTrajectory& traj, const std::optional<WongResidual>& wong = std::nullopt);
void write_csv(std::ostream& out, const BaseTrajectory& traj, const std::optional<WongResidual>& wong = std::nullopt);
void write_json(std::ostream& out, const LiftTrajectory& traj, const std::optional<WongResidual>& wong = std::nullopt);
void write_json(std::ostream& out, const BaseTrajectory& traj, const std::optional<WongResidual>& wong = std::nullopt);

std::string halt_reason_name(HaltReason r);

std::string report_json(const LiftReport& lift, const std::optional<GeodesicReport>& geodesic);

}  // namespace framelift::io
