#include "framelift/error.hpp"

#include <charconv>
#include <array>

namespace framelift {
namespace {

std::string shortest(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

}  // namespace

std::string format_point(Point p) { return "(" + shortest(p.x1) + ", " + shortest(p.x2) + ")"; }

ParseError::ParseError(std::size_t offset, const std::string& message)
    : Error("parse error at offset " + std::to_string(offset) + ": " + message), offset_(offset), detail_(message) {}

UnknownIdentifier::UnknownIdentifier(std::size_t offset, const std::string& name)
    : ParseError(offset, "unknown identifier '" + name + "'") {}

EvaluationError::EvaluationError(const std::string& message, std::optional<Point> where)
    : Error(message), where_(where) {}

ChartDomainError::ChartDomainError(Point where, const std::string& guard)
    : EvaluationError("point " + format_point(where) + " violates chart guard " + guard, where) {}

SingularCurvature::SingularCurvature(Point where, double curvature)
    : EvaluationError("Gaussian curvature " + shortest(curvature) + " at " + format_point(where) +
                          " is below the lift threshold; the lifted metric is singular on this fiber",
                      where),
      curvature_(curvature) {}

SingularCurvature::SingularCurvature(Point where, double curvature, const std::string& message)
    : EvaluationError(message, where), curvature_(curvature) {}

}  // namespace framelift
