#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace framelift {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

std::string format_point(Point p);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Expression text could not be parsed. `offset` is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message);
  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(std::size_t offset, const std::string& name);
};

// Base for failures tied to a chart point; the point is reported by the CLI.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& message, std::optional<Point> where = std::nullopt);
  const std::optional<Point>& where() const noexcept { return where_; }

 private:
  std::optional<Point> where_;
};

// log/sqrt of a non-positive value, division by a zero jet, non-finite results.
class DomainError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class ChartDomainError : public EvaluationError {
 public:
  ChartDomainError(Point where, const std::string& guard);
};

// |K(x)| below the lift threshold: the lifted metric is undefined over this fiber.
class SingularCurvature : public EvaluationError {
 public:
  SingularCurvature(Point where, double curvature);
  SingularCurvature(Point where, double curvature, const std::string& message);
  double curvature() const noexcept { return curvature_; }

 private:
  double curvature_;
};

class StepFailure : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

}  // namespace framelift
