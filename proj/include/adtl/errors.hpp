#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adtl {

enum class ErrorKind {
  DegenerateSkeleton,
  NonFiniteValue,
  EmptyBox,
  OutOfFrame,
  ZeroVector,
  ZeroSum,
  DegenerateGeometry,
  ShapeMismatch,
  NegativeLossTerm,
  EmptyCandidateList,
  InfeasiblePlacement,
  FileNotFound,
  MalformedRecord,
  NoPredictionSource,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// One violated invariant, located by a dotted field path such as
// "skeleton.fingertip/skeleton.mcp" or "candidates[2].box".
struct Violation {
  ErrorKind kind;
  std::string field;
  std::string detail;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown by validate_scene. kind() reports the first violation; the full
// list is available through violations().
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<Violation> violations_;
};

}  // namespace adtl
