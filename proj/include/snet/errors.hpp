#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace snet {

enum class ErrorKind {
  MalformedFile,
  ProbabilitySum,
  MissingEndpoint,
  UnknownColor,
  StructuralCondition,
  EmptyGraph,
  DimensionMismatch,
  NotPrimitive,
  NoConvergence,
  NonpositiveVector,
  NotInvertible,
  Overflow,
  BudgetExceeded,
  UnknownNode,
  InsufficientBins,
  HypothesisFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as snet::Error; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace snet
