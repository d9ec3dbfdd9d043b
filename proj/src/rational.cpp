#include "snet/rational.hpp"

#include "snet/errors.hpp"

#include <algorithm>
#include <cctype>

namespace snet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::ProbabilitySum: return "ProbabilitySum";
    case ErrorKind::MissingEndpoint: return "MissingEndpoint";
    case ErrorKind::UnknownColor: return "UnknownColor";
    case ErrorKind::StructuralCondition: return "StructuralCondition";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NonpositiveVector: return "NonpositiveVector";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::InsufficientBins: return "InsufficientBins";
    case ErrorKind::HypothesisFailure: return "HypothesisFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw Error(ErrorKind::MalformedFile, "expected rational \"num/den\", got \"" + std::string(text) + "\"");
  }
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  bool negative = false;
  if (!num.empty() && num.front() == '-') {
    negative = true;
    num.remove_prefix(1);
  }
  if (!all_digits(num) || !all_digits(den)) {
    throw Error(ErrorKind::MalformedFile, "expected rational \"num/den\", got \"" + std::string(text) + "\"");
  }
  BigInt n(std::string(num), 10);
  BigInt d(std::string(den), 10);
  if (d == 0) {
    throw Error(ErrorKind::MalformedFile, "zero denominator in \"" + std::string(text) + "\"");
  }
  Rational q(negative ? BigInt(-n) : n, d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace snet
