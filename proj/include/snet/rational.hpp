#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace snet {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses a strict "num/den" string (optional leading '-', den > 0). Decimal
/// notation is rejected. Throws Error{MalformedFile}.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; integers are written as "n/1".
std::string format_rational(const Rational& q);

}  // namespace snet
