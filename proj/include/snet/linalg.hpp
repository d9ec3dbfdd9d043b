#pragma once

#include "snet/rational.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace snet {

/// Dense square matrix of exact rationals, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

  static RationalMatrix identity(std::size_t dim);
  /// Throws Error{DimensionMismatch} unless rows form a square.
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  std::size_t dim() const noexcept { return dim_; }
  Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

  std::vector<Rational> row(std::size_t i) const;
  std::vector<double> to_doubles() const;  // row-major

  bool operator==(const RationalMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Rational> entries_;
};

RationalMatrix mat_mul(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix mat_pow(const RationalMatrix& x, unsigned exponent);
/// Row vector times matrix: (v X)_j = sum_i v_i X_ij.
std::vector<Rational> vec_mul(std::span<const Rational> v, const RationalMatrix& x);
RationalMatrix transpose(const RationalMatrix& x);

/// Exact determinant via fraction-free (Bareiss) elimination on an integer
/// rescaling of the rows.
Rational determinant(const RationalMatrix& x);
bool is_invertible(const RationalMatrix& x);
/// Throws Error{NotInvertible} for singular input.
RationalMatrix inverse(const RationalMatrix& x);

bool is_nonnegative(const RationalMatrix& x);
/// Nonnegative and x^((n-1)^2 + 1) entrywise positive, checked on the
/// boolean support pattern.
bool is_primitive(const RationalMatrix& x);
std::vector<Rational> row_sums(const RationalMatrix& x);

struct SpectralResult {
  double rho = 0.0;
  std::vector<double> left_vector;  // positive, sums to 1, v X = rho v
  std::size_t iterations = 0;
  double residual = 0.0;  // ||v X - rho v||_1 / ||v||_1
};

inline constexpr double kDefaultSpectralTol = 1e-12;
inline constexpr std::size_t kDefaultSpectralMaxIter = 100000;

/// Power iteration on the left from the all-ones vector. Requires a
/// primitive matrix (Error{NotPrimitive}); Error{NoConvergence} past max_iter.
SpectralResult spectral_radius(const RationalMatrix& x, double tol = kDefaultSpectralTol,
                               std::size_t max_iter = kDefaultSpectralMaxIter);

/// Spectral radius of any nonnegative matrix: maximum over the strongly
/// connected blocks of the support graph, each solved by shifted power
/// iteration (B + I is primitive for irreducible B).
double perron_root(const RationalMatrix& x, double tol = kDefaultSpectralTol,
                   std::size_t max_iter = kDefaultSpectralMaxIter);

/// min_i and max_i of [X w]_i / w_i (w a column vector).
std::pair<double, double> collatz_bounds(const RationalMatrix& x, std::span<const double> w);

}  // namespace snet
