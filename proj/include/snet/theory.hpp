#pragma once

#include "snet/errors.hpp"
#include "snet/linalg.hpp"
#include "snet/rulesio.hpp"

#include <optional>
#include <string>
#include <vector>

namespace snet {

/// Expected per-color arc counts: entry (i, j) = sum_k p_ik * #(j-colored arcs of R_ik).
RationalMatrix build_arc_matrix(const RuleSet& rs);

/// Row index of the (color, endpoint) row of the degree matrix. Rows are
/// ordered (1,A), (1,B), (2,A), (2,B), ...; within color j the columns are
/// (out-degree, in-degree).
inline std::size_t degree_row(int color, bool endpoint_b) {
  return 2 * static_cast<std::size_t>(color - 1) + (endpoint_b ? 1 : 0);
}
inline std::size_t degree_col(int color, bool incoming) {
  return 2 * static_cast<std::size_t>(color - 1) + (incoming ? 1 : 0);
}

/// 2λ x 2λ matrix of expected j-colored out/in arc counts at A and B.
RationalMatrix build_degree_matrix(const RuleSet& rs);

struct TheoryReport {
  RationalMatrix m_matrix;
  RationalMatrix n_matrix;
  double rho_m = 0.0;
  double rho_n = 0.0;
  bool m_primitive = false;
  bool n_primitive = false;
  bool m_invertible = false;
  bool n_invertible = false;
  bool structural_conditions = false;
  bool hypotheses_met = false;
  std::optional<double> degree_dimension;
  std::vector<std::string> failures;  // one entry per failed hypothesis
  std::vector<std::string> notes;
};

/// Builds both matrices and checks the scale-free hypotheses. Always returns
/// a report; failures are listed rather than thrown.
TheoryReport analyze(const RuleSet& rs);

class HypothesisFailure : public Error {
 public:
  explicit HypothesisFailure(TheoryReport report);
  const TheoryReport& report() const noexcept { return report_; }

 private:
  TheoryReport report_;
};

/// Throws HypothesisFailure when !report.hypotheses_met.
void require_hypotheses(const TheoryReport& report);

/// JSON rendering: rationals as "num/den" strings, reals as numbers.
std::string report_to_json(const TheoryReport& report);

/// log(rho_m) / log(rho_n).
double dimension_from_radii(double rho_m, double rho_n);

/// ||chi0 M^t||_1, the expected arc count after t steps.
double expected_arc_count(const RationalMatrix& m, std::span<const Rational> chi0, unsigned t);

}  // namespace snet
