#include "snet/theory.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace snet {

RationalMatrix build_arc_matrix(const RuleSet& rs) {
  const auto lambda = static_cast<std::size_t>(rs.num_colors);
  RationalMatrix m(lambda);
  for (int i = 1; i <= rs.num_colors; ++i) {
    for (const auto& rule : rs.for_color(i)) {
      for (const auto& arc : rule.network.arcs) {
        m(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(arc.color - 1)) += rule.probability;
      }
    }
  }
  return m;
}

RationalMatrix build_degree_matrix(const RuleSet& rs) {
  RationalMatrix n(2 * static_cast<std::size_t>(rs.num_colors));
  for (int i = 1; i <= rs.num_colors; ++i) {
    for (const auto& rule : rs.for_color(i)) {
      for (const auto& arc : rule.network.arcs) {
        for (const bool at_b : {false, true}) {
          const std::string_view marker = at_b ? kMarkerB : kMarkerA;
          const auto row = degree_row(i, at_b);
          if (arc.src == marker) n(row, degree_col(arc.color, false)) += rule.probability;
          if (arc.dst == marker) n(row, degree_col(arc.color, true)) += rule.probability;
        }
      }
    }
  }
  return n;
}

namespace {

double radius_of(const RationalMatrix& x, bool primitive) {
  return primitive ? spectral_radius(x).rho : perron_root(x);
}

}  // namespace

TheoryReport analyze(const RuleSet& rs) {
  TheoryReport r;
  r.m_matrix = build_arc_matrix(rs);
  r.n_matrix = build_degree_matrix(rs);
  r.m_primitive = is_primitive(r.m_matrix);
  r.n_primitive = is_primitive(r.n_matrix);
  r.m_invertible = is_invertible(r.m_matrix);
  r.n_invertible = is_invertible(r.n_matrix);
  r.structural_conditions = structural_conditions_hold(rs);
  r.rho_m = radius_of(r.m_matrix, r.m_primitive);
  r.rho_n = radius_of(r.n_matrix, r.n_primitive);

  if (!r.structural_conditions) r.failures.emplace_back("structural conditions (a)/(b) not satisfied");
  if (!r.m_primitive) r.failures.emplace_back("M not primitive");
  if (!r.n_primitive) r.failures.emplace_back("N not primitive");
  if (!r.m_invertible) r.failures.emplace_back("M not invertible");
  if (!r.n_invertible) r.failures.emplace_back("N not invertible");
  r.hypotheses_met = r.failures.empty();

  if (r.structural_conditions) {
    if (!(r.rho_m > 1.0)) r.notes.emplace_back("rho(M) <= 1 although structural conditions hold");
    if (!(r.rho_n > 1.0)) r.notes.emplace_back("rho(N) <= 1 although structural conditions hold");
    const auto sums = row_sums(r.n_matrix);
    for (std::size_t row = 0; row < sums.size(); ++row) {
      if (sums[row] <= 1) {
        r.notes.push_back("row sum of N at (" + std::to_string(row / 2 + 1) + "," + (row % 2 ? "B" : "A") +
                          ") is " + (sums[row].get_den() == 1 ? sums[row].get_num().get_str() : format_rational(sums[row])) + ", not greater than 1");
      }
    }
  }
  if (r.hypotheses_met && r.rho_n > 1.0) r.degree_dimension = dimension_from_radii(r.rho_m, r.rho_n);
  return r;
}

namespace {

std::string failure_summary(const TheoryReport& report) {
  std::string s;
  for (const auto& f : report.failures) s += (s.empty() ? "" : "; ") + f;
  return s;
}

}  // namespace

HypothesisFailure::HypothesisFailure(TheoryReport report)
    : Error(ErrorKind::HypothesisFailure, failure_summary(report)), report_(std::move(report)) {}

void require_hypotheses(const TheoryReport& report) {
  if (!report.hypotheses_met) throw HypothesisFailure(report);
}

double dimension_from_radii(double rho_m, double rho_n) { return std::log(rho_m) / std::log(rho_n); }

double expected_arc_count(const RationalMatrix& m, std::span<const Rational> chi0, unsigned t) {
  std::vector<Rational> v(chi0.begin(), chi0.end());
  for (unsigned s = 0; s < t; ++s) v = vec_mul(v, m);
  Rational total = std::accumulate(v.begin(), v.end(), Rational(0));
  return total.get_d();
}

namespace {

nlohmann::ordered_json matrix_json(const RationalMatrix& x) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < x.dim(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < x.dim(); ++j) row.push_back(format_rational(x(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string report_to_json(const TheoryReport& report) {
  nlohmann::ordered_json j;
  j["m_matrix"] = matrix_json(report.m_matrix);
  j["n_matrix"] = matrix_json(report.n_matrix);
  j["rho_m"] = report.rho_m;
  j["rho_n"] = report.rho_n;
  j["m_primitive"] = report.m_primitive;
  j["n_primitive"] = report.n_primitive;
  j["m_invertible"] = report.m_invertible;
  j["n_invertible"] = report.n_invertible;
  j["structural_conditions"] = report.structural_conditions;
  j["hypotheses_met"] = report.hypotheses_met;
  if (report.degree_dimension) {
    j["degree_dimension"] = *report.degree_dimension;
  } else {
    j["degree_dimension"] = nullptr;
  }
  j["failures"] = report.failures;
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

}  // namespace snet
