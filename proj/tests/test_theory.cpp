#include <doctest.h>

#include "snet/errors.hpp"
#include "snet/theory.hpp"
#include "support/test_support.hpp"

#include <json.hpp>

#include <cmath>
#include <random>

using namespace snet;
using namespace snet::testing;

namespace {

RuleSet single_rule(std::vector<std::string> nodes, std::vector<LabeledArc> arcs) {
  return RuleSet{1, {{Rule{1, ReplacementNetwork{std::move(nodes), std::move(arcs)}}}}};
}

// Direct counting, written independently of the library.
RationalMatrix oracle_m(const RuleSet& rs) {
  const auto n = static_cast<std::size_t>(rs.num_colors);
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& rule : rs.rules[i])
      for (const auto& arc : rule.network.arcs) rows[i][static_cast<std::size_t>(arc.color - 1)] += rule.probability;
  return RationalMatrix::from_rows(rows);
}

RationalMatrix oracle_n(const RuleSet& rs) {
  const auto n = 2 * static_cast<std::size_t>(rs.num_colors);
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < rs.rules.size(); ++i)
    for (const auto& rule : rs.rules[i])
      for (const auto& arc : rule.network.arcs) {
        const std::size_t out_col = 2 * static_cast<std::size_t>(arc.color - 1);
        if (arc.src == "A") rows[2 * i][out_col] += rule.probability;
        if (arc.dst == "A") rows[2 * i][out_col + 1] += rule.probability;
        if (arc.src == "B") rows[2 * i + 1][out_col] += rule.probability;
        if (arc.dst == "B") rows[2 * i + 1][out_col + 1] += rule.probability;
      }
  return RationalMatrix::from_rows(rows);
}

}  // namespace

TEST_CASE("arc matrix of the two-color example") {
  const auto m = build_arc_matrix(load_rules("fig2_rules.json"));
  CHECK(m == RationalMatrix::from_rows({{1, 3}, {Rational(5, 2), 2}}));
}

TEST_CASE("degree matrix of the two-color example") {
  const auto n = build_degree_matrix(load_rules("fig2_rules.json"));
  const auto expected = RationalMatrix::from_rows({{0, Rational(1, 3), 0, Rational(2, 3)},
                                                   {0, Rational(1, 3), 1, 0},
                                                   {Rational(1, 4), 1, Rational(3, 4), Rational(1, 4)},
                                                   {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(3, 4)}});
  CHECK(n == expected);
  const auto alternate = alternate_degree_matrix();
  CHECK_FALSE(n == alternate);
  CHECK(n.row(2) == alternate.row(2));
  MESSAGE("derived rho(N) = " << spectral_radius(n).rho << ", alternate rho(N) = " << spectral_radius(alternate).rho);
}

TEST_CASE("small matrices by hand") {
  CHECK(build_arc_matrix(single_rule({"A", "x", "B"}, {{"A", "x", 1}, {"x", "B", 1}})) ==
        RationalMatrix::from_rows({{2}}));
  const RuleSet halves{1,
                       {{Rule{Rational(1, 2), {{"A", "B"}, {{"A", "B", 1}}}},
                         Rule{Rational(1, 2), {{"A", "x", "B"}, {{"A", "x", 1}, {"x", "B", 1}, {"x", "x", 1}}}}}}};
  CHECK(build_arc_matrix(halves) == RationalMatrix::from_rows({{2}}));
  CHECK(build_degree_matrix(single_rule({"A", "x", "B"}, {{"A", "x", 1}, {"x", "B", 1}})) ==
        RationalMatrix::identity(2));
  CHECK(build_degree_matrix(single_rule({"A", "B"}, {{"A", "B", 1}, {"A", "B", 1}})) ==
        RationalMatrix::from_rows({{2, 0}, {0, 2}}));
  CHECK(build_degree_matrix(single_rule({"A", "B"}, {{"A", "A", 1}, {"A", "B", 1}})) ==
        RationalMatrix::from_rows({{2, 1}, {0, 1}}));
  CHECK(degree_row(2, true) == 3);
  CHECK(degree_col(1, true) == 1);
}

TEST_CASE("matrices agree with direct counting on random rule sets") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const RuleSet rs = random_ruleset(rng, {.max_colors = 3});
    const auto m = build_arc_matrix(rs);
    CHECK(m == oracle_m(rs));
    CHECK(build_degree_matrix(rs) == oracle_n(rs));
    const auto sums = row_sums(m);
    for (int i = 1; i <= rs.num_colors; ++i) {
      Rational expected = 0;
      for (const auto& rule : rs.for_color(i)) expected += rule.probability * static_cast<long>(rule.network.arcs.size());
      CHECK(sums[static_cast<std::size_t>(i - 1)] == expected);
    }
  }
}

TEST_CASE("analyze the two-color example") {
  const auto r = analyze(load_rules("fig2_rules.json"));
  CHECK(r.hypotheses_met);
  CHECK(r.failures.empty());
  CHECK(r.m_primitive);
  CHECK(r.n_primitive);
  CHECK(r.m_invertible);
  CHECK(r.n_invertible);
  CHECK(std::abs(r.rho_m - 4.283882181415) < 1e-9);
  CHECK(std::abs(r.rho_n - 1.704727703866) < 1e-9);
  REQUIRE(r.degree_dimension.has_value());
  CHECK(std::abs(*r.degree_dimension - std::log(r.rho_m) / std::log(r.rho_n)) < 1e-12);
  CHECK(std::abs(dimension_from_radii(4.2839, 1.7135) - 2.702) < 0.002);
  CHECK_NOTHROW(require_hypotheses(r));

  const auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j["m_matrix"][1][0] == "5/2");
  CHECK(j["hypotheses_met"] == true);
  CHECK(j["rho_m"].get<double>() == doctest::Approx(r.rho_m));
}

TEST_CASE("identity degree matrix fails primitivity") {
  const auto r = analyze(single_rule({"A", "x", "B"}, {{"A", "x", 1}, {"x", "B", 1}}));
  CHECK_FALSE(r.n_primitive);
  CHECK_FALSE(r.hypotheses_met);
  CHECK_FALSE(r.degree_dimension.has_value());
  CHECK(std::find(r.failures.begin(), r.failures.end(), "N not primitive") != r.failures.end());
  CHECK(r.rho_m == doctest::Approx(2.0));
  try {
    require_hypotheses(r);
    FAIL("expected HypothesisFailure");
  } catch (const HypothesisFailure& e) {
    CHECK(e.kind() == ErrorKind::HypothesisFailure);
    CHECK_FALSE(e.report().n_primitive);
  }
}

TEST_CASE("structural failure is reported, growth notes suppressed") {
  const auto r = analyze(single_rule({"A", "B"}, {{"A", "B", 1}}));
  CHECK_FALSE(r.structural_conditions);
  CHECK_FALSE(r.hypotheses_met);
  CHECK(r.rho_m == doctest::Approx(1.0));
  CHECK(r.notes.empty());
}

TEST_CASE("expected arc counts") {
  const auto m = build_arc_matrix(load_rules("fig2_rules.json"));
  const std::vector<Rational> chi0{1, 0};
  CHECK(expected_arc_count(m, chi0, 0) == 1.0);
  CHECK(expected_arc_count(m, chi0, 1) == 4.0);
  CHECK(expected_arc_count(m, chi0, 2) == doctest::Approx(17.5));
}
