#include <doctest.h>

#include "snet/errors.hpp"
#include "snet/generator.hpp"
#include "snet/graph_io.hpp"
#include "snet/process.hpp"
#include "snet/theory.hpp"
#include "support/test_support.hpp"

#include <cmath>
#include <sstream>

using namespace snet;
using namespace snet::testing;

namespace {

const RuleSet& example() {
  static const RuleSet rs = load_rules("fig2_rules.json");
  return rs;
}

const RuleSet& path_rule() {
  static const RuleSet rs = load_rules("path_rules.json", false);
  return rs;
}

ColoredDigraph single_arc(int color = 1, int num_colors = 2) {
  ColoredDigraph g;
  g.num_colors = num_colors;
  g.birth = {0, 0};
  g.arcs = {{0, 1, static_cast<std::uint8_t>(color)}};
  return g;
}

std::uint64_t seed_where(const Substituter& sub, int color, std::size_t rule) {
  for (std::uint64_t seed = 0;; ++seed)
    if (sub.choose(color, 0, 0, seed) == rule) return seed;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected snet::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("one step from a red arc reproduces the chosen rule") {
  const Substituter sub(example());
  const auto seed = seed_where(sub, 1, 0);
  const auto g1 = sub.step(single_arc(), seed);
  CHECK(g1.step == 1);
  CHECK(g1.num_nodes() == 6);
  CHECK(g1.birth == std::vector<std::uint32_t>{0, 0, 1, 1, 1, 1});
  // A = 0, B = 1, n1..n4 = 2..5.
  const std::vector<Arc> expected{{2, 0, 1}, {4, 3, 1}, {4, 1, 1}, {2, 5, 2}, {2, 3, 2}, {1, 3, 2}};
  CHECK(g1.arcs == expected);
  const auto row = summarize(g1);
  CHECK(row.arcs_per_color == std::vector<std::uint64_t>{3, 3});
  CHECK(row.max_degree == 3);
  CHECK(degree_vector(g1, 0) == std::vector<std::uint64_t>{0, 1, 0, 0});
  CHECK(degree_vector(g1, 2) == std::vector<std::uint64_t>{1, 0, 2, 0});

  const auto other = sub.step(single_arc(), seed_where(sub, 1, 1));
  CHECK(other.num_nodes() == 4);
  CHECK(other.arcs.size() == 3);
}

TEST_CASE("second generation matching the drawn mix has 28 arcs") {
  const Substituter sub(example());
  const auto seed = [&] {
    for (std::uint64_t s = 0; s < 100000; ++s) {
      if (sub.choose(1, 0, 0, s) != 0) continue;
      const auto g1 = sub.step(single_arc(), s);
      std::vector<int> used(4, 0);
      for (std::size_t i = 0; i < g1.arcs.size(); ++i) {
        const int c = g1.arcs[i].color;
        ++used[static_cast<std::size_t>(2 * (c - 1)) + sub.choose(c, i, 1, s)];
      }
      if (used == std::vector<int>{1, 2, 2, 1}) return s;
    }
    return std::uint64_t{~0ULL};
  }();
  REQUIRE(seed != ~0ULL);
  const auto g2 = sub.step(sub.step(single_arc(), seed), seed);
  CHECK(g2.arcs.size() == 28);
  CHECK(g2.num_nodes() == 22);
}

TEST_CASE("path rule doubles") {
  const auto init = load_init("single_arc_init.json", 1);
  const auto result = generate(init, path_rule(), 10, 1);
  REQUIRE(result.summary.rows.size() == 11);
  std::uint64_t nodes = 2;
  for (unsigned t = 0; t <= 10; ++t) {
    CHECK(result.summary.rows[t].arcs == (1ULL << t));
    CHECK(result.summary.rows[t].nodes == nodes);
    nodes += 1ULL << t;
  }
}

TEST_CASE("self-loop substitution") {
  ColoredDigraph g;
  g.num_colors = 1;
  g.birth = {0};
  g.arcs = {{0, 0, 1}};
  const auto g1 = substitute_step(g, path_rule(), 3);
  CHECK(g1.num_nodes() == 2);
  CHECK(g1.arcs == std::vector<Arc>{{0, 1, 1}, {1, 0, 1}});
  CHECK(degree_vector(g, 0) == std::vector<std::uint64_t>{1, 1});
  CHECK(undirected_degrees(g) == std::vector<std::uint64_t>{2});
}

TEST_CASE("zero steps returns the initial graph") {
  const auto init = load_init("fig2_init.json", 2);
  const auto result = generate(init, example(), 0, 9);
  CHECK(result.graph == from_initial_graph(init, 2));
  CHECK(result.summary.rows.size() == 1);
}

TEST_CASE("degree vectors") {
  ColoredDigraph g;
  g.num_colors = 2;
  g.birth = {0, 0, 0};
  g.arcs = {{0, 1, 2}};
  CHECK(degree_vector(g, 2) == std::vector<std::uint64_t>{0, 0, 0, 0});
  CHECK(degree_vector(g, 1) == std::vector<std::uint64_t>{0, 0, 0, 1});
  CHECK(kind_of([&] { degree_vector(g, 3); }) == ErrorKind::UnknownNode);
}

TEST_CASE("errors") {
  auto g = single_arc(3, 3);
  CHECK(kind_of([&] { substitute_step(g, example(), 1); }) == ErrorKind::UnknownColor);
  const auto init = load_init("fig2_init.json", 2);
  CHECK(kind_of([&] { generate(init, example(), 40, 1); }) == ErrorKind::BudgetExceeded);
  CHECK(kind_of([&] { generate(init, example(), 8, 1, {.budget_bytes = 1000}); }) == ErrorKind::BudgetExceeded);
  CHECK(estimate_generation_bytes(init, example(), 2, false) ==
        doctest::Approx(static_cast<double>(kBytesPerArc) * 17.5));
}

TEST_CASE("endpoint conservation and birth steps") {
  const auto init = load_init("fig2_init.json", 2);
  const auto result = generate(init, example(), 5, 13, {.keep_intermediate = true});
  REQUIRE(result.history.size() == 5);
  for (std::size_t t = 1; t < result.history.size(); ++t) {
    const auto& prev = result.history[t - 1];
    const auto& cur = result.history[t];
    CHECK(cur.step == t);
    REQUIRE(cur.num_nodes() >= prev.num_nodes());
    CHECK(std::equal(prev.birth.begin(), prev.birth.end(), cur.birth.begin()));
    for (std::size_t v = prev.num_nodes(); v < cur.num_nodes(); ++v) CHECK(cur.birth[v] == t);
    for (const auto& a : cur.arcs) {
      CHECK(a.src < cur.num_nodes());
      CHECK(a.dst < cur.num_nodes());
    }
  }
  for (std::size_t t = 1; t < result.summary.rows.size(); ++t)
    CHECK(result.summary.rows[t].nodes >= result.summary.rows[t - 1].nodes);
}

TEST_CASE("output does not depend on thread count") {
  const auto init = load_init("fig2_init.json", 2);
  const auto base = generate(init, example(), 7, 17, {.threads = 1});
  REQUIRE(base.graph.arcs.size() > 8 * 1024);
  for (unsigned threads : {2u, 3u, 8u}) {
    const auto other = generate(init, example(), 7, 17, {.threads = threads});
    CHECK(other.graph == base.graph);
  }
  CHECK(generate(init, example(), 7, 18).graph != base.graph);
}

TEST_CASE("arc counts stay near the mean growth") {
  const auto init = load_init("fig2_init.json", 2);
  const double rho5 = std::pow(analyze(example()).rho_m, 5);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto arcs = static_cast<double>(generate(init, example(), 5, seed).graph.arcs.size());
    CHECK(arcs <= 10 * rho5);
    CHECK(arcs >= rho5 / 10);
  }
}

TEST_CASE("expected counts, node recursion and coupling with the arc process") {
  const auto init = load_init("fig2_init.json", 2);
  const auto m = build_arc_matrix(example());
  const auto spec = arc_process_spec(example());
  constexpr unsigned kT = 4;
  constexpr int kRuns = 2000;

  std::vector<std::vector<Moments>> graph(kT + 1, std::vector<Moments>(2)), proc(kT + 1, std::vector<Moments>(2));
  std::vector<Moments> new_nodes(kT + 1);
  for (int r = 0; r < kRuns; ++r) {
    const auto result = generate(init, example(), kT, trial_seed(100, r));
    const auto alphas = simulate_alphas(spec, {1, 0}, kT, trial_seed(200, r));
    for (unsigned t = 0; t <= kT; ++t) {
      for (std::size_t j = 0; j < 2; ++j) {
        graph[t][j].add(static_cast<double>(result.summary.rows[t].arcs_per_color[j]));
        proc[t][j].add(static_cast<double>(alphas[t][j]));
      }
      if (t > 0)
        new_nodes[t].add(static_cast<double>(result.summary.rows[t].nodes - result.summary.rows[t - 1].nodes));
    }
  }

  // w_i = sum_k p_ik (|V(R_ik)| - 2)
  std::vector<Rational> w;
  for (int i = 1; i <= 2; ++i) {
    Rational s = 0;
    for (const auto& rule : example().for_color(i)) s += rule.probability * static_cast<long>(rule.network.nodes.size() - 2);
    w.push_back(s);
  }

  std::vector<Rational> chi{1, 0};
  for (unsigned t = 0; t <= kT; ++t) {
    CAPTURE(t);
    for (std::size_t j = 0; j < 2; ++j) {
      CAPTURE(j);
      CHECK(within_se(graph[t][j].mean, chi[j].get_d(), graph[t][j].stderr_mean()));
      const double diff_se = std::hypot(graph[t][j].stderr_mean(), proc[t][j].stderr_mean());
      CHECK(within_se(graph[t][j].mean, proc[t][j].mean, diff_se));
      if (proc[t][j].variance() == 0) {
        CHECK(graph[t][j].variance() == 0);
      } else {
        CHECK(std::abs(graph[t][j].variance() / proc[t][j].variance() - 1) < 0.25);
      }
    }
    const auto next = vec_mul(chi, m);
    if (t < kT) {
      const double expected_new = Rational(chi[0] * w[0] + chi[1] * w[1]).get_d();
      CHECK(within_se(new_nodes[t + 1].mean, expected_new, new_nodes[t + 1].stderr_mean()));
    }
    chi = next;
  }
}

TEST_CASE("graph json-lines round trip") {
  const auto init = load_init("fig2_init.json", 2);
  const auto g = generate(init, example(), 3, 5).graph;
  std::ostringstream out;
  write_graph_jsonl(out, g);
  CHECK(read_graph_jsonl(out.str()) == g);
  const std::string first_line = out.str().substr(0, out.str().find('\n'));
  CHECK(first_line == R"({"type":"meta","t":3,"num_colors":2})");
  CHECK(kind_of([] { read_graph_jsonl("{\"type\":\"node\"}\n"); }) == ErrorKind::MalformedFile);
  CHECK(kind_of([] { read_graph_jsonl(R"({"type":"meta","t":0,"num_colors":1}
{"type":"arc","src":0,"dst":1,"color":1}
)"); }) == ErrorKind::UnknownNode);
}

TEST_CASE("summary csv") {
  GenerationSummary s;
  s.rows.push_back(summarize(single_arc(2)));
  std::ostringstream out;
  write_summary_csv(out, s, 2);
  CHECK(out.str() == "t,nodes,arcs,arcs_c1,arcs_c2,max_degree\n0,2,1,0,1,1\n");
}
