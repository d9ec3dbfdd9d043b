#include "snet/generator.hpp"

#include "snet/errors.hpp"
#include "snet/rng.hpp"
#include "snet/theory.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace snet {

ColoredDigraph from_initial_graph(const InitialGraph& init, int num_colors) {
  ColoredDigraph g;
  g.num_colors = num_colors;
  g.birth.assign(init.nodes.size(), 0);
  std::map<std::string, NodeId> ids;
  for (std::size_t v = 0; v < init.nodes.size(); ++v) ids.emplace(init.nodes[v], static_cast<NodeId>(v));
  for (const auto& a : init.arcs) {
    if (a.color < 1 || a.color > num_colors) {
      throw Error(ErrorKind::UnknownColor, "initial arc has color " + std::to_string(a.color));
    }
    const auto s = ids.find(a.src);
    const auto d = ids.find(a.dst);
    if (s == ids.end() || d == ids.end()) throw Error(ErrorKind::UnknownNode, "initial arc endpoint not declared");
    g.arcs.push_back({s->second, d->second, static_cast<std::uint8_t>(a.color)});
  }
  return g;
}

Substituter::Substituter(const RuleSet& rs) {
  for (int color = 1; color <= rs.num_colors; ++color) {
    CompiledColor cc;
    if (rs.for_color(color).size() > std::numeric_limits<std::uint16_t>::max()) {
      throw Error(ErrorKind::InvalidArgument, "too many rules for color " + std::to_string(color));
    }
    BigInt lcm = 1;
    for (const auto& rule : rs.for_color(color)) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), rule.probability.get_den_mpz_t());
    }
    if (!lcm.fits_ulong_p()) {
      throw Error(ErrorKind::InvalidArgument, "probability denominators for color " + std::to_string(color) +
                                                  " exceed 64 bits");
    }
    cc.denominator = lcm.get_ui();
    std::uint64_t cumulative = 0;
    for (const auto& rule : rs.for_color(color)) {
      const BigInt share = rule.probability.get_num() * (lcm / rule.probability.get_den());
      cumulative += share.get_ui();
      cc.thresholds.push_back(cumulative);

      CompiledRule cr;
      std::map<std::string, std::uint32_t> code{{std::string(kMarkerA), 0}, {std::string(kMarkerB), 1}};
      for (const auto& label : rule.network.nodes) {
        if (label != kMarkerA && label != kMarkerB) code.emplace(label, 2 + cr.internal_nodes++);
      }
      for (const auto& a : rule.network.arcs) {
        cr.arcs.push_back({code.at(a.src), code.at(a.dst), static_cast<std::uint8_t>(a.color)});
      }
      cc.rules.push_back(std::move(cr));
    }
    colors_.push_back(std::move(cc));
  }
}

std::size_t Substituter::choose(int color, std::uint64_t arc_index, std::uint32_t step, std::uint64_t seed) const {
  const auto& cc = colors_[static_cast<std::size_t>(color - 1)];
  if (cc.rules.size() == 1) return 0;
  rng::CounterEngine eng(rng::derive_key(seed, rng::Stream::ArcSubstitution, {step, arc_index}));
  const std::uint64_t u = rng::uniform_below(eng, cc.denominator);
  return static_cast<std::size_t>(std::upper_bound(cc.thresholds.begin(), cc.thresholds.end(), u) -
                                  cc.thresholds.begin());
}

ColoredDigraph Substituter::step(const ColoredDigraph& g, std::uint64_t seed, unsigned threads) const {
  const std::size_t num_arcs = g.arcs.size();
  for (const auto& a : g.arcs) {
    if (a.color < 1 || a.color > num_colors()) {
      throw Error(ErrorKind::UnknownColor, "arc color " + std::to_string(a.color) + " has no rules");
    }
  }
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, num_arcs / 1024 + 1));
  std::vector<std::size_t> bounds(workers + 1);
  for (std::size_t w = 0; w <= workers; ++w) bounds[w] = num_arcs * w / workers;

  auto run = [workers](auto&& body) {
    if (workers == 1) {
      body(0);
      return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body, w);
  };

  // Pass 1: sample rules and count what each chunk will emit.
  std::vector<std::uint16_t> choice(num_arcs);
  std::vector<std::uint64_t> chunk_nodes(workers, 0), chunk_arcs(workers, 0);
  run([&](std::size_t w) {
    for (std::size_t e = bounds[w]; e < bounds[w + 1]; ++e) {
      const auto& arc = g.arcs[e];
      const auto k = choose(arc.color, e, g.step, seed);
      choice[e] = static_cast<std::uint16_t>(k);
      const auto& rule = colors_[arc.color - 1].rules[k];
      chunk_nodes[w] += rule.internal_nodes;
      chunk_arcs[w] += rule.arcs.size();
    }
  });

  // Prefix sums give every chunk a contiguous id and arc range.
  std::vector<std::uint64_t> node_base(workers + 1, g.num_nodes()), arc_base(workers + 1, 0);
  for (std::size_t w = 0; w < workers; ++w) {
    node_base[w + 1] = node_base[w] + chunk_nodes[w];
    arc_base[w + 1] = arc_base[w] + chunk_arcs[w];
  }
  if (node_base[workers] > std::numeric_limits<NodeId>::max()) {
    throw Error(ErrorKind::BudgetExceeded, "node count exceeds 32-bit ids");
  }

  ColoredDigraph next;
  next.num_colors = g.num_colors;
  next.step = g.step + 1;
  next.birth = g.birth;
  next.birth.resize(node_base[workers], next.step);
  next.arcs.resize(arc_base[workers]);

  // Pass 2: instantiate. A -> src, B -> dst, internal nodes -> fresh ids.
  run([&](std::size_t w) {
    auto fresh = static_cast<NodeId>(node_base[w]);
    std::size_t out = arc_base[w];
    for (std::size_t e = bounds[w]; e < bounds[w + 1]; ++e) {
      const auto& arc = g.arcs[e];
      const auto& rule = colors_[arc.color - 1].rules[choice[e]];
      auto resolve = [&](std::uint32_t c) -> NodeId {
        if (c == 0) return arc.src;
        if (c == 1) return arc.dst;
        return fresh + (c - 2);
      };
      for (const auto& ra : rule.arcs) next.arcs[out++] = {resolve(ra.src), resolve(ra.dst), ra.color};
      fresh += rule.internal_nodes;
    }
  });
  return next;
}

ColoredDigraph substitute_step(const ColoredDigraph& g, const RuleSet& rs, std::uint64_t seed, unsigned threads) {
  return Substituter(rs).step(g, seed, threads);
}

std::vector<std::uint64_t> undirected_degrees(const ColoredDigraph& g) {
  std::vector<std::uint64_t> deg(g.num_nodes(), 0);
  for (const auto& a : g.arcs) {
    ++deg[a.src];
    ++deg[a.dst];
  }
  return deg;
}

std::vector<std::uint64_t> degree_vector(const ColoredDigraph& g, NodeId node) {
  if (node >= g.num_nodes()) throw Error(ErrorKind::UnknownNode, "node " + std::to_string(node) + " does not exist");
  std::vector<std::uint64_t> chi(2 * static_cast<std::size_t>(g.num_colors), 0);
  for (const auto& a : g.arcs) {
    if (a.src == node) ++chi[degree_col(a.color, false)];
    if (a.dst == node) ++chi[degree_col(a.color, true)];
  }
  return chi;
}

SummaryRow summarize(const ColoredDigraph& g) {
  SummaryRow row;
  row.t = g.step;
  row.nodes = g.num_nodes();
  row.arcs = g.arcs.size();
  row.arcs_per_color.assign(static_cast<std::size_t>(g.num_colors), 0);
  for (const auto& a : g.arcs) ++row.arcs_per_color[a.color - 1];
  const auto deg = undirected_degrees(g);
  row.max_degree = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  return row;
}

void write_summary_csv(std::ostream& out, const GenerationSummary& summary, int num_colors) {
  out << "t,nodes,arcs";
  for (int c = 1; c <= num_colors; ++c) out << ",arcs_c" << c;
  out << ",max_degree\n";
  for (const auto& r : summary.rows) {
    out << r.t << ',' << r.nodes << ',' << r.arcs;
    for (const auto n : r.arcs_per_color) out << ',' << n;
    out << ',' << r.max_degree << '\n';
  }
}

double estimate_generation_bytes(const InitialGraph& init, const RuleSet& rs, unsigned t_max, bool keep_intermediate) {
  const auto m = build_arc_matrix(rs);
  std::vector<Rational> chi(static_cast<std::size_t>(rs.num_colors));
  for (const auto& a : init.arcs) chi[static_cast<std::size_t>(a.color - 1)] += 1;
  double peak = 0.0;
  double total = 0.0;
  for (unsigned t = 0; t <= t_max; ++t) {
    double arcs = 0.0;
    for (const auto& c : chi) arcs += c.get_d();
    peak = std::max(peak, arcs);
    total += arcs;
    if (t < t_max) chi = vec_mul(chi, m);
  }
  return static_cast<double>(kBytesPerArc) * (keep_intermediate ? total : peak);
}

GenerationResult generate(const InitialGraph& init, const RuleSet& rs, unsigned t_max, std::uint64_t seed,
                          const GenerateOptions& options) {
  const double estimate = estimate_generation_bytes(init, rs, t_max, options.keep_intermediate);
  if (estimate > static_cast<double>(options.budget_bytes)) {
    const double arcs = estimate / static_cast<double>(kBytesPerArc);
    std::ostringstream msg;
    msg << std::setprecision(4) << "estimated " << arcs << " arcs (" << estimate << " bytes) exceeds budget of "
        << options.budget_bytes << " bytes";
    throw Error(ErrorKind::BudgetExceeded, msg.str());
  }
  const Substituter sub(rs);
  GenerationResult result;
  result.graph = from_initial_graph(init, rs.num_colors);
  result.summary.rows.push_back(summarize(result.graph));
  for (unsigned t = 0; t < t_max; ++t) {
    auto next = sub.step(result.graph, seed, options.threads);
    if (options.keep_intermediate) {
      result.history.push_back(std::move(result.graph));
    }
    result.graph = std::move(next);
    result.summary.rows.push_back(summarize(result.graph));
  }
  return result;
}

}  // namespace snet
