#pragma once

#include "snet/rulesio.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace snet {

using NodeId = std::uint32_t;

struct Arc {
  NodeId src = 0;
  NodeId dst = 0;
  std::uint8_t color = 1;

  bool operator==(const Arc&) const = default;
};

/// Directed multigraph with colored arcs. Nodes are 0..num_nodes()-1 and
/// birth[v] is the step at which v first appeared.
struct ColoredDigraph {
  int num_colors = 1;
  std::uint32_t step = 0;
  std::vector<std::uint32_t> birth;
  std::vector<Arc> arcs;

  std::size_t num_nodes() const noexcept { return birth.size(); }
  bool operator==(const ColoredDigraph&) const = default;
};

/// Nodes take ids in declaration order, all with birth step 0.
ColoredDigraph from_initial_graph(const InitialGraph& init, int num_colors);

/// Replacement networks flattened for fast instantiation: endpoint code 0 is
/// A, 1 is B, 2 + k is the k-th internal node.
class Substituter {
 public:
  explicit Substituter(const RuleSet& rs);

  /// Rule index chosen for arc `arc_index` of color `color` at step `step`.
  std::size_t choose(int color, std::uint64_t arc_index, std::uint32_t step, std::uint64_t seed) const;

  /// G^{t+1} from G^t. Output is independent of `threads`.
  ColoredDigraph step(const ColoredDigraph& g, std::uint64_t seed, unsigned threads = 1) const;

  int num_colors() const noexcept { return static_cast<int>(colors_.size()); }

 private:
  struct CompiledArc {
    std::uint32_t src;
    std::uint32_t dst;
    std::uint8_t color;
  };
  struct CompiledRule {
    std::uint32_t internal_nodes = 0;
    std::vector<CompiledArc> arcs;
  };
  struct CompiledColor {
    std::vector<CompiledRule> rules;
    std::vector<std::uint64_t> thresholds;  // cumulative numerators over `denominator`
    std::uint64_t denominator = 1;
  };
  std::vector<CompiledColor> colors_;
};

ColoredDigraph substitute_step(const ColoredDigraph& g, const RuleSet& rs, std::uint64_t seed, unsigned threads = 1);

struct SummaryRow {
  std::uint32_t t = 0;
  std::uint64_t nodes = 0;
  std::uint64_t arcs = 0;
  std::vector<std::uint64_t> arcs_per_color;  // χ(G^t)
  std::uint64_t max_degree = 0;               // Δ(G^t)
};

struct GenerationSummary {
  std::vector<SummaryRow> rows;
};

SummaryRow summarize(const ColoredDigraph& g);
/// Header `t,nodes,arcs,arcs_c1..arcs_cλ,max_degree`.
void write_summary_csv(std::ostream& out, const GenerationSummary& summary, int num_colors);

inline constexpr std::uint64_t kDefaultBudgetBytes = 4ULL << 30;
/// Bytes charged per expected arc in the pre-flight check: two arc arrays
/// live during a step, plus node and degree bookkeeping.
inline constexpr std::uint64_t kBytesPerArc = 40;

struct GenerateOptions {
  bool keep_intermediate = false;
  unsigned threads = 1;
  std::uint64_t budget_bytes = kDefaultBudgetBytes;
};

struct GenerationResult {
  ColoredDigraph graph;
  GenerationSummary summary;
  std::vector<ColoredDigraph> history;  // G^0..G^{t-1} when keep_intermediate
};

/// Estimated peak bytes for generating t_max steps from `init`.
double estimate_generation_bytes(const InitialGraph& init, const RuleSet& rs, unsigned t_max, bool keep_intermediate);

/// Throws Error{BudgetExceeded} before allocating when the estimate exceeds
/// the budget, Error{UnknownColor} for arcs without rules.
GenerationResult generate(const InitialGraph& init, const RuleSet& rs, unsigned t_max, std::uint64_t seed,
                          const GenerateOptions& options = {});

/// Undirected degree of every node; self-loops count 2.
std::vector<std::uint64_t> undirected_degrees(const ColoredDigraph& g);

/// χ(v): entry 2(j-1) is the j-colored out-degree, 2(j-1)+1 the in-degree.
std::vector<std::uint64_t> degree_vector(const ColoredDigraph& g, NodeId node);

}  // namespace snet
