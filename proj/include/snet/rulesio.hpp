#pragma once

#include "snet/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snet {

inline constexpr std::string_view kMarkerA = "A";
inline constexpr std::string_view kMarkerB = "B";

struct LabeledArc {
  std::string src;
  std::string dst;
  int color = 1;

  bool operator==(const LabeledArc&) const = default;
};

/// A candidate network R_ik. Node "A" is glued to the replaced arc's source,
/// node "B" to its destination; every other node is created fresh.
struct ReplacementNetwork {
  std::vector<std::string> nodes;
  std::vector<LabeledArc> arcs;

  bool operator==(const ReplacementNetwork&) const = default;
};

struct Rule {
  Rational probability;
  ReplacementNetwork network;

  bool operator==(const Rule&) const = default;
};

struct RuleSet {
  int num_colors = 0;
  // rules[i - 1] holds the candidates for color i.
  std::vector<std::vector<Rule>> rules;

  const std::vector<Rule>& for_color(int color) const { return rules.at(static_cast<std::size_t>(color - 1)); }
  bool operator==(const RuleSet&) const = default;
};

struct InitialGraph {
  std::vector<std::string> nodes;
  std::vector<LabeledArc> arcs;

  bool operator==(const InitialGraph&) const = default;
};

struct ConditionReport {
  int color = 0;
  bool condition_a = false;  // some rule has undirected dist(A, B) > 1
  bool condition_b = false;  // some rule has deg(A) > 1 or deg(B) > 1
  std::optional<std::size_t> witness_a;  // 0-based rule index
  std::optional<std::size_t> witness_b;

  bool satisfied() const { return condition_a && condition_b; }
};

struct ParseOptions {
  // When false, structural-condition violations are tolerated (exploratory use).
  bool enforce_structural = true;
};

RuleSet parse_ruleset(std::string_view text, const ParseOptions& options = {});
std::string serialize_ruleset(const RuleSet& rs);

InitialGraph parse_initial_graph(std::string_view text, int num_colors);
std::string serialize_initial_graph(const InitialGraph& g);

std::vector<ConditionReport> check_structural_conditions(const RuleSet& rs);
bool structural_conditions_hold(const RuleSet& rs);

/// Shortest path length between two labels in the underlying undirected
/// multigraph; nullopt when disconnected.
std::optional<std::size_t> undirected_distance(const ReplacementNetwork& net, std::string_view from,
                                               std::string_view to);

/// In-degree plus out-degree over all colors. A self-loop counts twice.
std::size_t node_degree(const ReplacementNetwork& net, std::string_view label);

/// Reads a whole file; throws Error{MalformedFile} when unreadable.
std::string read_text_file(const std::string& path);

}  // namespace snet
