#include "snet/rulesio.hpp"

#include "snet/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace snet {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::MalformedFile, where + ": " + what);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedFile, std::string("invalid JSON: ") + e.what());
  }
}

int parse_color(const json& value, int num_colors, const std::string& where) {
  if (!value.is_number_integer()) malformed(where, "arc color must be an integer");
  const auto color = value.get<long long>();
  if (color < 1 || color > num_colors) {
    throw Error(ErrorKind::UnknownColor,
                where + ": color " + std::to_string(color) + " outside 1.." + std::to_string(num_colors));
  }
  return static_cast<int>(color);
}

std::vector<std::string> parse_nodes(const json& obj, const std::string& where) {
  if (!obj.contains("nodes") || !obj["nodes"].is_array()) malformed(where, "missing \"nodes\" array");
  std::vector<std::string> nodes;
  std::set<std::string> seen;
  for (const auto& n : obj["nodes"]) {
    if (!n.is_string()) malformed(where, "node labels must be strings");
    auto label = n.get<std::string>();
    if (!seen.insert(label).second) malformed(where, "duplicate node label \"" + label + "\"");
    nodes.push_back(std::move(label));
  }
  return nodes;
}

std::vector<LabeledArc> parse_arcs(const json& obj, const std::vector<std::string>& nodes, int num_colors,
                                   const std::string& where) {
  if (!obj.contains("arcs") || !obj["arcs"].is_array()) malformed(where, "missing \"arcs\" array");
  const std::set<std::string> declared(nodes.begin(), nodes.end());
  std::vector<LabeledArc> arcs;
  for (const auto& a : obj["arcs"]) {
    if (!a.is_array() || a.size() != 3 || !a[0].is_string() || !a[1].is_string()) {
      malformed(where, "arcs must be [source, destination, color] triples");
    }
    LabeledArc arc{a[0].get<std::string>(), a[1].get<std::string>(), parse_color(a[2], num_colors, where)};
    for (const auto* endpoint : {&arc.src, &arc.dst}) {
      if (!declared.count(*endpoint)) malformed(where, "arc endpoint \"" + *endpoint + "\" is not a declared node");
    }
    arcs.push_back(std::move(arc));
  }
  return arcs;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MalformedFile, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::size_t> undirected_distance(const ReplacementNetwork& net, std::string_view from,
                                               std::string_view to) {
  std::unordered_map<std::string_view, std::vector<std::string_view>> adj;
  for (const auto& arc : net.arcs) {
    adj[arc.src].push_back(arc.dst);
    adj[arc.dst].push_back(arc.src);
  }
  std::unordered_map<std::string_view, std::size_t> dist{{from, 0}};
  std::deque<std::string_view> queue{from};
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (u == to) return dist[u];
    for (const auto v : adj[u]) {
      if (dist.emplace(v, dist[u] + 1).second) queue.push_back(v);
    }
  }
  return std::nullopt;
}

std::size_t node_degree(const ReplacementNetwork& net, std::string_view label) {
  std::size_t deg = 0;
  for (const auto& arc : net.arcs) {
    deg += (arc.src == label) + (arc.dst == label);
  }
  return deg;
}

std::vector<ConditionReport> check_structural_conditions(const RuleSet& rs) {
  std::vector<ConditionReport> reports;
  for (int color = 1; color <= rs.num_colors; ++color) {
    ConditionReport report;
    report.color = color;
    const auto& rules = rs.for_color(color);
    for (std::size_t k = 0; k < rules.size(); ++k) {
      const auto& net = rules[k].network;
      const auto d = undirected_distance(net, kMarkerA, kMarkerB);
      if (!report.condition_a && d && *d > 1) {
        report.condition_a = true;
        report.witness_a = k;
      }
      if (!report.condition_b && (node_degree(net, kMarkerA) > 1 || node_degree(net, kMarkerB) > 1)) {
        report.condition_b = true;
        report.witness_b = k;
      }
    }
    reports.push_back(report);
  }
  return reports;
}

bool structural_conditions_hold(const RuleSet& rs) {
  const auto reports = check_structural_conditions(rs);
  return std::all_of(reports.begin(), reports.end(), [](const ConditionReport& r) { return r.satisfied(); });
}

RuleSet parse_ruleset(std::string_view text, const ParseOptions& options) {
  const json doc = parse_json(text);
  if (!doc.is_object()) malformed("rule file", "top level must be an object");
  if (!doc.contains("num_colors") || !doc["num_colors"].is_number_integer()) {
    malformed("rule file", "missing integer \"num_colors\"");
  }
  const auto num_colors = doc["num_colors"].get<long long>();
  if (num_colors < 1 || num_colors > 255) malformed("rule file", "num_colors must be in 1..255");
  if (!doc.contains("rules") || !doc["rules"].is_object()) malformed("rule file", "missing \"rules\" object");

  RuleSet rs;
  rs.num_colors = static_cast<int>(num_colors);
  rs.rules.resize(static_cast<std::size_t>(num_colors));

  for (const auto& [key, entries] : doc["rules"].items()) {
    int color = 0;
    try {
      std::size_t used = 0;
      color = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      malformed("rule file", "rule key \"" + key + "\" is not a color index");
    }
    if (color < 1 || color > rs.num_colors) {
      throw Error(ErrorKind::UnknownColor, "rules given for color " + key + " but num_colors is " +
                                               std::to_string(rs.num_colors));
    }
    if (!entries.is_array() || entries.empty()) malformed("color " + key, "expected a nonempty array of rules");

    auto& bucket = rs.rules[static_cast<std::size_t>(color - 1)];
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& entry = entries[k];
      const std::string where = "color " + key + " rule " + std::to_string(k + 1);
      if (!entry.is_object()) malformed(where, "expected an object");
      if (!entry.contains("p") || !entry["p"].is_string()) malformed(where, "probability \"p\" must be a \"num/den\" string");
      Rule rule;
      rule.probability = parse_rational(entry["p"].get<std::string>());
      rule.network.nodes = parse_nodes(entry, where);
      rule.network.arcs = parse_arcs(entry, rule.network.nodes, rs.num_colors, where);
      const auto& nodes = rule.network.nodes;
      for (const auto marker : {kMarkerA, kMarkerB}) {
        if (std::find(nodes.begin(), nodes.end(), marker) == nodes.end()) {
          throw Error(ErrorKind::MissingEndpoint, where + ": replacement network has no node \"" +
                                                      std::string(marker) + "\"");
        }
      }
      if (rule.network.arcs.empty()) malformed(where, "replacement network has no arcs");
      if (rule.probability <= 0) {
        throw Error(ErrorKind::ProbabilitySum, where + ": probability must be positive");
      }
      bucket.push_back(std::move(rule));
    }
  }

  for (int color = 1; color <= rs.num_colors; ++color) {
    const auto& bucket = rs.for_color(color);
    if (bucket.empty()) malformed("rule file", "no rules for color " + std::to_string(color));
    Rational total = 0;
    for (const auto& rule : bucket) total += rule.probability;
    if (total != 1) {
      throw Error(ErrorKind::ProbabilitySum,
                  "probabilities for color " + std::to_string(color) + " sum to " + format_rational(total));
    }
  }

  if (options.enforce_structural) {
    for (const auto& report : check_structural_conditions(rs)) {
      if (!report.condition_a) {
        throw Error(ErrorKind::StructuralCondition,
                    "color " + std::to_string(report.color) +
                        " violates condition (a): no rule has undirected distance between A and B greater than 1");
      }
      if (!report.condition_b) {
        throw Error(ErrorKind::StructuralCondition,
                    "color " + std::to_string(report.color) +
                        " violates condition (b): no rule has deg(A) > 1 or deg(B) > 1");
      }
    }
  }
  return rs;
}

namespace {

ordered_json arcs_to_json(const std::vector<LabeledArc>& arcs) {
  auto out = ordered_json::array();
  for (const auto& a : arcs) out.push_back(ordered_json::array({a.src, a.dst, a.color}));
  return out;
}

}  // namespace

std::string serialize_ruleset(const RuleSet& rs) {
  ordered_json doc;
  doc["num_colors"] = rs.num_colors;
  ordered_json rules = ordered_json::object();
  for (int color = 1; color <= rs.num_colors; ++color) {
    auto entries = ordered_json::array();
    for (const auto& rule : rs.for_color(color)) {
      ordered_json e;
      e["p"] = format_rational(rule.probability);
      e["nodes"] = rule.network.nodes;
      e["arcs"] = arcs_to_json(rule.network.arcs);
      entries.push_back(std::move(e));
    }
    rules[std::to_string(color)] = std::move(entries);
  }
  doc["rules"] = std::move(rules);
  return doc.dump(2) + "\n";
}

InitialGraph parse_initial_graph(std::string_view text, int num_colors) {
  const json doc = parse_json(text);
  if (!doc.is_object()) malformed("initial graph", "top level must be an object");
  InitialGraph g;
  g.nodes = parse_nodes(doc, "initial graph");
  g.arcs = parse_arcs(doc, g.nodes, num_colors, "initial graph");
  if (g.arcs.empty()) throw Error(ErrorKind::EmptyGraph, "initial graph has no arcs");
  return g;
}

std::string serialize_initial_graph(const InitialGraph& g) {
  ordered_json doc;
  doc["nodes"] = g.nodes;
  doc["arcs"] = arcs_to_json(g.arcs);
  return doc.dump() + "\n";
}

}  // namespace snet
