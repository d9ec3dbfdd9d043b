#include "snet/stats.hpp"

#include "snet/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace snet {

DegreeHistogram DegreeHistogram::from_counts(std::map<std::uint64_t, std::uint64_t> counts) {
  DegreeHistogram h;
  h.counts = std::move(counts);
  for (const auto& [degree, count] : h.counts) {
    h.total_nodes += count;
    if (count > 0) h.max_degree = std::max(h.max_degree, degree);
  }
  return h;
}

double DegreeHistogram::fraction(std::uint64_t degree) const {
  const auto it = counts.find(degree);
  if (it == counts.end() || total_nodes == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total_nodes);
}

DegreeHistogram degree_histogram(const ColoredDigraph& g) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (const auto d : undirected_degrees(g)) ++counts[d];
  return DegreeHistogram::from_counts(std::move(counts));
}

RegressionFit estimate_dimension(const DegreeHistogram& h, double max_frac, std::uint64_t min_degree) {
  RegressionFit fit;
  const double cap = max_frac * static_cast<double>(h.max_degree);
  for (const auto& [degree, count] : h.counts) {
    if (count == 0 || degree == 0 || degree < min_degree || static_cast<double>(degree) > cap) continue;
    fit.points.push_back({degree, h.fraction(degree)});
  }
  if (fit.points.size() < 3) {
    throw Error(ErrorKind::InsufficientBins,
                "need at least 3 qualifying degree bins, found " + std::to_string(fit.points.size()));
  }
  const auto n = static_cast<double>(fit.points.size());
  double sx = 0, sy = 0;
  for (const auto& p : fit.points) {
    sx += std::log(static_cast<double>(p.degree));
    sy += std::log(p.fraction);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : fit.points) {
    const double dx = std::log(static_cast<double>(p.degree)) - mx;
    const double dy = std::log(p.fraction) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (const auto& p : fit.points) {
    const double r = std::log(p.fraction) - (fit.intercept + fit.slope * std::log(static_cast<double>(p.degree)));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::vector<double> normalized_degrees(const ColoredDigraph& g) {
  const auto deg = undirected_degrees(g);
  const auto max = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  if (max == 0) throw Error(ErrorKind::EmptyGraph, "normalized degree needs at least one arc");
  std::vector<double> out(deg.size());
  std::transform(deg.begin(), deg.end(), out.begin(),
                 [max](std::uint64_t d) { return static_cast<double>(d) / static_cast<double>(max); });
  return out;
}

GrowthTable growth_diagnostics(const GenerationSummary& summary, const TheoryReport& report) {
  if (summary.rows.size() < 2) throw Error(ErrorKind::InvalidArgument, "growth diagnostics need at least two steps");
  GrowthTable table{report.rho_m, report.rho_m, report.rho_n, {}};
  auto ratio = [](std::uint64_t next, std::uint64_t prev) {
    return prev == 0 ? 0.0 : static_cast<double>(next) / static_cast<double>(prev);
  };
  for (std::size_t i = 0; i + 1 < summary.rows.size(); ++i) {
    const auto& a = summary.rows[i];
    const auto& b = summary.rows[i + 1];
    GrowthRow row;
    row.t = a.t;
    row.arc_ratio = ratio(b.arcs, a.arcs);
    row.node_ratio = ratio(b.nodes, a.nodes);
    row.degree_ratio = ratio(b.max_degree, a.max_degree);
    row.arc_deviation = std::abs(row.arc_ratio / table.arc_target - 1.0);
    row.node_deviation = std::abs(row.node_ratio / table.node_target - 1.0);
    row.degree_deviation = std::abs(row.degree_ratio / table.degree_target - 1.0);
    table.rows.push_back(row);
  }
  return table;
}

Aggregate aggregate(std::span<const double> values) {
  Aggregate a;
  a.count = values.size();
  if (values.empty()) return a;
  for (const auto v : values) a.mean += v;
  a.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (const auto v : values) ss += (v - a.mean) * (v - a.mean);
    a.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return a;
}

std::vector<double> normalized_degree_trace(std::span<const ColoredDigraph> sequence, NodeId v) {
  std::vector<double> trace;
  for (const auto& g : sequence) {
    if (v >= g.num_nodes()) continue;
    trace.push_back(normalized_degrees(g)[v]);
  }
  return trace;
}

void write_histogram_csv(std::ostream& out, const DegreeHistogram& h) {
  out << "L,count,fraction\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(12);
  for (const auto& [degree, count] : h.counts) out << degree << ',' << count << ',' << h.fraction(degree) << '\n';
  out.flags(flags);
  out.precision(precision);
}

std::string fit_to_json(const RegressionFit& fit) {
  nlohmann::ordered_json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["delta_hat"] = fit.delta_hat();
  auto points = nlohmann::ordered_json::array();
  for (const auto& p : fit.points) points.push_back({{"L", p.degree}, {"frac", p.fraction}});
  j["points"] = std::move(points);
  return j.dump(2) + "\n";
}

}  // namespace snet
