#pragma once

#include "snet/generator.hpp"
#include "snet/theory.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace snet {

/// counts[L] = number of nodes of undirected degree L.
struct DegreeHistogram {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total_nodes = 0;
  std::uint64_t max_degree = 0;

  /// Sets total_nodes and max_degree from the counts.
  static DegreeHistogram from_counts(std::map<std::uint64_t, std::uint64_t> counts);
  double fraction(std::uint64_t degree) const;
};

DegreeHistogram degree_histogram(const ColoredDigraph& g);

struct FitPoint {
  std::uint64_t degree = 0;
  double fraction = 0.0;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<FitPoint> points;  // fitted as (log L, log fraction)

  double delta_hat() const { return -slope; }
};

/// Degree-1 nodes are excluded by default: the log-log fit starts at L = 2.
inline constexpr std::uint64_t kDefaultMinDegree = 2;

/// OLS of log(P_L/|V|) on log L over bins with P_L > 0 and
/// min_degree <= L <= max_frac * Δ. Error{InsufficientBins} below 3 bins.
RegressionFit estimate_dimension(const DegreeHistogram& h, double max_frac = 1.0,
                                 std::uint64_t min_degree = kDefaultMinDegree);

/// deg(v) / Δ per node. Error{EmptyGraph} when Δ = 0.
std::vector<double> normalized_degrees(const ColoredDigraph& g);

struct GrowthRow {
  std::uint32_t t = 0;  // ratio of step t+1 to step t
  double arc_ratio = 0.0;
  double node_ratio = 0.0;
  double degree_ratio = 0.0;
  double arc_deviation = 0.0;  // |ratio / target - 1|
  double node_deviation = 0.0;
  double degree_deviation = 0.0;
};

struct GrowthTable {
  double arc_target = 0.0;     // rho(M)
  double node_target = 0.0;    // rho(M)
  double degree_target = 0.0;  // rho(N)
  std::vector<GrowthRow> rows;
};

GrowthTable growth_diagnostics(const GenerationSummary& summary, const TheoryReport& report);

struct Aggregate {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single value
  std::size_t count = 0;
};
Aggregate aggregate(std::span<const double> values);

/// d̂ of node v across a sequence of graphs (skipping graphs where v is unborn).
std::vector<double> normalized_degree_trace(std::span<const ColoredDigraph> sequence, NodeId v);

/// CSV `L,count,fraction`.
void write_histogram_csv(std::ostream& out, const DegreeHistogram& h);
/// {slope, intercept, r_squared, delta_hat, points:[{L, frac}]}.
std::string fit_to_json(const RegressionFit& fit);

}  // namespace snet
