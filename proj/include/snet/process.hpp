#pragma once

#include "snet/linalg.hpp"
#include "snet/rulesio.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace snet {

/// Stochastic substitution process: each unit in coordinate i independently
/// becomes row i of X_j with probability p_j.
class ProcessSpec {
 public:
  /// Components must be nonnegative integer matrices of equal dimension and
  /// the probabilities positive with exact sum 1.
  ProcessSpec(std::vector<RationalMatrix> components, std::vector<Rational> probabilities);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t num_components() const noexcept { return components_.size(); }
  const std::vector<RationalMatrix>& components() const noexcept { return components_; }
  const std::vector<Rational>& probabilities() const noexcept { return probabilities_; }
  /// X̄ = sum_j p_j X_j.
  const RationalMatrix& mean() const noexcept { return mean_; }

  std::int64_t entry(std::size_t component, std::size_t i, std::size_t j) const {
    return rows_[component][i * dim_ + j];
  }
  /// P(choose j | not chosen 0..j-1); the last entry is 1.
  double conditional_probability(std::size_t j) const { return conditional_[j]; }

 private:
  std::size_t dim_ = 0;
  std::vector<RationalMatrix> components_;
  std::vector<Rational> probabilities_;
  RationalMatrix mean_;
  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<double> conditional_;
};

/// Arc-count process of a rule set: one component per joint rule choice
/// (k_1, ..., k_λ), row i = χ(R_{i k_i}). The mean is the arc matrix M.
ProcessSpec arc_process_spec(const RuleSet& rs);

/// Endpoint-degree process: rows (i,A) and (i,B) hold the out/in degree
/// vectors of A and B in R_{i k_i}. The mean is the degree matrix N.
ProcessSpec degree_process_spec(const RuleSet& rs);

struct ProcessState {
  std::uint64_t step = 0;
  std::vector<std::int64_t> alpha;
};

/// One application of T. Coordinate i draws Multinomial(alpha_i; p) by a
/// binomial chain; draw (i, j) uses the stream keyed (seed, step, i, j).
/// Throws Error{Overflow} when a count leaves the signed 64-bit range.
ProcessState step(const ProcessSpec& spec, const ProcessState& state, std::uint64_t seed);

struct Trajectory {
  std::vector<std::int64_t> xi;  // xi[t] = ||alpha_t||_1 for t = 0..t_max
  std::vector<std::int64_t> final_alpha;
};

/// alpha_0 .. alpha_{t_max}.
std::vector<std::vector<std::int64_t>> simulate_alphas(const ProcessSpec& spec, std::vector<std::int64_t> alpha0,
                                                       unsigned t_max, std::uint64_t seed);
Trajectory trajectory(const ProcessSpec& spec, std::vector<std::int64_t> alpha0, unsigned t_max,
                      std::uint64_t seed);

struct MartingaleStats {
  unsigned t = 0;
  std::vector<double> mean;      // sample mean of M_t = alpha_t X̄^{-t}
  std::vector<double> variance;  // unbiased sample variance per coordinate
  std::size_t trials = 0;
};

/// Per-t statistics of M_t over independent trials; trial r is seeded by
/// trial_seed(seed, r). Throws Error{NotInvertible} for singular X̄.
std::vector<MartingaleStats> martingale_diagnostic(const ProcessSpec& spec, const std::vector<std::int64_t>& alpha0,
                                                   unsigned t_max, std::size_t trials, std::uint64_t seed);

/// Seed for the r-th independent repetition of an experiment.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t r);

/// CSV with header `t,xi,log_xi`.
void write_trajectory_csv(std::ostream& out, const std::vector<std::int64_t>& xi);

}  // namespace snet
