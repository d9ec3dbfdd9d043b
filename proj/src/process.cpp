#include "snet/process.hpp"

#include "snet/errors.hpp"
#include "snet/rng.hpp"
#include "snet/theory.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>

namespace snet {

namespace {

constexpr std::size_t kMaxComponents = 1U << 16;

std::int64_t checked_madd(std::int64_t acc, std::int64_t count, std::int64_t weight) {
  std::int64_t product = 0;
  std::int64_t sum = 0;
  if (__builtin_mul_overflow(count, weight, &product) || __builtin_add_overflow(acc, product, &sum)) {
    throw Error(ErrorKind::Overflow, "process counts exceed the 64-bit budget; lower t_max");
  }
  return sum;
}

}  // namespace

ProcessSpec::ProcessSpec(std::vector<RationalMatrix> components, std::vector<Rational> probabilities)
    : components_(std::move(components)), probabilities_(std::move(probabilities)) {
  if (components_.empty() || components_.size() != probabilities_.size()) {
    throw Error(ErrorKind::InvalidArgument, "process needs one probability per component matrix");
  }
  dim_ = components_.front().dim();
  mean_ = RationalMatrix(dim_);
  Rational total = 0;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const auto& x = components_[c];
    if (x.dim() != dim_) throw Error(ErrorKind::DimensionMismatch, "component matrices differ in dimension");
    if (probabilities_[c] <= 0) throw Error(ErrorKind::ProbabilitySum, "component probabilities must be positive");
    total += probabilities_[c];
    std::vector<std::int64_t> flat(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        const Rational& e = x(i, j);
        if (e < 0 || e.get_den() != 1 || !e.get_num().fits_slong_p()) {
          throw Error(ErrorKind::InvalidArgument, "component entries must be nonnegative integers");
        }
        flat[i * dim_ + j] = e.get_num().get_si();
        mean_(i, j) += probabilities_[c] * e;
      }
    }
    rows_.push_back(std::move(flat));
  }
  if (total != 1) {
    throw Error(ErrorKind::ProbabilitySum, "component probabilities sum to " + format_rational(total));
  }
  Rational remaining = 1;
  for (const auto& p : probabilities_) {
    conditional_.push_back(Rational(p / remaining).get_d());
    remaining -= p;
  }
  conditional_.back() = 1.0;
}

namespace {

// Enumerates joint rule choices (k_1..k_λ) in lexicographic order, filling
// rows per color with the given callback.
template <typename FillRows>
ProcessSpec product_spec(const RuleSet& rs, std::size_t dim, FillRows fill) {
  std::size_t count = 1;
  for (int i = 1; i <= rs.num_colors; ++i) {
    count *= rs.for_color(i).size();
    if (count > kMaxComponents) throw Error(ErrorKind::InvalidArgument, "too many joint rule choices");
  }
  std::vector<RationalMatrix> comps;
  std::vector<Rational> probs;
  std::vector<std::size_t> choice(static_cast<std::size_t>(rs.num_colors), 0);
  for (std::size_t c = 0; c < count; ++c) {
    RationalMatrix x(dim);
    Rational p = 1;
    for (int i = 1; i <= rs.num_colors; ++i) {
      const auto& rule = rs.for_color(i)[choice[static_cast<std::size_t>(i - 1)]];
      p *= rule.probability;
      fill(x, i, rule.network);
    }
    comps.push_back(std::move(x));
    probs.push_back(p);
    for (int i = rs.num_colors; i >= 1; --i) {
      auto& k = choice[static_cast<std::size_t>(i - 1)];
      if (++k < rs.for_color(i).size()) break;
      k = 0;
    }
  }
  return ProcessSpec(std::move(comps), std::move(probs));
}

}  // namespace

ProcessSpec arc_process_spec(const RuleSet& rs) {
  return product_spec(rs, static_cast<std::size_t>(rs.num_colors),
                      [](RationalMatrix& x, int color, const ReplacementNetwork& net) {
                        for (const auto& arc : net.arcs) {
                          x(static_cast<std::size_t>(color - 1), static_cast<std::size_t>(arc.color - 1)) += 1;
                        }
                      });
}

ProcessSpec degree_process_spec(const RuleSet& rs) {
  return product_spec(rs, 2 * static_cast<std::size_t>(rs.num_colors),
                      [](RationalMatrix& x, int color, const ReplacementNetwork& net) {
                        for (const auto& arc : net.arcs) {
                          for (const bool at_b : {false, true}) {
                            const std::string_view marker = at_b ? kMarkerB : kMarkerA;
                            if (arc.src == marker) x(degree_row(color, at_b), degree_col(arc.color, false)) += 1;
                            if (arc.dst == marker) x(degree_row(color, at_b), degree_col(arc.color, true)) += 1;
                          }
                        }
                      });
}

ProcessState step(const ProcessSpec& spec, const ProcessState& state, std::uint64_t seed) {
  const std::size_t n = spec.dim();
  if (state.alpha.size() != n) throw Error(ErrorKind::DimensionMismatch, "state dimension differs from spec");
  ProcessState next{state.step + 1, std::vector<std::int64_t>(n, 0)};
  const std::size_t m = spec.num_components();
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t remaining = state.alpha[i];
    if (remaining < 0) throw Error(ErrorKind::InvalidArgument, "process state must be nonnegative");
    for (std::size_t j = 0; j < m && remaining > 0; ++j) {
      std::int64_t drawn = remaining;
      const double q = spec.conditional_probability(j);
      if (q < 1.0) {
        rng::CounterEngine eng(rng::derive_key(seed, rng::Stream::ProcessStep, {state.step, i, j}));
        drawn = std::binomial_distribution<std::int64_t>(remaining, q)(eng);
      }
      remaining -= drawn;
      if (drawn == 0) continue;
      for (std::size_t k = 0; k < n; ++k) next.alpha[k] = checked_madd(next.alpha[k], drawn, spec.entry(j, i, k));
    }
  }
  return next;
}

std::vector<std::vector<std::int64_t>> simulate_alphas(const ProcessSpec& spec, std::vector<std::int64_t> alpha0,
                                                       unsigned t_max, std::uint64_t seed) {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(t_max + 1);
  ProcessState state{0, std::move(alpha0)};
  out.push_back(state.alpha);
  for (unsigned t = 0; t < t_max; ++t) {
    state = step(spec, state, seed);
    out.push_back(state.alpha);
  }
  return out;
}

Trajectory trajectory(const ProcessSpec& spec, std::vector<std::int64_t> alpha0, unsigned t_max,
                      std::uint64_t seed) {
  const auto alphas = simulate_alphas(spec, std::move(alpha0), t_max, seed);
  Trajectory tr;
  for (const auto& a : alphas) {
    std::int64_t total = 0;
    for (const auto v : a) {
      if (__builtin_add_overflow(total, v, &total)) {
        throw Error(ErrorKind::Overflow, "xi exceeds the 64-bit budget; lower t_max");
      }
    }
    tr.xi.push_back(total);
  }
  tr.final_alpha = alphas.back();
  return tr;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t r) {
  return rng::derive_key(seed, rng::Stream::RunSeed, {r});
}

std::vector<MartingaleStats> martingale_diagnostic(const ProcessSpec& spec, const std::vector<std::int64_t>& alpha0,
                                                   unsigned t_max, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorKind::InvalidArgument, "martingale_diagnostic needs at least one trial");
  const std::size_t n = spec.dim();
  const RationalMatrix inv = inverse(spec.mean());  // throws NotInvertible

  std::vector<std::vector<double>> inv_pow;  // X̄^{-t} as doubles
  RationalMatrix power = RationalMatrix::identity(n);
  for (unsigned t = 0; t <= t_max; ++t) {
    inv_pow.push_back(power.to_doubles());
    power = mat_mul(power, inv);
  }

  std::vector<MartingaleStats> stats(t_max + 1);
  std::vector<std::vector<double>> m2(t_max + 1, std::vector<double>(n, 0.0));
  for (unsigned t = 0; t <= t_max; ++t) {
    stats[t].t = t;
    stats[t].mean.assign(n, 0.0);
    stats[t].variance.assign(n, 0.0);
    stats[t].trials = trials;
  }
  std::vector<double> mt(n);
  for (std::size_t r = 0; r < trials; ++r) {
    const auto alphas = simulate_alphas(spec, alpha0, t_max, trial_seed(seed, r));
    for (unsigned t = 0; t <= t_max; ++t) {
      std::fill(mt.begin(), mt.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(alphas[t][i]);
        if (a == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) mt[j] += a * inv_pow[t][i * n + j];
      }
      // Welford update.
      const double count = static_cast<double>(r + 1);
      for (std::size_t j = 0; j < n; ++j) {
        const double delta = mt[j] - stats[t].mean[j];
        stats[t].mean[j] += delta / count;
        m2[t][j] += delta * (mt[j] - stats[t].mean[j]);
      }
    }
  }
  if (trials > 1) {
    for (unsigned t = 0; t <= t_max; ++t)
      for (std::size_t j = 0; j < n; ++j) stats[t].variance[j] = m2[t][j] / static_cast<double>(trials - 1);
  }
  return stats;
}

void write_trajectory_csv(std::ostream& out, const std::vector<std::int64_t>& xi) {
  out << "t,xi,log_xi\n";
  const auto precision = out.precision(12);
  for (std::size_t t = 0; t < xi.size(); ++t) {
    out << t << ',' << xi[t] << ',';
    if (xi[t] > 0) {
      out << std::log(static_cast<double>(xi[t]));
    } else {
      out << "-inf";
    }
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace snet
