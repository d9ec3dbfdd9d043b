#include "snet/cli.hpp"

#include "snet/errors.hpp"
#include "snet/generator.hpp"
#include "snet/graph_io.hpp"
#include "snet/process.hpp"
#include "snet/rulesio.hpp"
#include "snet/stats.hpp"
#include "snet/theory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace snet::cli {

namespace {

namespace fs = std::filesystem;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::MalformedFile: return kParseFailure;
    case ErrorKind::BudgetExceeded: return kBudget;
    default: return kDomainFailure;
  }
}

std::string display(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : format_rational(q);
}

void print_matrix(std::ostream& out, const std::string& name, const RationalMatrix& x) {
  out << name << " =\n";
  for (std::size_t i = 0; i < x.dim(); ++i) {
    out << "  [";
    for (std::size_t j = 0; j < x.dim(); ++j) out << (j ? ", " : "") << std::setw(5) << display(x(i, j));
    out << "]\n";
  }
}

std::ofstream open_output(const std::string& path) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  return f;
}

struct CommonRuleArgs {
  std::string rules_path;
  bool allow_structural_failure = false;

  RuleSet load() const {
    return parse_ruleset(read_text_file(rules_path), {.enforce_structural = !allow_structural_failure});
  }
};


int cmd_validate(const std::string& rules_path, std::ostream& out) {
  const RuleSet rs = parse_ruleset(read_text_file(rules_path), {.enforce_structural = false});
  const auto reports = check_structural_conditions(rs);
  bool ok = true;
  std::string satisfied;
  for (const auto& r : reports) {
    out << "color " << r.color << ": condition (a) "
        << (r.condition_a ? "satisfied (rule " + std::to_string(*r.witness_a + 1) + ")" : "VIOLATED")
        << ", condition (b) "
        << (r.condition_b ? "satisfied (rule " + std::to_string(*r.witness_b + 1) + ")" : "VIOLATED") << '\n';
    if (!r.condition_a) out << "color " << r.color << " violates condition (a)\n";
    if (!r.condition_b) out << "color " << r.color << " violates condition (b)\n";
    ok = ok && r.satisfied();
    if (r.satisfied()) satisfied += (satisfied.empty() ? "" : ",") + std::to_string(r.color);
  }
  if (ok) out << "conditions (a),(b) satisfied for colors " << satisfied << '\n';
  return ok ? kOk : kDomainFailure;
}


struct AnalyzeArgs {
  CommonRuleArgs rules;
  bool json = false;
  std::vector<double> compare;
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
  const TheoryReport report = analyze(args.rules.load());
  if (args.json) {
    out << report_to_json(report);
  } else {
    out << std::setprecision(12);
    print_matrix(out, "M", report.m_matrix);
    print_matrix(out, "N", report.n_matrix);
    out << "rho(M) = " << report.rho_m << '\n';
    out << "rho(N) = " << report.rho_n << '\n';
    out << "M primitive: " << std::boolalpha << report.m_primitive << ", invertible: " << report.m_invertible << '\n';
    out << "N primitive: " << report.n_primitive << ", invertible: " << report.n_invertible << '\n';
    out << "structural conditions: " << report.structural_conditions << '\n';
    if (report.degree_dimension) {
      out << "degree dimension log rho(M) / log rho(N) = " << *report.degree_dimension << '\n';
    } else {
      out << "degree dimension: not available\n";
    }
    for (const auto& f : report.failures) out << "hypothesis failed: " << f << '\n';
    for (const auto& n : report.notes) out << "note: " << n << '\n';
  }
  if (args.compare.size() == 2) {
    out << std::setprecision(12) << "comparison radii: rho(M) = " << args.compare[0]
        << ", rho(N) = " << args.compare[1]
        << ", dimension = " << dimension_from_radii(args.compare[0], args.compare[1]) << '\n';
  }
  return report.hypotheses_met ? kOk : kDomainFailure;
}


struct SimulateArgs {
  CommonRuleArgs rules;
  std::string init_path;
  unsigned steps = 0;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string summary_path;
  unsigned threads = 1;
  std::uint64_t budget = kDefaultBudgetBytes;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  const RuleSet rs = args.rules.load();
  const InitialGraph init = parse_initial_graph(read_text_file(args.init_path), rs.num_colors);
  const auto result =
      generate(init, rs, args.steps, args.seed, {.threads = args.threads, .budget_bytes = args.budget});
  if (!args.out_path.empty()) {
    auto f = open_output(args.out_path);
    write_graph_jsonl(f, result.graph);
  }
  if (!args.summary_path.empty()) {
    auto f = open_output(args.summary_path);
    write_summary_csv(f, result.summary, rs.num_colors);
  }
  const auto& last = result.summary.rows.back();
  out << "t=" << last.t << " nodes=" << last.nodes << " arcs=" << last.arcs << " max_degree=" << last.max_degree
      << '\n';
  return kOk;
}


struct EstimateArgs {
  CommonRuleArgs rules;
  std::string init_path;
  unsigned steps = 5;
  unsigned runs = 10;
  std::uint64_t seed = 1;
  double max_frac = 1.0;
  std::uint64_t min_degree = kDefaultMinDegree;
  std::string out_dir;
  unsigned threads = 1;
  std::uint64_t budget = kDefaultBudgetBytes;
};

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  const RuleSet rs = args.rules.load();
  const InitialGraph init = parse_initial_graph(read_text_file(args.init_path), rs.num_colors);
  const TheoryReport report = analyze(rs);

  std::vector<double> deltas;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  out << std::setprecision(6);
  for (unsigned r = 0; r < args.runs; ++r) {
    const auto seed = trial_seed(args.seed, r);
    const auto result = generate(init, rs, args.steps, seed, {.threads = args.threads, .budget_bytes = args.budget});
    const auto hist = degree_histogram(result.graph);
    const std::string stem = args.out_dir.empty() ? "" : (fs::path(args.out_dir) / ("run_" + std::to_string(r))).string();
    if (!stem.empty()) {
      auto f = open_output(stem + ".csv");
      write_histogram_csv(f, hist);
    }
    try {
      const auto fit = estimate_dimension(hist, args.max_frac, args.min_degree);
      deltas.push_back(fit.delta_hat());
      if (!stem.empty()) {
        auto f = open_output(stem + "_fit.json");
        f << fit_to_json(fit);
      }
      out << "run " << r << ": nodes=" << hist.total_nodes << " max_degree=" << hist.max_degree
          << " delta_hat=" << fit.delta_hat() << " r2=" << fit.r_squared << '\n';
      runs.push_back({{"run", r}, {"seed", seed}, {"nodes", hist.total_nodes}, {"delta_hat", fit.delta_hat()}});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientBins) throw;
      err << "run " << r << ": skipped (" << e.what() << ")\n";
      runs.push_back({{"run", r}, {"seed", seed}, {"nodes", hist.total_nodes}, {"skipped", e.what()}});
    }
  }
  const auto agg = aggregate(deltas);
  out << "delta_hat mean = " << agg.mean << " +/- " << agg.sd << " over " << agg.count << " runs\n";
  if (report.degree_dimension) {
    out << "theoretical dimension = " << *report.degree_dimension << '\n';
  } else {
    out << "theoretical dimension: not available\n";
  }
  if (!args.out_dir.empty()) {
    nlohmann::ordered_json summary;
    summary["steps"] = args.steps;
    summary["runs"] = std::move(runs);
    summary["delta_hat_mean"] = agg.mean;
    summary["delta_hat_sd"] = agg.sd;
    summary["runs_used"] = agg.count;
    if (report.degree_dimension) {
      summary["theoretical_dimension"] = *report.degree_dimension;
    } else {
      summary["theoretical_dimension"] = nullptr;
    }
    auto f = open_output((fs::path(args.out_dir) / "summary.json").string());
    f << summary.dump(2) << '\n';
  }
  return deltas.empty() ? kDomainFailure : kOk;
}


struct ProcessArgs {
  CommonRuleArgs rules;
  std::string matrix_path;
  std::string kind = "arc";
  std::vector<std::int64_t> alpha0;
  unsigned steps = 10;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string martingale_path;
};

ProcessSpec load_matrix_spec(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::MalformedFile, std::string("invalid JSON: ") + e.what());
  }
  try {
    std::vector<RationalMatrix> comps;
    std::vector<Rational> probs;
    for (const auto& c : doc.at("components")) {
      probs.push_back(parse_rational(c.at("p").get<std::string>()));
      std::vector<std::vector<Rational>> rows;
      for (const auto& row : c.at("matrix")) {
        std::vector<Rational> r;
        for (const auto& e : row) r.emplace_back(e.get<long>());
        rows.push_back(std::move(r));
      }
      comps.push_back(RationalMatrix::from_rows(rows));
    }
    return ProcessSpec(std::move(comps), std::move(probs));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, std::string("matrix file: ") + e.what());
  }
}

int cmd_process(const ProcessArgs& args, std::ostream& out) {
  const ProcessSpec spec = [&] {
    if (!args.matrix_path.empty()) return load_matrix_spec(args.matrix_path);
    const RuleSet rs = args.rules.load();
    return args.kind == "degree" ? degree_process_spec(rs) : arc_process_spec(rs);
  }();
  std::vector<std::int64_t> alpha0 = args.alpha0;
  if (alpha0.empty()) {
    alpha0.assign(spec.dim(), 0);
    alpha0[0] = 1;
  }
  if (alpha0.size() != spec.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "--alpha0 has " + std::to_string(alpha0.size()) + " entries, spec has " +
                                                  std::to_string(spec.dim()));
  }

  if (args.trials > 0) {
    if (!is_invertible(spec.mean())) throw Error(ErrorKind::NotInvertible, "mean matrix is singular");
  }

  const auto tr = trajectory(spec, alpha0, args.steps, args.seed);
  if (!args.out_path.empty()) {
    auto f = open_output(args.out_path);
    write_trajectory_csv(f, tr.xi);
  }
  const double rho = is_primitive(spec.mean()) ? spectral_radius(spec.mean()).rho : perron_root(spec.mean());
  out << std::setprecision(8) << "rho(mean) = " << rho << '\n';
  out << "t=" << args.steps << " xi=" << tr.xi.back();
  if (args.steps > 0 && tr.xi.back() > 0 && rho > 0) {
    const double rate = std::log(static_cast<double>(tr.xi.back())) / args.steps;
    out << " log(xi)/t=" << rate << " log(rho)=" << std::log(rho)
        << " rel_dev=" << std::abs(rate / std::log(rho) - 1.0);
  }
  out << '\n';

  if (args.trials > 0) {
    const auto stats = martingale_diagnostic(spec, alpha0, args.steps, args.trials, args.seed);
    std::ostringstream csv;
    csv << std::setprecision(12) << "t,coord,mean,variance,stderr,alpha0\n";
    double worst = 0.0;
    for (const auto& s : stats) {
      for (std::size_t j = 0; j < spec.dim(); ++j) {
        const double se = std::sqrt(s.variance[j] / static_cast<double>(s.trials));
        csv << s.t << ',' << j << ',' << s.mean[j] << ',' << s.variance[j] << ',' << se << ',' << alpha0[j] << '\n';
        const double dev = std::abs(s.mean[j] - static_cast<double>(alpha0[j]));
        if (se > 0) worst = std::max(worst, dev / se);
      }
    }
    out << "martingale: max |mean(M_t) - alpha0| / stderr = " << worst << " over " << args.trials << " trials\n";
    if (!args.martingale_path.empty()) {
      auto f = open_output(args.martingale_path);
      f << csv.str();
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random colored substitution network toolkit", "snet"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  auto add_rules = [](CLI::App* sub, CommonRuleArgs& r) {
    sub->add_option("rules", r.rules_path, "Rule-set JSON file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--allow-structural-failure", r.allow_structural_failure,
                  "Accept rule sets violating structural conditions (a)/(b)");
  };

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a rule file and report structural conditions per color");
  validate->add_option("rules", validate_path, "Rule-set JSON file")->required()->check(CLI::ExistingFile);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Build M and N, spectral radii and the predicted degree dimension");
  add_rules(analyze_cmd, analyze_args.rules);
  analyze_cmd->add_flag("--json", analyze_args.json, "Emit the report as JSON");
  analyze_cmd->add_option("--compare", analyze_args.compare, "Also print log(a)/log(b) for given radii a,b")
      ->delimiter(',')
      ->expected(2);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate G^t and write graph JSON-lines plus a summary CSV");
  add_rules(simulate, sim.rules);
  simulate->add_option("init", sim.init_path, "Initial graph JSON file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--steps", sim.steps, "Number of substitution steps")->required();
  simulate->add_option("--seed", sim.seed, "64-bit seed");
  simulate->add_option("--out", sim.out_path, "Graph JSON-lines output");
  simulate->add_option("--summary", sim.summary_path,
                       "Summary CSV: t,nodes,arcs,arcs_c1..arcs_cλ,max_degree");
  simulate->add_option("--threads", sim.threads, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--budget", sim.budget, "Memory budget in bytes");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Seeded runs, degree histograms and log-log dimension estimates");
  add_rules(estimate, est.rules);
  estimate->add_option("init", est.init_path, "Initial graph JSON file")->required()->check(CLI::ExistingFile);
  estimate->add_option("--steps", est.steps, "Number of substitution steps");
  estimate->add_option("--runs", est.runs, "Number of independent runs")->check(CLI::PositiveNumber);
  estimate->add_option("--seed", est.seed, "Base seed; run r uses a seed derived from (seed, r)");
  estimate->add_option("--max-frac", est.max_frac, "Fit only bins with L <= max_frac * max degree");
  estimate->add_option("--min-degree", est.min_degree, "Fit only bins with L >= min_degree");
  estimate->add_option("--out", est.out_dir,
                       "Directory for run_<r>.csv (L,count,fraction), run_<r>_fit.json and summary.json");
  estimate->add_option("--threads", est.threads, "Worker threads")->check(CLI::PositiveNumber);
  estimate->add_option("--budget", est.budget, "Memory budget in bytes");

  ProcessArgs proc;
  auto* process = app.add_subcommand("process", "Stochastic substitution process trajectories and martingale check");
  process->add_option("rules", proc.rules.rules_path, "Rule-set JSON file")->check(CLI::ExistingFile);
  process->add_flag("--allow-structural-failure", proc.rules.allow_structural_failure,
                    "Accept rule sets violating structural conditions (a)/(b)");
  process->add_option("--matrix", proc.matrix_path, "Process JSON: {components:[{p, matrix}]}")
      ->check(CLI::ExistingFile);
  process->add_option("--kind", proc.kind, "Process derived from rules: arc or degree")
      ->check(CLI::IsMember({"arc", "degree"}));
  process->add_option("--alpha0", proc.alpha0, "Initial counts, comma separated (default e_1)")->delimiter(',');
  process->add_option("--steps", proc.steps, "Number of steps");
  process->add_option("--trials", proc.trials, "Martingale trials (0 disables)");
  process->add_option("--seed", proc.seed, "64-bit seed");
  process->add_option("--out", proc.out_path, "Trajectory CSV: t,xi,log_xi");
  process->add_option("--martingale-out", proc.martingale_path,
                      "Martingale CSV: t,coord,mean,variance,stderr,alpha0");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (*process && proc.matrix_path.empty() == proc.rules.rules_path.empty()) {
      throw CLI::ValidationError("process", "give exactly one of a rules file or --matrix");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_path, out);
    if (*analyze_cmd) return cmd_analyze(analyze_args, out);
    if (*simulate) return cmd_simulate(sim, out);
    if (*estimate) return cmd_estimate(est, out, err);
    if (*process) return cmd_process(proc, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kUsage;
}

}  // namespace snet::cli
