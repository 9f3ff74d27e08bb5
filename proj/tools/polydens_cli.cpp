#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polydens/error.hpp"
#include "polydens/exp_sums.hpp"
#include "polydens/experiment.hpp"
#include "polydens/parser.hpp"
#include "polydens/report.hpp"
#include "polydens/singular_integral.hpp"
#include "polydens/counting.hpp"

namespace {

using namespace polydens;

constexpr int kExitGate = 2;
constexpr int kExitBudget = 3;
constexpr int kExitConfig = 4;

struct Overrides {
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> euler_cutoff;
  std::optional<int> sigma;
  std::vector<std::int64_t> grid;
  bool force = false;

  void add_to(CLI::App* app) {
    app->add_option("--threads", threads, "Worker threads for counting")->check(CLI::Range(1u, 1024u));
    app->add_option("--euler-cutoff", euler_cutoff, "Prime bound of the Euler product")->check(CLI::Range(2ull, 1ull << 40));
    app->add_option("--sigma", sigma, "Dimension of the singular locus (overrides the estimate)");
    app->add_option("--P", grid, "P grid (overrides P_grid)")->delimiter(',');
    app->add_flag("--force", force, "Run even when a hypothesis check does not pass");
  }

  ExperimentConfig apply(ExperimentConfig c) const {
    if (threads) c.threads = *threads;
    if (euler_cutoff) c.euler_cutoff = *euler_cutoff;
    if (sigma) {
      if (*sigma < 0 || *sigma > static_cast<int>(c.box.dim()) - 1) throw ConfigError("--sigma must lie in [0, n-1]");
      c.sigma_override = *sigma;
    }
    if (!grid.empty()) {
      for (auto p : grid) {
        if (p <= 0) throw ConfigError("--P entries must be positive");
      }
      c.P_grid = grid;
    }
    if (force) c.force = true;
    return c;
  }
};

void print_checks(const HypothesisReport& h, std::ostream& out) {
  out << "mode: " << to_string(h.mode) << "\n";
  out << "sigma: " << h.sigma_used.value << " (" << to_string(h.sigma_used.method) << ")\n";
  for (const auto& c : h.checks) out << "  [" << to_string(c.status) << "] " << c.name << ": " << c.detail << "\n";
}

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  return file;
}

int run_check(const std::string& path, const Overrides& ov, bool as_json) {
  const auto config = ov.apply(load_config(path));
  const auto h = check_config_hypotheses(config);
  if (as_json) {
    std::cout << to_json(h).dump(2) << "\n";
  } else {
    print_checks(h, std::cout);
  }
  return h.all_passed() ? 0 : kExitGate;
}

int run_densities(const std::string& path, const Overrides& ov, const std::string& factors_csv) {
  const auto config = ov.apply(load_config(path));
  const auto fs = config.parsed_polynomials();
  const auto h = check_config_hypotheses(config);
  if (!h.all_passed() && !config.force) {
    print_checks(h, std::cerr);
    std::cerr << "hypothesis gate: rerun with --force to compute anyway\n";
    return kExitGate;
  }
  EulerOptions eo;
  eo.count.budget = config.local_budget;
  eo.count.threads = config.threads;
  eo.force = config.force;
  const auto euler = euler_product(fs, config.mode, config.euler_cutoff, h.sigma_used, eo);
  if (!factors_csv.empty()) {
    std::ofstream f;
    write_factors_csv(open_or_stdout(factors_csv, f), euler);
  }
  const auto summary = summarize(euler);
  nlohmann::json rows = nlohmann::json::array();
  IntegralOptions io;
  io.tol = config.quadrature_tolerance;
  io.max_evaluations = config.quadrature_evaluations;
  for (auto P : config.P_grid) {
    nlohmann::json row = {{"P", P}};
    if (config.mode == DensityMode::squarefree) {
      const double points = config.box.lattice_point_count(P).get_d();
      row["lattice_points"] = points;
      row["predicted"] = summary.value_double * points;
    } else {
      try {
        const auto li = config.mode == DensityMode::joint ? li_joint(fs, config.box, static_cast<double>(P), io)
                                                          : li_f(fs.front(), config.box, static_cast<double>(P), io);
        row["li_value"] = li.value;
        row["li_error"] = li.abs_error_estimate;
        row["predicted"] = summary.value_double * li.value;
      } catch (const DomainError& e) {
        row["error"] = e.what();
      }
    }
    rows.push_back(row);
  }
  nlohmann::json out = {{"euler_product",
                         {{"value", summary.value},
                          {"cutoff", summary.cutoff},
                          {"requested_cutoff", summary.requested_cutoff},
                          {"tail_bound", summary.tail_bound},
                          {"decay_exponent", summary.decay_exponent},
                          {"tail_constant", summary.tail_constant},
                          {"heuristic", summary.heuristic},
                          {"budget_limited", summary.budget_limited},
                          {"decay_fitted", summary.decay_fitted}}},
                        {"rows", rows}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_count(const std::string& path, const Overrides& ov) {
  const auto config = ov.apply(load_config(path));
  const auto fs = config.parsed_polynomials();
  CountingOptions co;
  co.lattice_budget = config.lattice_budget;
  co.threads = config.threads;
  std::cout << "P,lattice_points,count,unknown\r\n";
  auto grid = config.P_grid;
  std::sort(grid.begin(), grid.end());
  bool partial = false;
  for (auto P : grid) {
    const auto r = count_values(fs, config.box, P, config.mode, co);
    std::cout << P << ',' << r.lattice_points << ',' << r.count << ',' << r.unknown << "\r\n";
    partial = partial || r.partial;
  }
  return partial ? kExitBudget : 0;
}

int run_verify(const std::string& path, const Overrides& ov, const std::string& json_out,
               const std::string& csv_out, const std::string& plot_out) {
  const auto config = ov.apply(load_config(path));
  const auto report = run_experiment(config);
  if (!json_out.empty()) emit_report_file(report, ReportFormat::json, json_out);
  if (!csv_out.empty()) emit_report_file(report, ReportFormat::csv, csv_out);
  if (!plot_out.empty()) emit_report_file(report, ReportFormat::plot_data, plot_out);
  if (json_out.empty() && csv_out.empty() && plot_out.empty()) emit_report(report, ReportFormat::csv, std::cout);
  if (report.gated) {
    print_checks(report.hypotheses, std::cerr);
    std::cerr << "hypothesis gate: no rows produced (use --force)\n";
    return kExitGate;
  }
  for (const auto& row : report.rows) {
    if (row.error) std::cerr << "P=" << row.P << ": " << *row.error << "\n";
  }
  return report.any_budget_abort() ? kExitBudget : 0;
}

int run_report(const std::string& path, const std::string& format, const std::string& out_path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  const auto report = report_from_json(j);
  const auto fmt = report_format_from_string(format);
  if (out_path.empty() || out_path == "-") {
    emit_report(report, fmt, std::cout);
  } else {
    emit_report_file(report, fmt, out_path);
  }
  return 0;
}

int run_expsum(const std::string& poly, std::size_t n, std::optional<std::uint64_t> q, std::int64_t a,
               std::optional<std::uint64_t> tf_g, std::optional<std::uint64_t> observatory, std::uint64_t budget) {
  const MultiPoly f = [&] {
    try {
      return parse_polynomial(poly, n);
    } catch (const ParseError& e) {
      throw ConfigError(e.what());
    }
  }();
  CountOptions co;
  co.budget = budget;
  if (tf_g) {
    write_tf_g_csv(std::cout, f, *tf_g, co);
  } else if (observatory) {
    const auto r = observatory_check(f, *observatory, co);
    std::cout << "p,lhs,lhs_imag,rhs,agrees\r\n"
              << *observatory << ',' << format_double(r.lhs) << ',' << format_double(r.lhs_imag) << ','
              << format_double(r.rhs) << ',' << (r.agrees ? "true" : "false") << "\r\n";
    return r.agrees ? 0 : 1;
  } else if (q) {
    if (a != 0) {
      const auto s = complete_exp_sum(f, a, *q, co);
      std::cout << "a,re,im\r\n" << a << ',' << format_double(s.real()) << ',' << format_double(s.imag()) << "\r\n";
    } else {
      write_exp_sum_table_csv(std::cout, exp_sum_table(f, *q, co));
    }
  } else {
    throw ConfigError("expsum needs one of --q, --tf-g or --observatory");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predicted and empirical densities of prime and square-free polynomial values"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string config_path;
  Overrides ov;

  auto* check = app.add_subcommand("check", "Evaluate the hypotheses for a configuration");
  bool check_json = false;
  check->add_option("config", config_path, "Experiment config (JSON)")->required();
  check->add_flag("--json", check_json, "Print the report as JSON");
  ov.add_to(check);

  auto* dens = app.add_subcommand("densities", "Euler product and singular integral predictions");
  std::string factors_csv;
  dens->add_option("config", config_path, "Experiment config (JSON)")->required();
  dens->add_option("--factors-csv", factors_csv, "Write the local factors as CSV");
  ov.add_to(dens);

  auto* count = app.add_subcommand("count", "Exact value counts over the lattice points of P*B");
  count->add_option("config", config_path, "Experiment config (JSON)")->required();
  ov.add_to(count);

  auto* verify = app.add_subcommand("verify", "Run the full experiment: empirical vs predicted");
  std::string json_out, csv_out, plot_out;
  verify->add_option("config", config_path, "Experiment config (JSON)")->required();
  verify->add_option("--json", json_out, "Write the JSON report here");
  verify->add_option("--csv", csv_out, "Write the CSV table here");
  verify->add_option("--plot", plot_out, "Write (log P, ratio) plot data here");
  ov.add_to(verify);

  auto* report = app.add_subcommand("report", "Re-emit a saved JSON report");
  std::string report_path, format = "csv", out_path;
  report->add_option("report", report_path, "Saved JSON report")->required();
  report->add_option("--format", format, "json, csv or plot-data")->check(CLI::IsMember({"json", "csv", "plot-data"}));
  report->add_option("--out", out_path, "Output path (default stdout)");

  auto* expsum = app.add_subcommand("expsum", "Complete exponential sums, T_f and G tables");
  std::string poly;
  std::size_t n_vars = 1;
  std::optional<std::uint64_t> q, tf_g, observatory;
  std::int64_t a = 0;
  std::uint64_t budget = 100'000'000;
  expsum->add_option("--poly", poly, "Polynomial text")->required();
  expsum->add_option("--n", n_vars, "Number of variables")->check(CLI::Range(1, 64));
  expsum->add_option("--q", q, "Modulus: table of S_{a,q} over units a")->check(CLI::Range(1ull, 1ull << 31));
  expsum->add_option("--a", a, "Single residue a (with --q)");
  expsum->add_option("--tf-g", tf_g, "Table of q, T_f(q), G(q) for q up to this bound")->check(CLI::Range(1ull, 100000ull));
  expsum->add_option("--observatory", observatory, "Check the observatory identity at this prime");
  expsum->add_option("--budget", budget, "Residue budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*check) return run_check(config_path, ov, check_json);
    if (*dens) return run_densities(config_path, ov, factors_csv);
    if (*count) return run_count(config_path, ov);
    if (*verify) return run_verify(config_path, ov, json_out, csv_out, plot_out);
    if (*report) return run_report(report_path, format, out_path);
    if (*expsum) return run_expsum(poly, n_vars, q, a, tf_g, observatory, budget);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis: " << e.what() << "\n";
    return kExitGate;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
