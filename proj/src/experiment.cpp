#include "polydens/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "polydens/counting.hpp"
#include "polydens/error.hpp"
#include "polydens/parser.hpp"
#include "polydens/singular_integral.hpp"

namespace polydens {

const char* const kVersion = "1.0.0";

using nlohmann::json;

std::vector<MultiPoly> ExperimentConfig::parsed_polynomials() const {
  std::vector<MultiPoly> out;
  for (const auto& text : polynomials) {
    try {
      out.push_back(parse_polynomial(text, box.dim()));
    } catch (const ParseError& e) {
      throw ConfigError("polynomial '" + text + "': " + e.what());
    }
  }
  return out;
}

namespace {

template <class T>
T get_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::uint64_t positive_u64(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() > 0)) {
    throw ConfigError(std::string("config field '") + key + "' must be a positive integer");
  }
  const auto u = v.get<std::uint64_t>();
  if (u == 0) throw ConfigError(std::string("config field '") + key + "' must be positive");
  return u;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const char* const known[] = {"polynomials", "box", "mode", "P_grid", "euler_cutoff", "tolerances",
                                      "sigma_override", "force", "threads", "budgets"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
        std::end(known)) {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  for (const char* key : {"polynomials", "box", "mode", "P_grid"}) {
    if (!j.contains(key)) throw ConfigError(std::string("missing config field '") + key + "'");
  }
  ExperimentConfig c;
  c.polynomials = get_field<std::vector<std::string>>(j, "polynomials");
  if (c.polynomials.empty()) throw ConfigError("polynomials must not be empty");
  c.box = box_from_json(j.at("box"));
  c.mode = density_mode_from_string(get_field<std::string>(j, "mode"));
  if (c.mode != DensityMode::joint && c.polynomials.size() != 1) {
    throw ConfigError(to_string(c.mode) + " mode takes exactly one polynomial");
  }
  const auto& grid = j.at("P_grid");
  if (!grid.is_array() || grid.empty()) throw ConfigError("P_grid must be a non-empty array of integers");
  for (const auto& p : grid) {
    if (!p.is_number_integer() || p.get<std::int64_t>() <= 0) {
      throw ConfigError("P_grid entries must be positive integers");
    }
    c.P_grid.push_back(p.get<std::int64_t>());
  }
  if (j.contains("euler_cutoff")) {
    c.euler_cutoff = positive_u64(j, "euler_cutoff");
    if (c.euler_cutoff < 2) throw ConfigError("euler_cutoff must be at least 2");
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances must be an object");
    for (const auto& [key, value] : t.items()) {
      if (key != "quadrature") throw ConfigError("unknown tolerance '" + key + "'");
      if (!value.is_number() || !(value.get<double>() > 0)) throw ConfigError("tolerance must be positive");
      c.quadrature_tolerance = value.get<double>();
    }
  }
  if (j.contains("sigma_override") && !j.at("sigma_override").is_null()) {
    if (!j.at("sigma_override").is_number_integer()) throw ConfigError("sigma_override must be an integer");
    const int s = j.at("sigma_override").get<int>();
    if (s < 0 || s > static_cast<int>(c.box.dim()) - 1) throw ConfigError("sigma_override must lie in [0, n-1]");
    c.sigma_override = s;
  }
  if (j.contains("force")) c.force = get_field<bool>(j, "force");
  if (j.contains("threads")) {
    const auto t = positive_u64(j, "threads");
    if (t > 1024) throw ConfigError("threads must be at most 1024");
    c.threads = static_cast<unsigned>(t);
  }
  if (j.contains("budgets")) {
    const auto& b = j.at("budgets");
    if (!b.is_object()) throw ConfigError("budgets must be an object");
    for (const auto& [key, value] : b.items()) {
      if (key == "local") {
        c.local_budget = positive_u64(b, "local");
      } else if (key == "lattice") {
        c.lattice_budget = positive_u64(b, "lattice");
      } else if (key == "quadrature_evaluations") {
        c.quadrature_evaluations = positive_u64(b, "quadrature_evaluations");
      } else {
        throw ConfigError("unknown budget '" + key + "'");
      }
    }
  }
  c.parsed_polynomials();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["polynomials"] = c.polynomials;
  j["box"] = to_json(c.box);
  j["mode"] = to_string(c.mode);
  j["P_grid"] = c.P_grid;
  j["euler_cutoff"] = c.euler_cutoff;
  j["tolerances"] = {{"quadrature", c.quadrature_tolerance}};
  j["sigma_override"] = c.sigma_override ? json(*c.sigma_override) : json(nullptr);
  j["force"] = c.force;
  j["threads"] = c.threads;
  j["budgets"] = {{"local", c.local_budget},
                  {"lattice", c.lattice_budget},
                  {"quadrature_evaluations", c.quadrature_evaluations}};
  return j;
}

EulerSummary summarize(const EulerProductEstimate& e) {
  EulerSummary s;
  s.value = to_string(e.value, 30);
  s.value_double = static_cast<double>(e.value);
  s.cutoff = e.cutoff;
  s.requested_cutoff = e.requested_cutoff;
  s.tail_bound = e.tail_bound;
  s.decay_exponent = e.decay_exponent;
  s.tail_constant = e.tail_constant;
  s.heuristic = e.heuristic;
  s.budget_limited = e.budget_limited;
  s.decay_fitted = e.decay_fitted;
  return s;
}

bool ExperimentReport::any_budget_abort() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const auto& r) { return r.error && (r.error->rfind("budget", 0) == 0 || r.error->rfind("partial", 0) == 0); });
}

bool operator==(const SigmaEstimate& a, const SigmaEstimate& b) {
  return a.value == b.value && a.method == b.method && a.witness_primes == b.witness_primes &&
         a.singular_counts == b.singular_counts && a.disagreement == b.disagreement;
}

bool operator==(const HypothesisReport& a, const HypothesisReport& b) {
  return a.mode == b.mode && a.checks == b.checks && a.sigma_used == b.sigma_used;
}

bool operator==(const ExperimentReport& a, const ExperimentReport& b) {
  return a.config == b.config && a.hypotheses == b.hypotheses && a.gated == b.gated && a.heuristic == b.heuristic &&
         a.euler == b.euler && a.rows == b.rows && a.version == b.version && a.wall_seconds == b.wall_seconds;
}

HypothesisReport check_config_hypotheses(const ExperimentConfig& config) {
  const auto fs = config.parsed_polynomials();
  HypothesisOptions options;
  options.sigma_override = config.sigma_override;
  return check_hypotheses(fs, config.box, config.mode, options);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;
  report.version = kVersion;
  const auto fs = config.parsed_polynomials();
  report.hypotheses = check_config_hypotheses(config);
  const bool passed = report.hypotheses.all_passed();
  auto finish = [&] {
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
  };
  if (!passed && !config.force) {
    report.gated = true;
    return finish();
  }
  report.heuristic = !passed;

  EulerOptions euler_options;
  euler_options.count.budget = config.local_budget;
  euler_options.count.threads = config.threads;
  euler_options.force = config.force;
  std::optional<EulerProductEstimate> euler;
  std::string euler_error;
  try {
    euler = euler_product(fs, config.mode, config.euler_cutoff, report.hypotheses.sigma_used, euler_options);
    report.euler = summarize(*euler);
  } catch (const BudgetExceeded& e) {
    euler_error = std::string("budget: ") + e.what();
  } catch (const Error& e) {
    euler_error = std::string("euler product: ") + e.what();
  }

  auto grid = config.P_grid;
  std::sort(grid.begin(), grid.end());
  CountingOptions counting;
  counting.lattice_budget = config.lattice_budget;
  counting.threads = config.threads;
  IntegralOptions integral;
  integral.tol = config.quadrature_tolerance;
  integral.max_evaluations = config.quadrature_evaluations;

  for (const auto P : grid) {
    ExperimentRow row;
    row.P = P;
    try {
      const BigInt points = config.box.lattice_point_count(P);
      if (!fits_int64(points)) throw BudgetExceeded("lattice point count exceeds 64 bits");
      row.lattice_points = to_uint64(points);
      const CountResult count = count_values(fs, config.box, P, config.mode, counting);
      row.empirical = count.count;
      if (count.partial) {
        row.error = "partial: " + std::to_string(count.unknown) + " values with unknown square-free status";
        report.rows.push_back(row);
        continue;
      }
      if (!euler) {
        row.error = euler_error;
        report.rows.push_back(row);
        continue;
      }
      row.euler_value = static_cast<double>(euler->value);
      row.euler_tail = euler->tail_bound;
      if (config.mode == DensityMode::squarefree) {
        row.li_value = static_cast<double>(row.lattice_points);
        row.li_error = 0.0;
      } else {
        const QuadratureResult li = config.mode == DensityMode::joint
                                        ? li_joint(fs, config.box, static_cast<double>(P), integral)
                                        : li_f(fs.front(), config.box, static_cast<double>(P), integral);
        row.li_value = li.value;
        row.li_error = li.abs_error_estimate;
      }
      row.predicted = *row.euler_value * *row.li_value;
      if (*row.predicted > 0) row.ratio = static_cast<double>(*row.empirical) / *row.predicted;
    } catch (const BudgetExceeded& e) {
      row.error = std::string("budget: ") + e.what();
    } catch (const Error& e) {
      row.error = std::string("error: ") + e.what();
    }
    report.rows.push_back(row);
  }
  return finish();
}

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

json to_json(const HypothesisReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
  return {{"mode", to_string(r.mode)},
          {"checks", checks},
          {"sigma",
           {{"value", r.sigma_used.value},
            {"method", to_string(r.sigma_used.method)},
            {"witness_primes", r.sigma_used.witness_primes},
            {"singular_counts", r.sigma_used.singular_counts},
            {"disagreement", r.sigma_used.disagreement}}},
          {"all_passed", r.all_passed()}};
}

HypothesisReport hypothesis_report_from_json(const json& j) {
  HypothesisReport r;
  r.mode = density_mode_from_string(j.at("mode").get<std::string>());
  for (const auto& c : j.at("checks")) {
    r.checks.push_back({c.at("name").get<std::string>(), check_status_from_string(c.at("status").get<std::string>()),
                        c.at("detail").get<std::string>()});
  }
  const auto& s = j.at("sigma");
  r.sigma_used.value = s.at("value").get<int>();
  const auto method = s.at("method").get<std::string>();
  r.sigma_used.method = method == "user-supplied" ? SigmaMethod::user_supplied : SigmaMethod::mod_p_estimated;
  r.sigma_used.witness_primes = s.at("witness_primes").get<std::vector<std::uint64_t>>();
  r.sigma_used.singular_counts = s.at("singular_counts").get<std::vector<std::uint64_t>>();
  r.sigma_used.disagreement = s.at("disagreement").get<bool>();
  return r;
}

json to_json(const ExperimentReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"P", row.P},
                    {"lattice_points", row.lattice_points},
                    {"empirical", opt(row.empirical)},
                    {"predicted", opt(row.predicted)},
                    {"ratio", opt(row.ratio)},
                    {"euler_value", opt(row.euler_value)},
                    {"euler_tail", opt(row.euler_tail)},
                    {"li_value", opt(row.li_value)},
                    {"li_error", opt(row.li_error)},
                    {"error", opt(row.error)}});
  }
  json euler = nullptr;
  if (r.euler) {
    const auto& e = *r.euler;
    euler = {{"value", e.value},
             {"value_double", e.value_double},
             {"cutoff", e.cutoff},
             {"requested_cutoff", e.requested_cutoff},
             {"tail_bound", e.tail_bound},
             {"decay_exponent", e.decay_exponent},
             {"tail_constant", e.tail_constant},
             {"heuristic", e.heuristic},
             {"budget_limited", e.budget_limited},
             {"decay_fitted", e.decay_fitted}};
  }
  return {{"config", to_json(r.config)},
          {"hypotheses", to_json(r.hypotheses)},
          {"gated", r.gated},
          {"heuristic", r.heuristic},
          {"euler_product", euler},
          {"rows", rows},
          {"metadata", {{"version", r.version}, {"wall_seconds", r.wall_seconds}}}};
}

ExperimentReport report_from_json(const json& j) {
  try {
    ExperimentReport r;
    r.config = config_from_json(j.at("config"));
    r.hypotheses = hypothesis_report_from_json(j.at("hypotheses"));
    r.gated = j.at("gated").get<bool>();
    r.heuristic = j.at("heuristic").get<bool>();
    if (!j.at("euler_product").is_null()) {
      const auto& e = j.at("euler_product");
      EulerSummary s;
      s.value = e.at("value").get<std::string>();
      s.value_double = e.at("value_double").get<double>();
      s.cutoff = e.at("cutoff").get<std::uint64_t>();
      s.requested_cutoff = e.at("requested_cutoff").get<std::uint64_t>();
      s.tail_bound = e.at("tail_bound").get<double>();
      s.decay_exponent = e.at("decay_exponent").get<double>();
      s.tail_constant = e.at("tail_constant").get<double>();
      s.heuristic = e.at("heuristic").get<bool>();
      s.budget_limited = e.at("budget_limited").get<bool>();
      s.decay_fitted = e.at("decay_fitted").get<bool>();
      r.euler = s;
    }
    for (const auto& row : j.at("rows")) {
      ExperimentRow x;
      x.P = row.at("P").get<std::int64_t>();
      x.lattice_points = row.at("lattice_points").get<std::uint64_t>();
      x.empirical = opt_from<std::uint64_t>(row, "empirical");
      x.predicted = opt_from<double>(row, "predicted");
      x.ratio = opt_from<double>(row, "ratio");
      x.euler_value = opt_from<double>(row, "euler_value");
      x.euler_tail = opt_from<double>(row, "euler_tail");
      x.li_value = opt_from<double>(row, "li_value");
      x.li_error = opt_from<double>(row, "li_error");
      x.error = opt_from<std::string>(row, "error");
      r.rows.push_back(std::move(x));
    }
    r.version = j.at("metadata").at("version").get<std::string>();
    r.wall_seconds = j.at("metadata").at("wall_seconds").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace polydens
