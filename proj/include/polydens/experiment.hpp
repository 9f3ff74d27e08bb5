#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polydens/box.hpp"
#include "polydens/hypotheses.hpp"
#include "polydens/local_counts.hpp"
#include "polydens/multipoly.hpp"

namespace polydens {

struct ExperimentConfig {
  std::vector<std::string> polynomials;
  Box box{std::vector<ClosedInterval>{{0, 1}}};
  DensityMode mode = DensityMode::prime;
  std::vector<std::int64_t> P_grid;
  std::uint64_t euler_cutoff = 1000;
  /// Relative tolerance of the singular-integral quadrature.
  double quadrature_tolerance = 1e-9;
  std::optional<int> sigma_override;
  bool force = false;
  unsigned threads = 1;
  /// Residues enumerated per local count.
  std::uint64_t local_budget = 100'000'000;
  std::uint64_t lattice_budget = 1'000'000'000;
  std::uint64_t quadrature_evaluations = 50'000'000;

  std::vector<MultiPoly> parsed_polynomials() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Validates and reads the JSON configuration; throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

struct EulerSummary {
  std::string value;
  double value_double = 0;
  std::uint64_t cutoff = 0;
  std::uint64_t requested_cutoff = 0;
  double tail_bound = 0;
  double decay_exponent = 0;
  double tail_constant = 0;
  bool heuristic = false;
  bool budget_limited = false;
  bool decay_fitted = false;

  friend bool operator==(const EulerSummary&, const EulerSummary&) = default;
};

EulerSummary summarize(const EulerProductEstimate& e);

struct ExperimentRow {
  std::int64_t P = 0;
  std::uint64_t lattice_points = 0;
  std::optional<std::uint64_t> empirical;
  std::optional<double> predicted;
  std::optional<double> ratio;
  std::optional<double> euler_value;
  std::optional<double> euler_tail;
  /// Li_f(P·B) in prime and joint modes, the lattice-point count in
  /// square-free mode.
  std::optional<double> li_value;
  std::optional<double> li_error;
  /// Why the row has no prediction or ratio (budget abort, unknown verdicts).
  std::optional<std::string> error;

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

struct ExperimentReport {
  ExperimentConfig config;
  HypothesisReport hypotheses;
  /// No rows because a hypothesis failed and force was not set.
  bool gated = false;
  /// Rows were produced although some hypothesis did not pass.
  bool heuristic = false;
  std::optional<EulerSummary> euler;
  std::vector<ExperimentRow> rows;
  std::string version;
  double wall_seconds = 0;

  bool any_budget_abort() const;
};

bool operator==(const HypothesisReport& a, const HypothesisReport& b);
bool operator==(const SigmaEstimate& a, const SigmaEstimate& b);
bool operator==(const ExperimentReport& a, const ExperimentReport& b);

/// Gates on the hypotheses, then for each P (ascending) counts, predicts and
/// compares. A budget failure in one row is recorded in that row only.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// The hypothesis report alone.
HypothesisReport check_config_hypotheses(const ExperimentConfig& config);

nlohmann::json to_json(const HypothesisReport& report);
HypothesisReport hypothesis_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

extern const char* const kVersion;

}  // namespace polydens
