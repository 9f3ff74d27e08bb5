#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polydens/box.hpp"
#include "polydens/local_counts.hpp"
#include "polydens/multipoly.hpp"
#include "polydens/poly_analysis.hpp"

namespace polydens {

enum class CheckStatus { pass, fail, unknown };

std::string to_string(CheckStatus s);
CheckStatus check_status_from_string(const std::string& text);

struct HypothesisCheck {
  std::string name;
  CheckStatus status = CheckStatus::unknown;
  std::string detail;

  friend bool operator==(const HypothesisCheck&, const HypothesisCheck&) = default;
};

struct HypothesisReport {
  DensityMode mode = DensityMode::prime;
  std::vector<HypothesisCheck> checks;
  SigmaEstimate sigma_used;

  bool all_passed() const;
};

struct HypothesisOptions {
  std::optional<int> sigma_override;
  /// Residue budget for the singular-locus estimate.
  std::uint64_t sigma_budget = 10'000'000;
  /// Primes tried by the irreducibility heuristic.
  std::vector<std::uint64_t> irreducibility_primes = {3, 5, 7, 11, 13, 17, 19, 23};
};

/// Evaluates every hypothesis the chosen mode depends on.
///
/// prime: n - σ >= max{4, (d-1)2^(d-1) + 1}, f0 > 0 on the box, content 1,
/// irreducibility, no fixed prime divisor.
/// squarefree: n - σ > max{1, (d-1)2^d / 3}, separability.
/// joint: pairwise distinct, content 1, each f_i irreducible, no repeated
/// factor in the product, each f_i0 > 0 on the box, no fixed prime divisor
/// of the product.
HypothesisReport check_hypotheses(std::span<const MultiPoly> fs, const Box& box, DensityMode mode,
                                  const HypothesisOptions& options = {});

/// σ from the override when present, otherwise estimated from the top form.
SigmaEstimate resolve_sigma(const MultiPoly& f, const std::optional<int>& sigma_override,
                            std::uint64_t budget = 10'000'000);

}  // namespace polydens
