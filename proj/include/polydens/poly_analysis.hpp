#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polydens/multipoly.hpp"

namespace polydens {

enum class SigmaMethod { user_supplied, mod_p_estimated };

/// Dimension of the affine singular locus {∇f0 = 0} of the top-degree form.
struct SigmaEstimate {
  int value = 0;
  SigmaMethod method = SigmaMethod::user_supplied;
  std::vector<std::uint64_t> witness_primes;
  /// #{x in F_p^n : ∇f0(x) = 0} for each witness prime.
  std::vector<std::uint64_t> singular_counts;
  /// Set when the per-prime estimates were not unanimous.
  bool disagreement = false;
};

/// Validates 0 <= value <= n - 1.
SigmaEstimate user_sigma(int value, std::size_t n_vars);

/// Counts the common zeros of all partial derivatives of f0 over F_p^n for
/// every listed prime and returns the majority of round(log N_p / log p).
/// An empty singular locus (N_p = 0) counts as dimension 0.
SigmaEstimate singular_dimension_estimate(const MultiPoly& f0, std::span<const std::uint64_t> primes,
                                          std::uint64_t budget = 10'000'000);

/// The first few primes p > max(deg f0, 3) with p^n within budget.
std::vector<std::uint64_t> default_sigma_primes(const MultiPoly& f0, std::uint64_t budget = 10'000'000,
                                                std::size_t count = 3);

/// gcd over Z[x1..xn], normalised to a positive leading coefficient (in lex
/// order). gcd(0, 0) is 0.
MultiPoly polynomial_gcd(const MultiPoly& a, const MultiPoly& b);

/// f divided by its content.
MultiPoly primitive_part(const MultiPoly& f);

enum class Separability { separable, not_separable };

/// Separable iff gcd(f, ∂f/∂x1, ..., ∂f/∂xn) over Q is constant.
Separability separability_check(const MultiPoly& f);

enum class Irreducibility { irreducible, reducible, unknown };

struct IrreducibilityReport {
  Irreducibility verdict = Irreducibility::unknown;
  /// Prime at which f stayed irreducible with its degree intact.
  std::optional<std::uint64_t> witness_prime;
  /// A proper factor over Z, when one was found.
  std::optional<MultiPoly> factor;
  std::string detail;
};

struct IrreducibilityOptions {
  /// Candidate factors examined per prime before giving up on it.
  std::uint64_t candidate_budget = 200'000;
};

/// Heuristic irreducibility gate. `irreducible` is proven (f mod p is
/// irreducible of the same total degree for a listed p); `reducible` comes
/// with an explicit factor; otherwise `unknown`. Requires content 1.
IrreducibilityReport heuristic_irreducibility(const MultiPoly& f, std::span<const std::uint64_t> primes,
                                              const IrreducibilityOptions& options = {});

std::string to_string(Separability s);
std::string to_string(Irreducibility v);
std::string to_string(SigmaMethod m);

}  // namespace polydens
