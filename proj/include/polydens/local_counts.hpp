#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "polydens/bigint.hpp"
#include "polydens/multipoly.hpp"
#include "polydens/poly_analysis.hpp"

namespace polydens {

enum class DensityMode { prime, squarefree, joint };

std::string to_string(DensityMode mode);
/// Accepts "prime", "squarefree" and "joint".
DensityMode density_mode_from_string(const std::string& text);

struct CountOptions {
  /// Maximum residues enumerated by a single count.
  std::uint64_t budget = 100'000'000;
  unsigned threads = 1;
};

/// #{x in (Z/mZ)^n : f(x) = 0} for m = p or m = p^2.
///
/// For m = p the residues are enumerated. For m = p^2 each zero r mod p is
/// lifted exactly: writing x = r + p s gives f(x) = f(r) + p ∇f(r)·s mod p^2,
/// so r has p^(n-1) lifts when ∇f(r) != 0 mod p, and p^n or none otherwise.
/// Both cases cost p^n evaluations.
std::uint64_t count_zeros_mod(const MultiPoly& f, std::uint64_t modulus, const CountOptions& options = {});

/// Plain enumeration over (Z/mZ)^n for any modulus m < 2^32.
std::uint64_t count_zeros_exhaustive(const MultiPoly& f, std::uint64_t modulus,
                                     const CountOptions& options = {});

/// #{x in F_p^n : f_1(x) ... f_r(x) = 0}, counted as the union of the zero
/// sets in one sweep.
std::uint64_t count_union_zeros_mod_p(std::span<const MultiPoly> fs, std::uint64_t p,
                                      const CountOptions& options = {});

/// Primes p <= deg f with f(x) = 0 mod p for every x. Requires content 1.
std::vector<std::uint64_t> fixed_prime_divisors(const MultiPoly& f, const CountOptions& options = {});

struct LocalFactor {
  std::uint64_t p = 0;
  Rational exact;
  HighReal value;
  std::uint64_t n_p = 0;
  std::optional<std::uint64_t> n_p2;
};

/// (1 - N_p/p^n) / (1 - 1/p)
LocalFactor prime_euler_factor(const MultiPoly& f, std::uint64_t p, const CountOptions& options = {});
/// 1 - N_{p^2}/p^(2n)
LocalFactor squarefree_euler_factor(const MultiPoly& f, std::uint64_t p, const CountOptions& options = {});
/// (1 - N_p(f_1...f_r)/p^n) / (1 - 1/p)^r
LocalFactor joint_euler_factor(std::span<const MultiPoly> fs, std::uint64_t p,
                               const CountOptions& options = {});

struct EulerOptions {
  CountOptions count;
  /// Compute the prime-density product even when n - σ < 3.
  bool force = false;
};

struct EulerProductEstimate {
  HighReal value = 1;
  /// Largest prime actually included.
  std::uint64_t cutoff = 0;
  std::uint64_t requested_cutoff = 0;
  double tail_bound = 0;
  double decay_exponent = 0;
  /// max |factor - 1| p^e over the last ten factors.
  double tail_constant = 0;
  /// Convergence hypothesis not met (force was set).
  bool heuristic = false;
  /// Stopped below the requested cutoff because p^n exceeded the budget.
  bool budget_limited = false;
  /// The exponent min(2, (n-σ)/2) was at most 1 and was replaced by a fit.
  bool decay_fitted = false;
  std::vector<LocalFactor> factors;
};

/// Partial Euler product over p <= cutoff with a tail bound
/// |value|·(exp(S) - 1), S = C·Σ_{p > cutoff} p^(-e) bounded through
/// π(x) < 1.25506 x/log x. Prime mode uses fs[0] only and requires
/// n - σ >= 3 unless forced; joint mode uses every polynomial.
EulerProductEstimate euler_product(std::span<const MultiPoly> fs, DensityMode mode, std::uint64_t cutoff,
                                   const SigmaEstimate& sigma, const EulerOptions& options = {});

/// CSV rows p,N_p,N_p2,factor (N_p2 empty outside square-free mode).
void write_factors_csv(std::ostream& out, const EulerProductEstimate& estimate);

}  // namespace polydens
