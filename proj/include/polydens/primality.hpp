#pragma once

#include <cstdint>

#include "polydens/bigint.hpp"

namespace polydens {

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime_u64(std::uint64_t n);

struct PrimalityResult {
  bool prime = false;
  /// False only when |m| >= 3.317e24 and the answer is probabilistic.
  bool proven = true;
};

/// Exact below 3.317e24 (Miller-Rabin with the first 13 prime bases);
/// above that 64 random rounds and proven == false. m <= 1 is not prime.
PrimalityResult primality(const BigInt& m);
bool is_prime(const BigInt& m);

enum class SquarefreeVerdict { squarefree, not_squarefree, unknown };

/// 0 is not square-free and m is square-free iff -m is. Trial division,
/// then Pollard-Brent rho with `rho_budget` iterations per split.
SquarefreeVerdict squarefree_verdict(const BigInt& m, std::uint64_t rho_budget = 2'000'000);
bool is_squarefree_u64(std::uint64_t m);

/// Throws BudgetExceeded when the verdict is unknown.
bool is_squarefree(const BigInt& m);

}  // namespace polydens
