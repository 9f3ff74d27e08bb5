#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polydens/bigint.hpp"
#include "polydens/box.hpp"
#include "polydens/local_counts.hpp"
#include "polydens/multipoly.hpp"

namespace polydens {

struct CountingOptions {
  std::uint64_t lattice_budget = 1'000'000'000;
  unsigned threads = 1;
  /// Largest value range served by a precomputed prime or square-free table;
  /// wider ranges are tested value by value.
  std::uint64_t table_limit = 200'000'000;
};

struct CountResult {
  std::uint64_t count = 0;
  std::uint64_t lattice_points = 0;
  std::int64_t P = 0;
  double elapsed_seconds = 0;
  DensityMode mode = DensityMode::prime;
  /// Values whose square-free status could not be decided.
  std::uint64_t unknown = 0;
  /// Values declared prime only probabilistically (beyond 3.3e24).
  std::uint64_t unproven = 0;
  /// Set when unknown > 0: the count is then a lower bound only.
  bool partial = false;
};

/// Counts lattice points x of P·box with f(x) a positive prime (prime), f(x)
/// square-free (squarefree) or every f_i(x) a positive prime (joint).
/// Slabs of the first coordinate run in parallel and merge in order; each
/// row along the last coordinate is walked with a finite-difference table.
CountResult count_values(std::span<const MultiPoly> fs, const Box& box, std::int64_t P, DensityMode mode,
                         const CountingOptions& options = {});

/// f(prefix, t0), ..., f(prefix, t0 + count - 1) produced by the same
/// finite-difference walk the counter uses.
std::vector<BigInt> evaluate_row(const MultiPoly& f, std::span<const std::int64_t> prefix, std::int64_t t0,
                                 std::uint64_t count);

}  // namespace polydens
