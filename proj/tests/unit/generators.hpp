#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "polydens/multipoly.hpp"

namespace testgen {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

/// Random polynomial with up to `terms` terms, total degree <= max_degree and
/// coefficients in [-coef, coef]; never zero, never constant.
inline polydens::MultiPoly random_poly(std::size_t n, int max_degree, int terms, std::int64_t coef) {
  for (;;) {
    polydens::MultiPoly::TermMap map;
    for (int t = 0; t < terms; ++t) {
      polydens::Exponents e(n, 0);
      int budget = static_cast<int>(uniform(0, max_degree));
      for (std::size_t i = 0; i < n && budget > 0; ++i) {
        const auto k = static_cast<std::uint32_t>(uniform(0, budget));
        e[i] = k;
        budget -= static_cast<int>(k);
      }
      std::int64_t c = uniform(-coef, coef);
      if (c == 0) c = 1;
      map[e] += polydens::BigInt(static_cast<long>(c));
    }
    polydens::MultiPoly f(n, map);
    if (!f.is_constant()) return f;
  }
}

/// Independent evaluator: f(x) mod m from the term map with naive powers.
inline std::uint64_t eval_mod(const polydens::MultiPoly& f, const std::vector<std::uint64_t>& x, std::uint64_t m) {
  std::uint64_t total = 0;
  for (const auto& [e, c] : f.terms()) {
    polydens::BigInt r = c % polydens::BigInt(static_cast<unsigned long>(m));
    if (r < 0) r += static_cast<unsigned long>(m);
    std::uint64_t term = r.get_ui();
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) term = term * (x[i] % m) % m;
    }
    total = (total + term) % m;
  }
  return total;
}

/// Brute-force zero count over (Z/mZ)^n.
inline std::uint64_t brute_zero_count(const polydens::MultiPoly& f, std::uint64_t m) {
  const std::size_t n = f.n_vars();
  std::vector<std::uint64_t> x(n, 0);
  std::uint64_t count = 0;
  for (;;) {
    count += eval_mod(f, x, m) == 0;
    std::size_t i = 0;
    while (i < n && ++x[i] == m) x[i++] = 0;
    if (i == n) return count;
  }
}

inline bool trial_division_prime(std::int64_t m) {
  if (m < 2) return false;
  for (std::int64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) return false;
  }
  return true;
}

inline bool trial_division_squarefree(std::int64_t m) {
  if (m == 0) return false;
  if (m < 0) m = -m;
  for (std::int64_t d = 2; d * d <= m; ++d) {
    if (m % (d * d) == 0) return false;
  }
  return true;
}

}  // namespace testgen
