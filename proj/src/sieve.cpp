#include "polydens/sieve.hpp"

#include <cmath>
#include <string>

#include "polydens/error.hpp"

namespace polydens {

namespace {

constexpr std::uint64_t kMaxSieveRange = 1'000'000'000;
constexpr std::uint64_t kSegment = 1 << 18;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

BitTable::BitTable(std::uint64_t lo, std::uint64_t hi, bool initial) : lo_(lo), hi_(hi) {
  const std::uint64_t bits = hi - lo + 1;
  words_.assign((bits + 63) / 64, initial ? ~std::uint64_t{0} : 0);
}

BitTable prime_table(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) return {};
  if (hi - lo > kMaxSieveRange) throw BudgetExceeded("prime sieve range exceeds 10^9");
  BitTable table(lo, hi, true);
  const auto base = primes_up_to(isqrt(hi));
  for (std::uint64_t v = lo; v <= std::min<std::uint64_t>(hi, 1); ++v) table.set(v, false);
  // Segment so the inner loops stay in cache.
  for (std::uint64_t seg = lo; seg <= hi; seg += kSegment) {
    const std::uint64_t seg_hi = std::min(hi, seg + kSegment - 1);
    for (auto p : base) {
      if (p * p > seg_hi) break;
      std::uint64_t start = std::max(p * p, (seg + p - 1) / p * p);
      for (std::uint64_t j = start; j <= seg_hi; j += p) table.set(j, false);
    }
    if (seg_hi == hi) break;
  }
  return table;
}

std::vector<std::uint64_t> primes_in_interval(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < lo) return out;
  const auto table = prime_table(lo, hi);
  for (std::uint64_t v = lo;; ++v) {
    if (table.test(v)) out.push_back(v);
    if (v == hi) break;
  }
  return out;
}

BitTable squarefree_table(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) return {};
  if (hi - lo > kMaxSieveRange) throw BudgetExceeded("square-free sieve range exceeds 10^9");
  BitTable table(lo, hi, true);
  if (lo == 0) table.set(0, false);
  const auto base = primes_up_to(isqrt(hi));
  for (auto p : base) {
    const std::uint64_t sq = p * p;
    std::uint64_t start = (lo + sq - 1) / sq * sq;
    if (start == 0) start = sq;
    for (std::uint64_t j = start; j <= hi; j += sq) table.set(j, false);
  }
  return table;
}

}  // namespace polydens
