#pragma once

#include <cstdint>
#include <vector>

namespace polydens {

/// All primes <= limit, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// All primes in [lo, hi], ascending, by a segmented sieve of Eratosthenes.
/// Throws BudgetExceeded when hi - lo exceeds 10^9.
std::vector<std::uint64_t> primes_in_interval(std::uint64_t lo, std::uint64_t hi);

/// Dense bit table over [lo, hi].
class BitTable {
 public:
  BitTable() = default;
  BitTable(std::uint64_t lo, std::uint64_t hi, bool initial);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  bool empty() const noexcept { return words_.empty(); }
  bool contains(std::uint64_t v) const noexcept { return !words_.empty() && v >= lo_ && v <= hi_; }
  bool test(std::uint64_t v) const noexcept {
    const auto i = v - lo_;
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::uint64_t v, bool on) noexcept {
    const auto i = v - lo_;
    if (on) {
      words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    } else {
      words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
  }

 private:
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Primality table over [lo, hi] (segmented sieve).
BitTable prime_table(std::uint64_t lo, std::uint64_t hi);
/// Square-freeness table over [lo, hi]; 0 is marked not square-free.
BitTable squarefree_table(std::uint64_t lo, std::uint64_t hi);

}  // namespace polydens
