#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "polydens/error.hpp"
#include "polydens/multipoly.hpp"

namespace polydens::detail {

/// f reduced mod m and regrouped as a polynomial in the last variable whose
/// coefficients are polynomials in the leading n-1 variables.
class ModRowPoly {
 public:
  ModRowPoly(const MultiPoly& f, std::uint64_t m);

  std::size_t n_vars() const noexcept { return n_vars_; }
  std::uint64_t modulus() const noexcept { return m_; }
  std::size_t row_degree() const noexcept { return rows_.size() - 1; }
  std::uint32_t max_prefix_exponent() const noexcept { return max_prefix_exp_; }

  /// out[j] = coefficient of t^j for the given prefix; powers[i][e] must
  /// hold prefix[i]^e mod m.
  void row_coefficients(const std::vector<std::vector<std::uint64_t>>& powers,
                        std::vector<std::uint64_t>& out) const;

 private:
  struct Term {
    std::uint64_t coef;
    std::vector<std::uint32_t> prefix_exp;
  };
  std::size_t n_vars_;
  std::uint64_t m_;
  std::uint32_t max_prefix_exp_ = 0;
  std::vector<std::vector<Term>> rows_;
};

/// Walks a univariate row polynomial along consecutive t with a
/// forward-difference table: each step costs row_degree additions mod m.
class ModRowWalker {
 public:
  void start(std::span<const std::uint64_t> coeffs, std::uint64_t t0, std::uint64_t m);
  std::uint64_t value() const noexcept { return diff_[0]; }
  void advance() noexcept {
    for (std::size_t k = 0; k + 1 < diff_.size(); ++k) {
      std::uint64_t s = diff_[k] + diff_[k + 1];
      diff_[k] = s >= m_ ? s - m_ : s;
    }
  }

 private:
  std::vector<std::uint64_t> diff_;
  std::uint64_t m_ = 1;
};

/// Visits every point of a slab of (Z/mZ)^n, calling
/// visit(const std::uint64_t* values, std::span<const std::uint64_t> prefix, t)
/// with values[k] = polys[k](x) mod m. The slab restricts the first
/// coordinate to [first_lo, first_hi) (for n == 1 that is the sweep axis).
/// Every other coordinate runs over [0, extent); extent may be smaller than m.
template <class Visitor>
void sweep_mod_extent(std::span<const ModRowPoly> polys, std::uint64_t extent,
                      std::uint64_t first_lo, std::uint64_t first_hi, Visitor&& visit) {
  if (polys.empty()) return;
  const std::size_t n = polys.front().n_vars();
  const std::uint64_t m = polys.front().modulus();
  const std::size_t prefix_len = n - 1;
  std::uint32_t max_exp = 0;
  for (const auto& p : polys) max_exp = std::max(max_exp, p.max_prefix_exponent());

  std::vector<std::uint64_t> prefix(prefix_len, 0);
  std::vector<std::vector<std::uint64_t>> powers(prefix_len,
                                                 std::vector<std::uint64_t>(max_exp + 1, 0));
  auto fill_powers = [&](std::size_t i) {
    powers[i][0] = 1 % m;
    for (std::uint32_t e = 1; e <= max_exp; ++e) powers[i][e] = powers[i][e - 1] * prefix[i] % m;
  };

  std::uint64_t t_lo = 0;
  std::uint64_t t_hi = extent;
  if (prefix_len == 0) {
    t_lo = first_lo;
    t_hi = first_hi;
  } else {
    if (first_lo >= first_hi) return;
    prefix[0] = first_lo;
  }
  for (std::size_t i = 0; i < prefix_len; ++i) fill_powers(i);

  std::vector<ModRowWalker> walkers(polys.size());
  std::vector<std::uint64_t> coeffs;
  std::vector<std::uint64_t> values(polys.size());
  for (;;) {
    for (std::size_t k = 0; k < polys.size(); ++k) {
      polys[k].row_coefficients(powers, coeffs);
      walkers[k].start(coeffs, t_lo, m);
    }
    for (std::uint64_t t = t_lo; t < t_hi; ++t) {
      for (std::size_t k = 0; k < polys.size(); ++k) {
        values[k] = walkers[k].value();
        walkers[k].advance();
      }
      visit(values.data(), std::span<const std::uint64_t>(prefix), t);
    }
    // Odometer over the prefix, the first coordinate being the slowest.
    std::size_t i = prefix_len;
    while (i > 0) {
      --i;
      const std::uint64_t limit = i == 0 ? first_hi : extent;
      if (++prefix[i] < limit) {
        fill_powers(i);
        break;
      }
      if (i == 0) return;
      prefix[i] = 0;
      fill_powers(i);
    }
    if (prefix_len == 0) return;
  }
}

template <class Visitor>
void sweep_mod(std::span<const ModRowPoly> polys, std::uint64_t first_lo, std::uint64_t first_hi,
               Visitor&& visit) {
  if (polys.empty()) return;
  sweep_mod_extent(polys, polys.front().modulus(), first_lo, first_hi, std::forward<Visitor>(visit));
}

/// Throws BudgetExceeded unless m^n <= budget; returns m^n.
std::uint64_t checked_space_size(std::uint64_t m, std::size_t n, std::uint64_t budget,
                                 const char* operation);

}  // namespace polydens::detail
