#include "polydens/detail/mod_sweep.hpp"

namespace polydens::detail {

ModRowPoly::ModRowPoly(const MultiPoly& f, std::uint64_t m) : n_vars_(f.n_vars()), m_(m) {
  if (m == 0 || m >= (std::uint64_t{1} << 32)) {
    throw DomainError("modular enumeration supports moduli below 2^32");
  }
  const std::size_t last = n_vars_ - 1;
  const int d = std::max(f.degree_in(last), 0);
  rows_.resize(static_cast<std::size_t>(d) + 1);
  const BigInt big_m = from_uint64(m);
  BigInt r;
  for (const auto& [e, c] : f.terms()) {
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), big_m.get_mpz_t());
    const std::uint64_t coef = to_uint64(r);
    if (coef == 0) continue;
    std::vector<std::uint32_t> prefix(e.begin(), e.end() - 1);
    for (auto x : prefix) max_prefix_exp_ = std::max(max_prefix_exp_, x);
    rows_[e[last]].push_back({coef, std::move(prefix)});
  }
}

void ModRowPoly::row_coefficients(const std::vector<std::vector<std::uint64_t>>& powers,
                                  std::vector<std::uint64_t>& out) const {
  out.assign(rows_.size(), 0);
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    std::uint64_t acc = 0;
    for (const auto& term : rows_[j]) {
      std::uint64_t v = term.coef;
      for (std::size_t i = 0; i < term.prefix_exp.size(); ++i) {
        if (term.prefix_exp[i] != 0) v = v * powers[i][term.prefix_exp[i]] % m_;
      }
      acc += v;
      if (acc >= m_) acc -= m_;
    }
    out[j] = acc;
  }
}

void ModRowWalker::start(std::span<const std::uint64_t> coeffs, std::uint64_t t0, std::uint64_t m) {
  m_ = m;
  const std::size_t d = coeffs.size() - 1;
  diff_.assign(d + 1, 0);
  for (std::size_t i = 0; i <= d; ++i) {
    const std::uint64_t t = (t0 + i) % m;
    std::uint64_t v = 0;
    for (std::size_t j = coeffs.size(); j-- > 0;) v = (v * t + coeffs[j]) % m;
    diff_[i] = v;
  }
  for (std::size_t k = 1; k <= d; ++k) {
    for (std::size_t i = d; i >= k; --i) {
      diff_[i] = (diff_[i] + m - diff_[i - 1]) % m;
    }
  }
}

std::uint64_t checked_space_size(std::uint64_t m, std::size_t n, std::uint64_t budget,
                                 const char* operation) {
  uint128 size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    size *= m;
    if (size > budget) {
      throw BudgetExceeded(std::string(operation) + ": " + std::to_string(m) + "^" +
                           std::to_string(n) + " points exceed the enumeration budget of " +
                           std::to_string(budget));
    }
  }
  return static_cast<std::uint64_t>(size);
}

}  // namespace polydens::detail
