#include "polydens/local_counts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polydens/detail/mod_sweep.hpp"
#include "polydens/detail/parallel.hpp"
#include "polydens/error.hpp"
#include "polydens/primality.hpp"
#include "polydens/sieve.hpp"

namespace polydens {

std::string to_string(DensityMode mode) {
  switch (mode) {
    case DensityMode::prime: return "prime";
    case DensityMode::squarefree: return "squarefree";
    case DensityMode::joint: return "joint";
  }
  return "prime";
}

DensityMode density_mode_from_string(const std::string& text) {
  if (text == "prime") return DensityMode::prime;
  if (text == "squarefree") return DensityMode::squarefree;
  if (text == "joint") return DensityMode::joint;
  throw ConfigError("unknown mode '" + text + "' (expected prime, squarefree or joint)");
}

namespace {

std::uint64_t isqrt_exact(std::uint64_t m) {
  auto s = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(m))));
  return s * s == m ? s : 0;
}

void check_prime(std::uint64_t p, const char* op) {
  if (!is_prime_u64(p)) throw DomainError(std::string(op) + ": " + std::to_string(p) + " is not prime");
}

/// Runs visit-based counting over slabs of the first coordinate in
/// parallel and sums the per-slab counts in slab order.
template <class SlabCount>
std::uint64_t parallel_count(std::uint64_t extent, unsigned threads, SlabCount count) {
  const auto parts = detail::run_chunks(0, static_cast<std::int64_t>(extent), threads,
                                        [&](std::int64_t a, std::int64_t b) {
                                          return count(static_cast<std::uint64_t>(a),
                                                       static_cast<std::uint64_t>(b));
                                        });
  return std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
}

}  // namespace

std::uint64_t count_zeros_exhaustive(const MultiPoly& f, std::uint64_t modulus, const CountOptions& options) {
  require_nonconstant(f, "count_zeros_exhaustive");
  if (modulus < 2 || modulus >= (std::uint64_t{1} << 32)) {
    throw DomainError("count_zeros_exhaustive: modulus out of range");
  }
  detail::checked_space_size(modulus, f.n_vars(), options.budget, "count_zeros_mod");
  const std::vector<detail::ModRowPoly> polys{detail::ModRowPoly(f, modulus)};
  return parallel_count(modulus, options.threads, [&](std::uint64_t a, std::uint64_t b) {
    std::uint64_t c = 0;
    detail::sweep_mod(std::span<const detail::ModRowPoly>(polys), a, b,
                      [&](const std::uint64_t* v, std::span<const std::uint64_t>, std::uint64_t) {
                        c += v[0] == 0;
                      });
    return c;
  });
}

std::uint64_t count_zeros_mod(const MultiPoly& f, std::uint64_t modulus, const CountOptions& options) {
  require_nonconstant(f, "count_zeros_mod");
  if (is_prime_u64(modulus)) return count_zeros_exhaustive(f, modulus, options);
  const std::uint64_t p = modulus > 3 ? isqrt_exact(modulus) : 0;
  if (p == 0 || !is_prime_u64(p)) {
    throw DomainError("count_zeros_mod: modulus " + std::to_string(modulus) + " is neither p nor p^2");
  }
  if (modulus >= (std::uint64_t{1} << 32)) throw DomainError("count_zeros_mod: modulus too large");
  const std::size_t n = f.n_vars();
  detail::checked_space_size(p, n, options.budget, "count_zeros_mod");

  std::vector<detail::ModRowPoly> polys{detail::ModRowPoly(f, modulus)};
  for (std::size_t i = 0; i < n; ++i) polys.emplace_back(f.derivative(i), modulus);
  std::uint64_t p_pow_n1 = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) p_pow_n1 *= p;
  const std::uint64_t p_pow_n = p_pow_n1 * p;

  return parallel_count(p, options.threads, [&](std::uint64_t a, std::uint64_t b) {
    std::uint64_t c = 0;
    detail::sweep_mod_extent(std::span<const detail::ModRowPoly>(polys), p, a, b,
                             [&](const std::uint64_t* v, std::span<const std::uint64_t>, std::uint64_t) {
                               if (v[0] % p != 0) return;
                               for (std::size_t i = 1; i <= n; ++i) {
                                 if (v[i] % p != 0) {
                                   c += p_pow_n1;
                                   return;
                                 }
                               }
                               if (v[0] == 0) c += p_pow_n;
                             });
    return c;
  });
}

std::uint64_t count_union_zeros_mod_p(std::span<const MultiPoly> fs, std::uint64_t p,
                                      const CountOptions& options) {
  if (fs.empty()) throw DomainError("count_union_zeros_mod_p: no polynomials");
  check_prime(p, "count_union_zeros_mod_p");
  if (p >= (std::uint64_t{1} << 32)) throw DomainError("count_union_zeros_mod_p: prime too large");
  std::vector<detail::ModRowPoly> polys;
  for (const auto& f : fs) {
    require_nonconstant(f, "count_union_zeros_mod_p");
    if (f.n_vars() != fs.front().n_vars()) throw DomainError("polynomials differ in variable count");
    polys.emplace_back(f, p);
  }
  detail::checked_space_size(p, fs.front().n_vars(), options.budget, "count_union_zeros_mod_p");
  return parallel_count(p, options.threads, [&](std::uint64_t a, std::uint64_t b) {
    std::uint64_t c = 0;
    detail::sweep_mod(std::span<const detail::ModRowPoly>(polys), a, b,
                      [&](const std::uint64_t* v, std::span<const std::uint64_t>, std::uint64_t) {
                        for (std::size_t k = 0; k < polys.size(); ++k) {
                          if (v[k] == 0) {
                            ++c;
                            return;
                          }
                        }
                      });
    return c;
  });
}

std::vector<std::uint64_t> fixed_prime_divisors(const MultiPoly& f, const CountOptions&) {
  require_nonconstant(f, "fixed_prime_divisors");
  if (content(f) != 1) throw DomainError("fixed_prime_divisors: content must be 1");
  std::vector<std::uint64_t> out;
  const auto d = static_cast<std::uint64_t>(f.degree());
  for (auto p : primes_up_to(d)) {
    // f vanishes on all of F_p^n iff its reduction under x^p = x is zero mod p.
    std::map<Exponents, std::uint64_t> reduced;
    for (const auto& [e, c] : f.terms()) {
      Exponents r = e;
      for (auto& x : r) {
        if (x > 0) x = (x - 1) % static_cast<std::uint32_t>(p - 1) + 1;
      }
      auto& slot = reduced[r];
      slot = (slot + mpz_fdiv_ui(c.get_mpz_t(), p)) % p;
    }
    const bool vanishes = std::all_of(reduced.begin(), reduced.end(),
                                      [](const auto& kv) { return kv.second == 0; });
    if (vanishes) out.push_back(p);
  }
  return out;
}

namespace {

BigInt ipow(std::uint64_t p, std::size_t k) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, k);
  return r;
}

LocalFactor finish(std::uint64_t p, Rational exact, std::uint64_t n_p) {
  exact.canonicalize();
  LocalFactor lf;
  lf.p = p;
  lf.value = to_high_real(exact);
  lf.exact = std::move(exact);
  lf.n_p = n_p;
  return lf;
}

}  // namespace

LocalFactor prime_euler_factor(const MultiPoly& f, std::uint64_t p, const CountOptions& options) {
  check_prime(p, "prime_euler_factor");
  const std::uint64_t n_p = count_zeros_mod(f, p, options);
  const Rational density(from_uint64(n_p), ipow(p, f.n_vars()));
  const Rational local = Rational(1) - density;
  return finish(p, local / (Rational(1) - Rational(1, p)), n_p);
}

LocalFactor squarefree_euler_factor(const MultiPoly& f, std::uint64_t p, const CountOptions& options) {
  check_prime(p, "squarefree_euler_factor");
  const std::uint64_t n_p2 = count_zeros_mod(f, p * p, options);
  const Rational density(from_uint64(n_p2), ipow(p, 2 * f.n_vars()));
  LocalFactor lf = finish(p, Rational(1) - density, 0);
  lf.n_p = count_zeros_mod(f, p, options);
  lf.n_p2 = n_p2;
  return lf;
}

LocalFactor joint_euler_factor(std::span<const MultiPoly> fs, std::uint64_t p, const CountOptions& options) {
  const std::uint64_t n_p = count_union_zeros_mod_p(fs, p, options);
  const Rational density(from_uint64(n_p), ipow(p, fs.front().n_vars()));
  Rational denom = 1;
  for (std::size_t i = 0; i < fs.size(); ++i) denom *= Rational(1) - Rational(1, p);
  return finish(p, (Rational(1) - density) / denom, n_p);
}

namespace {

constexpr double kPrimeCountConstant = 1.25506;

/// Least-squares slope of log|δ_p| against log p over the nonzero
/// deviations among the last 50 factors.
std::optional<double> fitted_decay(const std::vector<LocalFactor>& factors) {
  std::vector<std::pair<double, double>> pts;
  for (auto it = factors.rbegin(); it != factors.rend() && pts.size() < 50; ++it) {
    const double dev = std::abs(static_cast<double>(it->value - 1));
    if (dev > 0 && it->p >= 5) pts.emplace_back(std::log(static_cast<double>(it->p)), std::log(dev));
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0) return std::nullopt;
  return -sxy / sxx;
}

}  // namespace

EulerProductEstimate euler_product(std::span<const MultiPoly> fs, DensityMode mode, std::uint64_t cutoff,
                                   const SigmaEstimate& sigma, const EulerOptions& options) {
  if (fs.empty()) throw DomainError("euler_product: no polynomials");
  if (cutoff < 2) throw DomainError("euler_product: cutoff must be at least 2");
  if (mode != DensityMode::joint && fs.size() != 1) {
    throw DomainError("euler_product: " + to_string(mode) + " mode takes exactly one polynomial");
  }
  const std::size_t n = fs.front().n_vars();
  const int gap = static_cast<int>(n) - sigma.value;

  EulerProductEstimate est;
  est.requested_cutoff = cutoff;
  if (mode == DensityMode::prime && gap < 3) {
    if (!options.force) {
      throw HypothesisError("prime-density product needs n - sigma >= 3 (have " + std::to_string(gap) +
                            "); set force to compute it anyway");
    }
    est.heuristic = true;
  }

  const auto primes = primes_up_to(cutoff);
  for (auto p : primes) {
    if (mode == DensityMode::squarefree && p >= 65536) {
      est.budget_limited = true;
      break;
    }
    try {
      detail::checked_space_size(p, n, options.count.budget, "euler_product");
    } catch (const BudgetExceeded&) {
      est.budget_limited = true;
      break;
    }
    LocalFactor lf;
    switch (mode) {
      case DensityMode::prime: lf = prime_euler_factor(fs.front(), p, options.count); break;
      case DensityMode::squarefree: lf = squarefree_euler_factor(fs.front(), p, options.count); break;
      case DensityMode::joint: lf = joint_euler_factor(fs, p, options.count); break;
    }
    est.value *= lf.value;
    est.cutoff = p;
    est.factors.push_back(std::move(lf));
  }
  if (est.factors.empty()) {
    throw BudgetExceeded("euler_product: not even p = 2 fits the counting budget");
  }

  double e = std::min(2.0, gap / 2.0);
  if (e <= 1.0) {
    est.decay_fitted = true;
    e = std::clamp(fitted_decay(est.factors).value_or(2.0), 1.05, 2.0);
  }
  est.decay_exponent = e;
  double c = 0;
  const std::size_t start = est.factors.size() > 10 ? est.factors.size() - 10 : 0;
  for (std::size_t i = start; i < est.factors.size(); ++i) {
    const auto& lf = est.factors[i];
    const double dev = std::abs(static_cast<double>(lf.value - 1));
    c = std::max(c, dev * std::pow(static_cast<double>(lf.p), e));
  }
  est.tail_constant = c;
  const double x = static_cast<double>(est.budget_limited ? est.cutoff : std::max(est.cutoff, cutoff));
  const double s = c * kPrimeCountConstant * e * std::pow(x, 1.0 - e) / ((e - 1.0) * std::log(x));
  est.tail_bound = std::abs(static_cast<double>(est.value)) * std::expm1(s);
  return est;
}

void write_factors_csv(std::ostream& out, const EulerProductEstimate& estimate) {
  out << "p,N_p,N_p2,factor\r\n";
  for (const auto& lf : estimate.factors) {
    out << lf.p << ',' << lf.n_p << ',';
    if (lf.n_p2) out << *lf.n_p2;
    out << ',' << to_string(lf.value, 20) << "\r\n";
  }
}

}  // namespace polydens
