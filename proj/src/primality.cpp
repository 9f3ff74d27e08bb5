#include "polydens/primality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "polydens/error.hpp"
#include "polydens/sieve.hpp"

namespace polydens {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

bool strong_probable_prime(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  a %= n;
  if (a == 0) return true;
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool strong_probable_prime(const BigInt& n, unsigned long a, const BigInt& d, unsigned long s) {
  BigInt x;
  const BigInt base(a);
  const BigInt n1 = n - 1;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
    if (x == n1) return true;
  }
  return false;
}

const std::vector<std::uint64_t>& trial_primes() {
  static const std::vector<std::uint64_t> primes = primes_up_to(1'000'000);
  return primes;
}

bool is_perfect_square_u64(std::uint64_t r) {
  auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(r)));
  while (s * s > r) --s;
  while ((s + 1) * (s + 1) <= r) ++s;
  return s * s == r;
}

/// Pollard-Brent rho; returns a nontrivial factor of composite n or 0.
BigInt rho_factor(const BigInt& n, std::uint64_t budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 20; ++c) {
    BigInt y = 2, x, g = 1, q = 1, ys, t;
    std::uint64_t r = 1;
    std::uint64_t iterations = 0;
    const std::uint64_t m = 128;
    auto step = [&](BigInt& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        const std::uint64_t lim = std::min(m, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          step(y);
          t = abs(x - y);
          q = q * t;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
        iterations += lim;
      }
      r *= 2;
      if (iterations > budget) return 0;
    }
    if (g == n) {
      do {
        step(ys);
        t = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return 0;
}

/// Collects the prime factors of r (all above the trial bound) into out.
/// Returns false when the budget ran out.
bool split(const BigInt& r, std::uint64_t budget, std::vector<BigInt>& out, bool& repeated) {
  if (r == 1 || repeated) return true;
  if (is_prime(r)) {
    out.push_back(r);
    return true;
  }
  if (mpz_perfect_power_p(r.get_mpz_t())) {
    repeated = true;
    return true;
  }
  const BigInt d = rho_factor(r, budget);
  if (d == 0) return false;
  const BigInt e = r / d;
  BigInt g;
  mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), e.get_mpz_t());
  if (g != 1) {
    repeated = true;
    return true;
  }
  return split(d, budget, out, repeated) && split(e, budget, out, repeated);
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (!strong_probable_prime(n, a, d, s)) return false;
  }
  return true;
}

PrimalityResult primality(const BigInt& m) {
  PrimalityResult r;
  if (m <= 1) return r;
  if (mpz_sizeinbase(m.get_mpz_t(), 2) <= 64) {
    r.prime = is_prime_u64(to_uint64(m));
    return r;
  }
  static const BigInt kDeterministicLimit("3317044064679887385961981");
  if (m < kDeterministicLimit) {
    const BigInt n1 = m - 1;
    const unsigned long s = mpz_scan1(n1.get_mpz_t(), 0);
    BigInt d;
    mpz_fdiv_q_2exp(d.get_mpz_t(), n1.get_mpz_t(), s);
    for (unsigned long a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
      if (mpz_divisible_ui_p(m.get_mpz_t(), a)) return r;
      if (!strong_probable_prime(m, a, d, s)) return r;
    }
    r.prime = true;
    return r;
  }
  r.proven = false;
  r.prime = mpz_probab_prime_p(m.get_mpz_t(), 64) != 0;
  return r;
}

bool is_prime(const BigInt& m) { return primality(m).prime; }

bool is_squarefree_u64(std::uint64_t m) {
  if (m == 0) return false;
  if (m >= 1'000'000'000'000'000'000ULL) return is_squarefree(from_uint64(m));
  const auto& primes = trial_primes();
  // Trial division only up to the cube root: what remains has at most two
  // prime factors, so it is square-free unless it is a perfect square.
  const auto cube_root = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(m))) + 2;
  std::uint64_t r = m;
  for (auto p : primes) {
    if (p > cube_root) break;
    if (r % p == 0) {
      r /= p;
      if (r % p == 0) return false;
    }
  }
  return r == 1 || !is_perfect_square_u64(r);
}

SquarefreeVerdict squarefree_verdict(const BigInt& m, std::uint64_t rho_budget) {
  if (m == 0) return SquarefreeVerdict::not_squarefree;
  BigInt r = abs(m);
  if (mpz_sizeinbase(r.get_mpz_t(), 2) < 60) {
    return is_squarefree_u64(to_uint64(r)) ? SquarefreeVerdict::squarefree
                                           : SquarefreeVerdict::not_squarefree;
  }
  for (auto p : trial_primes()) {
    if (mpz_divisible_ui_p(r.get_mpz_t(), p)) {
      mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), p);
      if (mpz_divisible_ui_p(r.get_mpz_t(), p)) return SquarefreeVerdict::not_squarefree;
    }
  }
  if (r == 1) return SquarefreeVerdict::squarefree;
  static const BigInt kTwoFactorLimit("1000000000000000000");
  if (r < kTwoFactorLimit) {
    return mpz_perfect_square_p(r.get_mpz_t()) ? SquarefreeVerdict::not_squarefree
                                               : SquarefreeVerdict::squarefree;
  }
  std::vector<BigInt> factors;
  bool repeated = false;
  if (!split(r, rho_budget, factors, repeated)) return SquarefreeVerdict::unknown;
  if (repeated) return SquarefreeVerdict::not_squarefree;
  std::sort(factors.begin(), factors.end());
  return std::adjacent_find(factors.begin(), factors.end()) == factors.end()
             ? SquarefreeVerdict::squarefree
             : SquarefreeVerdict::not_squarefree;
}

bool is_squarefree(const BigInt& m) {
  const auto v = squarefree_verdict(m);
  if (v == SquarefreeVerdict::unknown) {
    throw BudgetExceeded("square-free test of " + m.get_str() + " exhausted its factoring budget");
  }
  return v == SquarefreeVerdict::squarefree;
}

}  // namespace polydens
