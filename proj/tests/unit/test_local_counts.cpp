#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "generators.hpp"
#include "polydens/error.hpp"
#include "polydens/local_counts.hpp"
#include "polydens/parser.hpp"
#include "polydens/sieve.hpp"

using namespace polydens;

namespace {

MultiPoly P(const char* text, std::size_t n) { return parse_polynomial(text, n); }

double as_double(const Rational& q) { return q.get_d(); }

}  // namespace

TEST_CASE("count_zeros_mod examples") {
  const auto f = P("x1^2+x2^2", 2);
  CHECK(count_zeros_mod(f, 3) == 1);
  CHECK(count_zeros_mod(f, 5) == 9);
  CHECK(count_zeros_mod(P("x1", 1), 49) == 1);
  CHECK(count_zeros_mod(f, 4) == 4);
  CHECK_THROWS_AS(count_zeros_mod(f, 6), DomainError);
  CHECK_THROWS_AS(count_zeros_mod(f, 8), DomainError);
  CountOptions tight;
  tight.budget = 100;
  CHECK_THROWS_AS(count_zeros_mod(f, 11, tight), BudgetExceeded);
  CHECK_THROWS_AS(count_zeros_mod(P("7", 2), 5), DomainError);
}

TEST_CASE("p^2 counts by lifting agree with brute force") {
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(1, 2));
    const auto f = testgen::random_poly(n, 4, 4, 30);
    for (std::uint64_t p : {2, 3, 5, 7}) {
      const std::uint64_t q = p * p;
      const auto lifted = count_zeros_mod(f, q);
      CHECK(lifted == testgen::brute_zero_count(f, q));
      CHECK(count_zeros_exhaustive(f, q) == lifted);
    }
  }
  const auto g = P("x1^3 + 2*x2^3 + 4*x3^3", 3);
  CHECK(count_zeros_mod(g, 4) == testgen::brute_zero_count(g, 4));
  CHECK(count_zeros_mod(g, 9) == testgen::brute_zero_count(g, 9));
}

TEST_CASE("property: N_p <= d p^(n-1) and lifted count bound") {
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(1, 3));
    auto f = testgen::random_poly(n, 3, 4, 20);
    f = *f.divide_exact(MultiPoly::constant(n, content(f)));
    for (std::uint64_t p : {2, 3, 5, 7, 11}) {
      const auto np = count_zeros_mod(f, p);
      CHECK(np == testgen::brute_zero_count(f, p));
      bool vanishes = true;
      for (const auto& [e, c] : f.terms()) vanishes = vanishes && mpz_fdiv_ui(c.get_mpz_t(), p) == 0;
      if (!vanishes) {
        double bound = f.degree();
        for (std::size_t i = 0; i + 1 < n; ++i) bound *= static_cast<double>(p);
        CHECK(static_cast<double>(np) <= bound);
      }
      if (p <= 5) {
        double lift_bound = static_cast<double>(np);
        for (std::size_t i = 0; i < n; ++i) lift_bound *= static_cast<double>(p);
        CHECK(static_cast<double>(count_zeros_mod(f, p * p)) <= lift_bound);
      }
    }
  }
}

TEST_CASE("union counts") {
  const MultiPoly fs[] = {P("x1", 1), P("x1+2", 1)};
  CHECK(count_union_zeros_mod_p(fs, 2) == 1);
  CHECK(count_union_zeros_mod_p(fs, 3) == 2);
  const MultiPoly gs[] = {P("x1*x2", 2), P("x1-x2", 2)};
  // x1 x2 = 0: 2p-1 points, x1 = x2: p points, overlap (0,0).
  CHECK(count_union_zeros_mod_p(gs, 7) == 2 * 7 - 1 + 7 - 1);
}

TEST_CASE("fixed prime divisors") {
  CHECK(fixed_prime_divisors(P("x1^2+x1+2*x2", 2)) == std::vector<std::uint64_t>{2});
  CHECK(fixed_prime_divisors(P("x1^2+x2^2", 2)).empty());
  CHECK(fixed_prime_divisors(P("x1^3-x1", 1)) == std::vector<std::uint64_t>{2, 3});
  CHECK(fixed_prime_divisors(P("x1^5-x1", 1)) == std::vector<std::uint64_t>{2, 3, 5});
  CHECK_THROWS_AS(fixed_prime_divisors(P("2*x1", 1)), DomainError);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(1, 2));
    auto f = testgen::random_poly(n, 5, 4, 30);
    f = *f.divide_exact(MultiPoly::constant(n, content(f)));
    const auto fixed = fixed_prime_divisors(f);
    for (auto p : primes_up_to(7)) {
      const bool is_fixed = std::find(fixed.begin(), fixed.end(), p) != fixed.end();
      CHECK(is_fixed == (prime_euler_factor(f, p).exact == 0));
    }
  }
}

TEST_CASE("prime euler factors") {
  for (std::uint64_t p : {2, 3, 5, 101}) CHECK(prime_euler_factor(P("x1", 1), p).exact == 1);
  CHECK(prime_euler_factor(P("x1^2+x2^2", 2), 3).exact == Rational(4, 3));
  CHECK(prime_euler_factor(P("x1^2+x1", 1), 2).exact == 0);
  CHECK(prime_euler_factor(P("x1^2+x2^2", 2), 3).n_p == 1);
  CHECK_THROWS_AS(prime_euler_factor(P("x1", 1), 4), DomainError);
  const auto lf = prime_euler_factor(P("x1^2+x2^2", 2), 3);
  CHECK(std::abs(static_cast<double>(lf.value) - 4.0 / 3.0) < 1e-15);
  CHECK(abs(lf.value - HighReal(4) / 3) < HighReal("1e-45"));
}

TEST_CASE("square-free euler factors") {
  CHECK(squarefree_euler_factor(P("x1", 1), 2).exact == Rational(3, 4));
  CHECK(squarefree_euler_factor(P("x1", 1), 3).exact == Rational(8, 9));
  const auto lf = squarefree_euler_factor(P("x1^2+x2^2", 2), 2);
  CHECK(lf.n_p2 == 4u);
  CHECK(lf.exact == Rational(3, 4));
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testgen::random_poly(2, 3, 4, 10);
    const auto v = squarefree_euler_factor(f, 3).exact;
    CHECK(v >= 0);
    CHECK(v <= 1);
  }
}

TEST_CASE("euler products") {
  const MultiPoly x[] = {P("x1", 1)};
  EulerOptions forced;
  forced.force = true;
  const auto one = euler_product(x, DensityMode::prime, 1000, user_sigma(0, 1), forced);
  CHECK(one.value == 1);
  CHECK(one.tail_bound == 0);
  CHECK(one.heuristic);
  CHECK_THROWS_AS(euler_product(x, DensityMode::prime, 1000, user_sigma(0, 1)), HypothesisError);
  CHECK_THROWS_AS(euler_product(x, DensityMode::squarefree, 1, user_sigma(0, 1)), DomainError);

  // Square-free density of the integers up to 10^7 by direct sieve.
  const auto table = squarefree_table(1, 10'000'000);
  std::uint64_t sf = 0;
  for (std::uint64_t m = 1; m <= 10'000'000; ++m) sf += table.test(m);
  const double direct = static_cast<double>(sf) / 1e7;
  const auto sq = euler_product(x, DensityMode::squarefree, 10'000, user_sigma(0, 1));
  CHECK(std::abs(static_cast<double>(sq.value) - direct) < 1e-4);
  CHECK(std::abs(static_cast<double>(sq.value) - 6 / (std::numbers::pi * std::numbers::pi)) < 1e-4);
  CHECK(sq.tail_bound > 0);
  CHECK(sq.tail_bound < 1e-4);

  const MultiPoly twins[] = {P("x1", 1), P("x1+2", 1)};
  const auto tw = euler_product(twins, DensityMode::joint, 10'000, user_sigma(0, 1));
  long double classical = 2;
  for (auto p : primes_up_to(10'000)) {
    if (p > 2) classical *= 1 - 1.0L / ((p - 1.0L) * (p - 1.0L));
  }
  CHECK(std::abs(static_cast<double>(tw.value) - static_cast<double>(classical)) < 1e-12);
  CHECK(std::abs(static_cast<double>(tw.value) - 1.3203) < 1e-4);
}

TEST_CASE("euler product budget limit and tail monotonicity") {
  const MultiPoly q4[] = {P("x1^2+x2^2+x3^2+x4^2", 4)};
  EulerOptions opts;
  opts.count.budget = 1'000'000;
  const auto e = euler_product(q4, DensityMode::prime, 1000, user_sigma(0, 4), opts);
  CHECK(e.budget_limited);
  CHECK(e.cutoff == 31);
  CHECK(e.decay_exponent == 2.0);
  CHECK_FALSE(e.decay_fitted);
  // Factor 1 at p = 2 and 1 - 1/p^2 at odd p.
  long double expect = 1;
  for (auto p : primes_up_to(31)) {
    if (p > 2) expect *= 1 - 1.0L / (static_cast<long double>(p) * p);
  }
  CHECK(std::abs(static_cast<double>(e.value) - static_cast<double>(expect)) < 1e-15);
}

TEST_CASE("property: partial products are Cauchy within the tail bound") {
  const MultiPoly forms[][1] = {{P("x1^2+x2^2", 2)}, {P("x1", 1)}, {P("x1^3+2*x2^3", 2)}};
  for (const auto& f : forms) {
    const auto sigma = user_sigma(0, f[0].n_vars());
    const auto a = euler_product(f, DensityMode::squarefree, 200, sigma);
    const auto b = euler_product(f, DensityMode::squarefree, 2000, sigma);
    CHECK(static_cast<double>(abs(b.value - a.value)) <= a.tail_bound);
    CHECK(b.tail_bound <= a.tail_bound);
  }
}

TEST_CASE("property: local densities approach 1/p on nonsingular forms") {
  // |N_p/p^n - 1/p| <= 2C p^{-(n-σ)/2}, C fitted on p <= 11 and checked up to 97.
  const MultiPoly f = P("x1^3 + x2^3 + 2*x3^3", 3);
  const double half = 1.5;
  double c = 0;
  for (auto p : primes_up_to(97)) {
    const double pn = std::pow(static_cast<double>(p), 3.0);
    const double dev = std::abs(static_cast<double>(count_zeros_mod(f, p)) / pn - 1.0 / static_cast<double>(p));
    const double scaled = dev * std::pow(static_cast<double>(p), half);
    if (p <= 11) {
      c = std::max(c, scaled);
    } else {
      CHECK(scaled <= 2 * c);
    }
  }
  MESSAGE("fitted constant C = " << c);
}

TEST_CASE("threaded counts are identical") {
  const auto f = P("x1^3 + 2*x2^2*x3 + x3 + 1", 3);
  CountOptions one, four;
  four.threads = 4;
  for (std::uint64_t p : {13, 29, 31}) {
    CHECK(count_zeros_mod(f, p, one) == count_zeros_mod(f, p, four));
    CHECK(count_zeros_mod(f, p * p, one) == count_zeros_mod(f, p * p, four));
  }
}

TEST_CASE("factor CSV") {
  const MultiPoly x[] = {P("x1", 1)};
  const auto e = euler_product(x, DensityMode::squarefree, 5, user_sigma(0, 1));
  std::ostringstream os;
  write_factors_csv(os, e);
  const std::string s = os.str();
  CHECK(s.rfind("p,N_p,N_p2,factor\r\n", 0) == 0);
  CHECK(s.find("2,1,1,0.75") != std::string::npos);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
  CHECK(density_mode_from_string("joint") == DensityMode::joint);
  CHECK_THROWS_AS(density_mode_from_string("primes"), ConfigError);
}
