#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "generators.hpp"
#include "polydens/counting.hpp"
#include "polydens/error.hpp"
#include "polydens/exp_sums.hpp"
#include "polydens/parser.hpp"
#include "polydens/sieve.hpp"

using namespace polydens;

namespace {

MultiPoly P(const char* text, std::size_t n) { return parse_polynomial(text, n); }

Box B(std::initializer_list<std::pair<long, long>> sides) {
  std::vector<ClosedInterval> iv;
  for (auto [a, b] : sides) iv.push_back({Rational(a), Rational(b)});
  return Box(std::move(iv));
}

// Direct sum with libm phases, independent of RootTable.
Complex naive_sum(const MultiPoly& f, std::int64_t a, std::uint64_t q) {
  const std::size_t n = f.n_vars();
  std::vector<std::uint64_t> x(n, 0);
  Complex total = 0;
  for (;;) {
    const double t = static_cast<double>((static_cast<std::uint64_t>(a) % q) * testgen::eval_mod(f, x, q) % q) /
                     static_cast<double>(q);
    total += Complex(std::cos(2 * std::numbers::pi * t), std::sin(2 * std::numbers::pi * t));
    std::size_t i = 0;
    while (i < n && ++x[i] == q) x[i++] = 0;
    if (i == n) return total;
  }
}

}  // namespace

TEST_CASE("complete exponential sums") {
  CHECK(std::abs(complete_exp_sum(P("x1^2", 1), 1, 2)) < 1e-14);
  CHECK(std::abs(complete_exp_sum(P("x1", 1), 1, 3)) < 1e-14);
  CHECK(std::abs(complete_exp_sum(P("x1^3+x2", 2), 0, 1) - Complex(1, 0)) < 1e-14);
  CHECK_THROWS_AS(complete_exp_sum(P("x1", 1), 0, 3), DomainError);
  CHECK_THROWS_AS(complete_exp_sum(P("x1", 1), 2, 4), DomainError);
  CountOptions tight;
  tight.budget = 10;
  CHECK_THROWS_AS(complete_exp_sum(P("x1+x2", 2), 1, 5, tight), BudgetExceeded);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(1, 2));
    const auto f = testgen::random_poly(n, 3, 4, 20);
    const std::uint64_t q = static_cast<std::uint64_t>(testgen::uniform(2, 30));
    std::int64_t a = testgen::uniform(1, static_cast<std::int64_t>(q) - 1);
    while (std::gcd(static_cast<std::uint64_t>(a), q) != 1) a = testgen::uniform(1, static_cast<std::int64_t>(q) - 1);
    CHECK(std::abs(complete_exp_sum(f, a, q) - naive_sum(f, a, q)) < 1e-9);
  }
}

TEST_CASE("T_f examples") {
  CHECK(t_f(P("x1^3+x2", 2), 1) == 1.0);
  CHECK(std::abs(t_f(P("x1^2", 1), 2)) < 1e-14);
  CHECK(std::abs(t_f(P("x1^2+x2^2", 2), 3) - 2.0 / 3.0) < 1e-14);
}

TEST_CASE("property: T_f is multiplicative") {
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(1, 2));
    const auto f = testgen::random_poly(n, 3, 4, 20);
    std::uint64_t q1, q2;
    do {
      q1 = static_cast<std::uint64_t>(testgen::uniform(2, 20));
      q2 = static_cast<std::uint64_t>(testgen::uniform(2, 20));
    } while (std::gcd(q1, q2) != 1 || q1 * q2 > 200);
    const double whole = t_f(f, q1 * q2);
    const double split = t_f(f, q1) * t_f(f, q2);
    CHECK(std::abs(whole - split) <= 1e-8 * std::max(1.0, std::abs(split)));
  }
}

TEST_CASE("property: trivial bound and conjugate symmetry") {
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(1, 3));
    const auto f = testgen::random_poly(n, 3, 4, 20);
    const std::uint64_t q = static_cast<std::uint64_t>(testgen::uniform(2, 12));
    const auto table = exp_sum_table(f, q);
    const double bound = std::pow(static_cast<double>(q), static_cast<double>(n));
    for (const auto& [a, s] : table.values) {
      CHECK(std::abs(s) <= bound + 1e-9);
      CHECK(std::abs(table.values.at(q - a) - std::conj(s)) < 1e-9);
    }
  }
}

TEST_CASE("property: square-root cancellation at primes") {
  // T_f(p) <= C p^(1-(n-σ)/2) with σ = 0, C fitted at p = 3.
  const auto f = P("x1^2 + x2^2 + x3^2", 3);
  const double exponent = 1.0 - 3.0 / 2.0;
  const double c = t_f(f, 3) / std::pow(3.0, exponent);
  MESSAGE("fitted constant C = " << c);
  for (auto p : primes_up_to(97)) {
    if (p <= 3) continue;
    CountOptions opts;
    opts.threads = 4;
    CHECK(t_f(f, p, opts) <= 4 * c * std::pow(static_cast<double>(p), exponent));
  }
}

TEST_CASE("property: prime-power sums") {
  // |S_{a,p^k}| <= C_k p^((k-1)n + σ), σ = 0, C_k fitted at p = 5.
  const auto f = P("x1^2 + x2^2 + 3*x3^2", 3);
  for (unsigned k : {2u, 3u}) {
    double c = 0;
    for (std::uint64_t p : {5, 7, 11}) {
      std::uint64_t q = 1;
      for (unsigned i = 0; i < k; ++i) q *= p;
      if (k == 3 && p == 11) continue;
      const double scale = std::pow(static_cast<double>(p), 3.0 * (k - 1));
      double worst = 0;
      for (std::int64_t a : {1, 2, 3}) worst = std::max(worst, std::abs(complete_exp_sum(f, a, q)) / scale);
      if (p == 5) {
        c = worst;
        MESSAGE("k = " << k << " fitted constant C_k = " << c);
      } else {
        CHECK(worst <= 4 * c);
      }
    }
  }
}

TEST_CASE("g and G") {
  CHECK(g_local(1, 1) == 1);
  for (std::uint64_t p : {2, 3, 5, 7}) {
    CHECK(g_local(p * p, p * p) == 0);
    const Rational pp(static_cast<long>(p));
    CHECK(g_local(p, 1) == 1 / (pp * (1 - 1 / (pp * pp))));
  }
  CHECK_THROWS_AS(g_local(12, 5), DomainError);
  CHECK(big_g(1) == 1);
  CHECK(big_g(2) == Rational(-1, 3));
  CHECK(big_g(8) == 0);
  CHECK(big_g(4) == Rational(-1, 3));
  CHECK(big_g(12) == Rational(1, 24));
  CHECK(std::abs(big_g_numeric(12) - Complex(1.0 / 24.0, 0)) < 1e-12);
}

TEST_CASE("property: G routes agree and G is multiplicative on cube-free support") {
  for (std::uint64_t q = 1; q <= 2000; ++q) {
    REQUIRE(big_g(q) == big_g_defining_sum(q));
  }
  for (std::uint64_t q1 = 1; q1 <= 60; ++q1) {
    for (std::uint64_t q2 = 1; q2 <= 60; ++q2) {
      if (std::gcd(q1, q2) == 1) CHECK(big_g(q1 * q2) == big_g(q1) * big_g(q2));
    }
  }
  for (std::uint64_t q : {8, 16, 24, 27, 54, 81, 250, 1000}) CHECK(big_g(q) == 0);
}

TEST_CASE("trigonometric sums") {
  const auto f = P("x1^2+x2^2", 2);
  const auto box = B({{1, 2}, {1, 2}});
  CHECK(std::abs(s_sum(f, box, 3, 0) - Complex(static_cast<double>(box.lattice_point_count(3).get_d()), 0)) < 1e-12);
  const IntegerInterval w{20, 30};
  CHECK(std::abs(w_sum(w, 0) - Complex(2, 0)) < 1e-12);
  CHECK(std::abs(q_sum(IntegerInterval{1, 4}, 0.5L) - Complex(-1, 0)) < 1e-12);
  CHECK(std::abs(q_sum(IntegerInterval{-3, 3}, 0) - Complex(6, 0)) < 1e-12);
  const auto wi = w_interval(f, box, 1);
  CHECK(wi.lo <= 1);
  CHECK(wi.hi >= 16);
  const auto qi = q_interval(f, box, 2);
  CHECK(qi.lo <= 4);
  CHECK(qi.hi >= 36);
}

TEST_CASE("orthogonality identity") {
  const auto f = P("x1^2+x2^2", 2);
  const auto box = B({{1, 2}, {1, 2}});
  CHECK(orthogonality_count(f, box, 1).count == 3);
  CHECK(orthogonality_count(P("x1", 1), B({{2, 3}}), 10).count == 2);
  const Box thin(std::vector<ClosedInterval>{{Rational(1, 3), Rational(1, 2)}});
  CHECK(orthogonality_count(P("x1", 1), thin, 1).count == 0);
  CHECK_THROWS_AS(orthogonality_count(P("x1-x2", 2), box, 2), DomainError);
  const MultiPoly cases[] = {f, P("x1^2+x2^2+x1", 2), P("2*x1^2+x1*x2+3*x2^2", 2), P("x1^3+x2^2", 2)};
  for (const auto& g : cases) {
    for (std::int64_t p : {1, 2, 3, 5, 8}) {
      const MultiPoly one[] = {g};
      const auto o = orthogonality_count(g, box, p);
      CHECK(o.residual < 1e-6);
      CHECK(static_cast<std::uint64_t>(o.count) == count_values(one, box, p, DensityMode::prime).count);
    }
  }
}

TEST_CASE("observatory identity") {
  const auto a = observatory_check(P("x1^2+x2^2", 2), 3);
  CHECK(a.rhs == -6);
  CHECK(std::abs(a.lhs + 6) < 1e-9);
  CHECK(a.agrees);
  for (std::uint64_t p : {2, 3, 5, 7}) {
    const auto b = observatory_check(P("x1", 1), p);
    CHECK(b.rhs == 0);
    CHECK(b.agrees);
  }
  const auto c = observatory_check(P("x1^2+x1+2*x2", 2), 2);
  CHECK(c.rhs == 4);
  CHECK(std::abs(c.lhs - 4) < 1e-9);
}

TEST_CASE("CSV output") {
  std::ostringstream os;
  write_exp_sum_table_csv(os, exp_sum_table(P("x1^2", 1), 4));
  const auto s = os.str();
  CHECK(s.rfind("a,re,im\r\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
  std::ostringstream g;
  write_tf_g_csv(g, P("x1^2+x2^2", 2), 3);
  const auto t = g.str();
  CHECK(t.rfind("q,T_f,G\r\n1,1,1\r\n", 0) == 0);
  CHECK(t.find("-1/3") != std::string::npos);
}

TEST_CASE("property: partial sums of T_f grow like a power of log x") {
  // Σ_{q<=x} T_f(q) against (log x)^c with c fitted on 5 <= x <= 20; the sums
  // must grow monotonically and stay within a factor 4 of the fit up to x = 60.
  const auto f = P("x1^2 + x2^2 + x3^2", 3);
  std::vector<double> partial;
  double total = 0;
  for (std::uint64_t q = 1; q <= 60; ++q) {
    total += t_f(f, q);
    partial.push_back(total);
  }
  for (std::size_t i = 1; i < partial.size(); ++i) CHECK(partial[i] >= partial[i - 1]);
  const double c = std::log(partial[19] / partial[4]) / std::log(std::log(20.0) / std::log(5.0));
  MESSAGE("fitted exponent c = " << c);
  const double scale = partial[19] / std::pow(std::log(20.0), c);
  for (std::size_t x = 20; x <= 60; ++x) {
    const double fit = scale * std::pow(std::log(static_cast<double>(x)), c);
    CHECK(partial[x - 1] <= 4 * fit);
  }
}
