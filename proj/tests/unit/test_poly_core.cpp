#include "doctest.h"

#include "generators.hpp"
#include "polydens/box.hpp"
#include "polydens/error.hpp"
#include "polydens/interval.hpp"
#include "polydens/parser.hpp"
#include "polydens/poly_analysis.hpp"

using namespace polydens;

namespace {

Exponents ex(std::initializer_list<std::uint32_t> e) { return Exponents(e); }

MultiPoly P(const char* text, std::size_t n) { return parse_polynomial(text, n); }

}  // namespace

TEST_CASE("parse canonical forms") {
  const auto f = P("x1^2+x2^2", 2);
  CHECK(f.term_count() == 2);
  CHECK(f.coefficient(ex({2, 0})) == 1);
  CHECK(f.coefficient(ex({0, 2})) == 1);

  const auto g = P("(x1+x2)^2 - x1^2 - x2^2", 2);
  CHECK(g.term_count() == 1);
  CHECK(g.coefficient(ex({1, 1})) == 2);

  CHECK(P("-x1^2", 1).coefficient(ex({2})) == -1);
  CHECK(P("2*3*x1", 1).coefficient(ex({1})) == 6);
  CHECK(P("x1 - x1 + 5 - 7*x1", 1) == P("-7*x1+5", 1));
  CHECK(P("x1^(2)", 1) == P("x1*x1", 1));
  CHECK(P("  x1 ^ 3 ", 1).degree() == 3);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(P("0", 1), ParseError);
  CHECK_THROWS_AS(P("x1 - x1", 1), ParseError);
  CHECK_THROWS_AS(P("x3 + 1", 2), ParseError);
  CHECK_THROWS_AS(P("x1^-2", 1), ParseError);
  CHECK_THROWS_AS(P("x1 +", 1), ParseError);
  CHECK_THROWS_AS(P("(x1", 1), ParseError);
  CHECK_THROWS_AS(P("", 1), ParseError);
  CHECK_THROWS_AS(P("x1^x2", 2), ParseError);
  CHECK_THROWS_AS(P("y1", 1), ParseError);
  try {
    P("x1 + x9", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
  try {
    P("x1 * $", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("evaluate_int") {
  const auto f = P("x1^2+x2^2", 2);
  const std::int64_t a[] = {1, 2};
  const std::int64_t b[] = {2, 2};
  CHECK(f.evaluate(std::span<const std::int64_t>(a)) == 5);
  CHECK(f.evaluate(std::span<const std::int64_t>(b)) == 8);
  const std::int64_t c[] = {0, 7};
  CHECK(P("x1*x2 - 3", 2).evaluate(std::span<const std::int64_t>(c)) == -3);
  const std::int64_t bad[] = {1};
  CHECK_THROWS_AS(f.evaluate(std::span<const std::int64_t>(bad)), DomainError);
}

TEST_CASE("top degree part and content") {
  CHECK(top_degree_part(P("x1^2+x2^2+x1", 2)) == P("x1^2+x2^2", 2));
  CHECK(top_degree_part(P("x1^3+5", 1)) == P("x1^3", 1));
  const auto h = P("x1^2 + 3*x1*x2", 2);
  CHECK(top_degree_part(h) == h);
  CHECK(content(P("2*x1^2+4*x2", 2)) == 2);
  CHECK(content(P("x1+x2", 2)) == 1);
  CHECK(content(P("6*x1^2+9*x1*x2+3", 2)) == 3);
  CHECK_THROWS_AS(content(MultiPoly(2)), DomainError);
  CHECK_THROWS_AS(top_degree_part(MultiPoly(2)), DomainError);
}

TEST_CASE("property: print/parse round trip and JSON round trip") {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(1, 4));
    const auto f = testgen::random_poly(n, 5, 6, 1000);
    CHECK(parse_polynomial(f.to_string(), n) == f);
    CHECK(poly_from_json(to_json(f)) == f);
  }
}

TEST_CASE("property: evaluation is a ring homomorphism") {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(1, 3));
    const auto f = testgen::random_poly(n, 4, 5, 50);
    const auto g = testgen::random_poly(n, 4, 5, 50);
    std::vector<std::int64_t> x(n);
    for (auto& v : x) v = testgen::uniform(-30, 30);
    const std::span<const std::int64_t> pt(x);
    CHECK((f + g).evaluate(pt) == f.evaluate(pt) + g.evaluate(pt));
    CHECK((f - g).evaluate(pt) == f.evaluate(pt) - g.evaluate(pt));
    CHECK((f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt));
  }
}

TEST_CASE("property: top degree part is idempotent and homogeneous") {
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testgen::uniform(1, 3));
    const auto f = testgen::random_poly(n, 5, 6, 20);
    const auto f0 = top_degree_part(f);
    CHECK(f0.is_homogeneous());
    CHECK(f0.degree() == f.degree());
    CHECK(top_degree_part(f0) == f0);

    std::vector<std::int64_t> x(n), lx(n);
    const std::int64_t lambda = testgen::uniform(-5, 5);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = testgen::uniform(-20, 20);
      lx[i] = lambda * x[i];
    }
    BigInt scale;
    mpz_pow_ui(scale.get_mpz_t(), BigInt(static_cast<long>(lambda)).get_mpz_t(), static_cast<unsigned long>(f0.degree()));
    CHECK(f0.evaluate(std::span<const std::int64_t>(lx)) == scale * f0.evaluate(std::span<const std::int64_t>(x)));
  }
}

TEST_CASE("property: content scales with constants") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = testgen::random_poly(2, 4, 4, 100);
    std::int64_t c = testgen::uniform(-50, 50);
    if (c == 0) c = 7;
    CHECK(content(f * BigInt(static_cast<long>(c))) == abs(BigInt(static_cast<long>(c))) * content(f));
  }
}

TEST_CASE("singular dimension estimate") {
  const auto q4 = P("x1^2+x2^2+x3^2+x4^2", 4);
  const std::uint64_t p35[] = {3, 5};
  const auto s = singular_dimension_estimate(q4, p35);
  CHECK(s.value == 0);
  CHECK(s.method == SigmaMethod::mod_p_estimated);
  CHECK(s.singular_counts == std::vector<std::uint64_t>{1, 1});

  const std::uint64_t p5[] = {5};
  const auto t = singular_dimension_estimate(P("x1*x2^2", 2), p5);
  CHECK(t.singular_counts.front() == 5);
  CHECK(t.value == 1);

  const auto u = singular_dimension_estimate(P("x1", 1), p5);
  CHECK(u.singular_counts.front() == 0);
  CHECK(u.value == 0);

  CHECK_THROWS_AS(singular_dimension_estimate(q4, std::span<const std::uint64_t>()), DomainError);
  const std::uint64_t p2[] = {2};
  CHECK_THROWS_AS(singular_dimension_estimate(q4, p2), DomainError);
  const std::uint64_t big[] = {101};
  CHECK_THROWS_AS(singular_dimension_estimate(q4, big, 1000), BudgetExceeded);
  CHECK_THROWS_AS(singular_dimension_estimate(P("x1^2+x2", 2), p5), DomainError);

  CHECK(user_sigma(1, 3).value == 1);
  CHECK_THROWS_AS(user_sigma(3, 3), DomainError);
  const auto primes = default_sigma_primes(q4);
  CHECK(primes == std::vector<std::uint64_t>{5, 7, 11});
}

TEST_CASE("polynomial gcd") {
  const auto a = P("(x1+x2)*(x1-x2)", 2);
  const auto b = P("(x1+x2)*x2", 2);
  CHECK(polynomial_gcd(a, b) == P("x1+x2", 2));
  CHECK(polynomial_gcd(P("6*x1", 1), P("4*x1^2", 1)) == P("2*x1", 1));
  CHECK(polynomial_gcd(P("x1^2+1", 1), P("x1+1", 1)) == P("1", 1));
  const auto c = P("(x1*x2 + x3^2 + 1)*(x1 - x3)^2", 3);
  const auto d = P("(x1*x2 + x3^2 + 1)*(x2 + 7)*(x1 - x3)", 3);
  CHECK(polynomial_gcd(c, d) == P("(x1*x2 + x3^2 + 1)*(x1 - x3)", 3));
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = testgen::random_poly(2, 2, 3, 5);
    const auto u = testgen::random_poly(2, 2, 3, 5);
    const auto v = testgen::random_poly(2, 2, 3, 5);
    const auto h = polynomial_gcd(g * u, g * v);
    CHECK((g * u).divide_exact(h).has_value());
    CHECK((g * v).divide_exact(h).has_value());
    CHECK(h.divide_exact(primitive_part(g)).has_value());
  }
}

TEST_CASE("separability") {
  CHECK(separability_check(P("x1^2+x2^2", 2)) == Separability::separable);
  CHECK(separability_check(P("(x1+x2)^2", 2)) == Separability::not_separable);
  CHECK(separability_check(P("x1*x2", 2)) == Separability::separable);
  CHECK(separability_check(P("4*x1^2+4*x1+1", 1)) == Separability::not_separable);
  CHECK(separability_check(P("x1*(x1+2)", 1)) == Separability::separable);
  CHECK_THROWS_AS(separability_check(P("3", 1)), DomainError);
}

TEST_CASE("heuristic irreducibility") {
  const std::uint64_t p3[] = {3};
  const auto r = heuristic_irreducibility(P("x1^2+x2^2", 2), p3);
  CHECK(r.verdict == Irreducibility::irreducible);
  CHECK(r.witness_prime == 3u);

  const std::uint64_t p5[] = {5};
  CHECK(heuristic_irreducibility(P("x1^2+x2^2", 2), p5).verdict == Irreducibility::unknown);

  const std::uint64_t several[] = {3, 5, 7};
  const auto s = heuristic_irreducibility(P("x1^2-x2^2", 2), several);
  CHECK(s.verdict == Irreducibility::reducible);
  REQUIRE(s.factor.has_value());
  CHECK(P("x1^2-x2^2", 2).divide_exact(*s.factor).has_value());

  const std::uint64_t p11[] = {11};
  const auto t = heuristic_irreducibility(P("(2*x1+3*x2+1)*(x1-x2+5)", 2), p11);
  CHECK(t.verdict == Irreducibility::reducible);

  CHECK(heuristic_irreducibility(P("x1*x2+x1", 2), several).verdict == Irreducibility::reducible);
  CHECK(heuristic_irreducibility(P("(x1+1)^2", 1), several).verdict == Irreducibility::reducible);
  CHECK(heuristic_irreducibility(P("x1+2*x2", 2), several).verdict == Irreducibility::irreducible);
  CHECK(heuristic_irreducibility(P("x1^2+x2^2+x3^2+x4^2", 4), several).verdict == Irreducibility::irreducible);

  IrreducibilityOptions tiny;
  tiny.candidate_budget = 10;
  const auto u = heuristic_irreducibility(P("x1^6 + x2^6 + x3^6 + x1*x2*x3 + 1", 3), several, tiny);
  CHECK(u.verdict == Irreducibility::unknown);
  CHECK_THROWS_AS(heuristic_irreducibility(P("2*x1+4", 1), several), DomainError);
}

TEST_CASE("box and lattice ranges") {
  const Box b = Box::cube(2, 1, 2);
  CHECK(b.volume() == 1);
  CHECK(b.lattice_point_count(1) == 4);
  CHECK(b.lattice_point_count(3) == 16);
  const Box half({{Rational(1, 3), Rational(1, 2)}});
  CHECK(half.lattice_point_count(1) == 0);
  CHECK(half.lattice_point_count(6) == 2);
  CHECK(half.scaled(6) == Box({{Rational(2), Rational(3)}}));
  CHECK(box_from_json(to_json(half)) == half);
  CHECK(box_from_json(nlohmann::json::parse(R"([[0.5, "3/2"], [1, 2]])")) ==
        Box({{Rational(1, 2), Rational(3, 2)}, {Rational(1), Rational(2)}}));
  CHECK_THROWS_AS(box_from_json(nlohmann::json::parse("[[2, 1]]")), ConfigError);
  CHECK_THROWS_AS(box_from_json(nlohmann::json::parse("[[1]]")), ConfigError);
}

TEST_CASE("interval certification") {
  const auto f = P("x1^2 - x1*x2 + x2^2", 2);
  CHECK(certify_above(f, Box::cube(2, 1, 2), Rational(0)).verdict == PositivityVerdict::certified);
  const auto g = P("x1 - x2", 2);
  const auto cert = certify_above(g, Box::cube(2, 1, 2), Rational(0));
  CHECK(cert.verdict == PositivityVerdict::violated);
  REQUIRE(cert.witness.has_value());
  CHECK(evaluate_rational(g, *cert.witness) <= 0);
  const auto r = value_range(P("x1^2+x2^2", 2), Box::cube(2, 1, 2));
  CHECK(r.min_lower <= 2);
  CHECK(r.min_upper >= 2);
  CHECK(r.max_lower <= 8);
  CHECK(r.max_upper >= 8);
  CHECK(r.min_upper - r.min_lower < Rational(1, 1000));
}
