#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polydens/bigint.hpp"

namespace polydens {

using Exponents = std::vector<std::uint32_t>;

/// Sparse multivariate polynomial with arbitrary-precision integer
/// coefficients. Variables are 0-based internally and printed as x1..xn.
///
/// Invariants: no stored coefficient is zero and every exponent vector has
/// length n_vars(). The zero polynomial is representable (it is the additive
/// identity) but every analysis operation rejects it.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, BigInt>;

  explicit MultiPoly(std::size_t n_vars);
  MultiPoly(std::size_t n_vars, TermMap terms);

  static MultiPoly constant(std::size_t n_vars, const BigInt& c);
  static MultiPoly variable(std::size_t n_vars, std::size_t index);

  std::size_t n_vars() const noexcept { return n_vars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  /// Total degree; -1 for the zero polynomial.
  int degree() const noexcept;
  /// Degree in one variable; -1 for the zero polynomial.
  int degree_in(std::size_t var) const;
  bool is_homogeneous() const noexcept;
  /// True when `var` occurs in some term.
  bool depends_on(std::size_t var) const;

  /// Coefficient of `e`, zero when absent.
  BigInt coefficient(const Exponents& e) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const BigInt& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const BigInt& c) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) = default;

  MultiPoly pow(std::uint32_t k) const;
  MultiPoly derivative(std::size_t var) const;

  /// Exact value at an integer point.
  BigInt evaluate(std::span<const BigInt> point) const;
  BigInt evaluate(std::span<const std::int64_t> point) const;
  /// f(point) mod m with the result in [0, m). Requires m < 2^63.
  std::uint64_t evaluate_mod(std::span<const std::uint64_t> point,
                             std::uint64_t m) const;
  /// Floating-point value at a real point.
  double evaluate_real(std::span<const double> point) const;

  /// Coefficient of var^k viewed as a polynomial in the remaining variables
  /// (the exponent of `var` is zeroed, n_vars() is unchanged).
  MultiPoly coefficient_in(std::size_t var, std::uint32_t k) const;

  /// Exact quotient over Z, or nullopt when `divisor` does not divide *this.
  std::optional<MultiPoly> divide_exact(const MultiPoly& divisor) const;

  /// Human-readable, re-parseable text such as "x1^2 + 3*x1*x2 - 7".
  std::string to_string() const;

 private:
  void check_compatible(const MultiPoly& other) const;

  std::size_t n_vars_;
  TermMap terms_;
};

/// Sum of the terms of maximal total degree. Rejects the zero polynomial.
MultiPoly top_degree_part(const MultiPoly& f);

/// Positive gcd of the coefficients. Rejects the zero polynomial.
BigInt content(const MultiPoly& f);

/// Throws DomainError unless f is non-constant (and thus nonzero).
void require_nonconstant(const MultiPoly& f, const char* operation);

}  // namespace polydens
