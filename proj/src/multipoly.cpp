#include "polydens/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polydens/error.hpp"

namespace polydens {

namespace {

std::uint32_t total_degree(const Exponents& e) {
  std::uint32_t s = 0;
  for (auto v : e) s += v;
  return s;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint32_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e != 0) {
    if (e & 1u) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

}  // namespace

MultiPoly::MultiPoly(std::size_t n_vars) : n_vars_(n_vars) {
  if (n_vars == 0) throw DomainError("a polynomial needs at least one variable");
}

MultiPoly::MultiPoly(std::size_t n_vars, TermMap terms) : MultiPoly(n_vars) {
  for (auto& [e, c] : terms) {
    if (e.size() != n_vars) {
      throw DomainError("exponent vector length does not match the variable count");
    }
    if (sgn(c) != 0) terms_.emplace(e, std::move(c));
  }
}

MultiPoly MultiPoly::constant(std::size_t n_vars, const BigInt& c) {
  MultiPoly out(n_vars);
  if (sgn(c) != 0) out.terms_.emplace(Exponents(n_vars, 0), c);
  return out;
}

MultiPoly MultiPoly::variable(std::size_t n_vars, std::size_t index) {
  if (index >= n_vars) throw DomainError("variable index out of range");
  MultiPoly out(n_vars);
  Exponents e(n_vars, 0);
  e[index] = 1;
  out.terms_.emplace(std::move(e), BigInt(1));
  return out;
}

bool MultiPoly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

int MultiPoly::degree() const noexcept {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(total_degree(e)));
  return d;
}

int MultiPoly::degree_in(std::size_t var) const {
  if (var >= n_vars_) throw DomainError("variable index out of range");
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
  return d;
}

bool MultiPoly::is_homogeneous() const noexcept {
  if (terms_.empty()) return true;
  const auto d = total_degree(terms_.begin()->first);
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const auto& t) { return total_degree(t.first) == d; });
}

bool MultiPoly::depends_on(std::size_t var) const { return degree_in(var) > 0; }

BigInt MultiPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? BigInt(0) : it->second;
}

void MultiPoly::check_compatible(const MultiPoly& other) const {
  if (other.n_vars_ != n_vars_) {
    throw DomainError("polynomials live in rings with different variable counts");
  }
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) { return *this += -other; }

MultiPoly& MultiPoly::operator*=(const BigInt& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_compatible(b);
  MultiPoly out(a.n_vars_);
  Exponents e(a.n_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto [it, inserted] = out.terms_.try_emplace(e, ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (sgn(it->second) == 0) out.terms_.erase(it);
      }
    }
  }
  return out;
}

MultiPoly MultiPoly::pow(std::uint32_t k) const {
  MultiPoly result = constant(n_vars_, 1);
  MultiPoly base = *this;
  while (k != 0) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k != 0) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  if (var >= n_vars_) throw DomainError("variable index out of range");
  MultiPoly out(n_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.terms_.emplace(std::move(d), c * e[var]);
  }
  return out;
}

BigInt MultiPoly::evaluate(std::span<const BigInt> point) const {
  if (point.size() != n_vars_) throw DomainError("point dimension does not match the polynomial");
  BigInt total = 0;
  BigInt term;
  BigInt power;
  for (const auto& [e, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < n_vars_; ++i) {
      if (e[i] == 0) continue;
      mpz_pow_ui(power.get_mpz_t(), point[i].get_mpz_t(), e[i]);
      term *= power;
    }
    total += term;
  }
  return total;
}

BigInt MultiPoly::evaluate(std::span<const std::int64_t> point) const {
  if (point.size() != n_vars_) throw DomainError("point dimension does not match the polynomial");
  std::vector<BigInt> big;
  big.reserve(point.size());
  for (auto v : point) big.emplace_back(static_cast<long>(v));
  return evaluate(std::span<const BigInt>(big));
}

std::uint64_t MultiPoly::evaluate_mod(std::span<const std::uint64_t> point,
                                      std::uint64_t m) const {
  if (point.size() != n_vars_) throw DomainError("point dimension does not match the polynomial");
  if (m == 0 || m >= (std::uint64_t{1} << 63)) throw DomainError("modulus out of range");
  BigInt big_m = from_uint64(m);
  BigInt r;
  std::uint64_t total = 0;
  for (const auto& [e, c] : terms_) {
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), big_m.get_mpz_t());
    std::uint64_t term = to_uint64(r);
    for (std::size_t i = 0; i < n_vars_ && term != 0; ++i) {
      if (e[i] != 0) term = mulmod(term, powmod(point[i], e[i], m), m);
    }
    total += term;
    if (total >= m) total -= m;
  }
  return total;
}

double MultiPoly::evaluate_real(std::span<const double> point) const {
  if (point.size() != n_vars_) throw DomainError("point dimension does not match the polynomial");
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c.get_d();
    for (std::size_t i = 0; i < n_vars_; ++i) {
      if (e[i] != 0) term *= std::pow(point[i], static_cast<double>(e[i]));
    }
    total += term;
  }
  return total;
}

MultiPoly MultiPoly::coefficient_in(std::size_t var, std::uint32_t k) const {
  if (var >= n_vars_) throw DomainError("variable index out of range");
  MultiPoly out(n_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] != k) continue;
    Exponents r = e;
    r[var] = 0;
    out.terms_.emplace(std::move(r), c);
  }
  return out;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& divisor) const {
  check_compatible(divisor);
  if (divisor.is_zero()) throw DomainError("division by the zero polynomial");
  MultiPoly quotient(n_vars_);
  MultiPoly remainder = *this;
  // Lexicographic order on exponent vectors is a monomial order, so the
  // largest map key is the leading term.
  const auto& [lead_e, lead_c] = *divisor.terms_.rbegin();
  while (!remainder.is_zero()) {
    const auto& [re, rc] = *remainder.terms_.rbegin();
    Exponents qe(n_vars_);
    for (std::size_t i = 0; i < n_vars_; ++i) {
      if (re[i] < lead_e[i]) return std::nullopt;
      qe[i] = re[i] - lead_e[i];
    }
    if (!mpz_divisible_p(rc.get_mpz_t(), lead_c.get_mpz_t())) return std::nullopt;
    MultiPoly step(n_vars_);
    step.terms_.emplace(qe, BigInt(rc / lead_c));
    remainder -= step * divisor;
    quotient += step;
  }
  return quotient;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const TermMap::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    const auto da = total_degree(a->first);
    const auto db = total_degree(b->first);
    if (da != db) return da > db;
    return a->first > b->first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto* t : order) {
    const auto& [e, c] = *t;
    const bool negative = sgn(c) < 0;
    BigInt mag = abs(c);
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (mag != 1 || total_degree(e) == 0) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << '*';
      os << 'x' << (i + 1);
      if (e[i] != 1) os << '^' << e[i];
      wrote = true;
    }
  }
  return os.str();
}

MultiPoly top_degree_part(const MultiPoly& f) {
  if (f.is_zero()) throw DomainError("top_degree_part: zero polynomial");
  const auto d = static_cast<std::uint32_t>(f.degree());
  MultiPoly::TermMap terms;
  for (const auto& [e, c] : f.terms()) {
    if (total_degree(e) == d) terms.emplace(e, c);
  }
  return MultiPoly(f.n_vars(), std::move(terms));
}

BigInt content(const MultiPoly& f) {
  if (f.is_zero()) throw DomainError("content: zero polynomial");
  BigInt g = 0;
  for (const auto& [e, c] : f.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

void require_nonconstant(const MultiPoly& f, const char* operation) {
  if (f.is_zero()) throw DomainError(std::string(operation) + ": zero polynomial");
  if (f.is_constant()) throw DomainError(std::string(operation) + ": constant polynomial");
}

}  // namespace polydens
