#include "polydens/exp_sums.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <numeric>

#include "polydens/detail/mod_sweep.hpp"
#include "polydens/detail/parallel.hpp"
#include "polydens/error.hpp"
#include "polydens/interval.hpp"
#include "polydens/primality.hpp"
#include "polydens/sieve.hpp"

namespace polydens {

Complex unit_phase(long double x) {
  long double frac = x - std::floor(x);
  const long double angle = 2 * std::numbers::pi_v<long double> * frac;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

RootTable::RootTable(std::uint64_t q) : q_(q), roots_(q) {
  if (q == 0) throw DomainError("RootTable: order must be positive");
  for (std::uint64_t k = 0; k < q; ++k) {
    if ((4 * k) % q == 0) {
      static constexpr Complex quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      roots_[k] = quarter[(4 * k / q) % 4];
    } else {
      roots_[k] = unit_phase(static_cast<long double>(k) / static_cast<long double>(q));
    }
  }
}

std::vector<std::uint64_t> value_histogram_mod(const MultiPoly& f, std::uint64_t q, const CountOptions& options) {
  if (f.is_zero()) throw DomainError("value_histogram_mod: zero polynomial");
  if (q == 0 || q >= (std::uint64_t{1} << 32)) throw DomainError("value_histogram_mod: modulus out of range");
  const std::uint64_t total = detail::checked_space_size(q, f.n_vars(), options.budget, "exponential sum");
  if (q == 1) return {total};
  const std::vector<detail::ModRowPoly> polys{detail::ModRowPoly(f, q)};
  const auto parts = detail::run_chunks(0, static_cast<std::int64_t>(q), options.threads,
                                        [&](std::int64_t a, std::int64_t b) {
                                          std::vector<std::uint64_t> h(q, 0);
                                          detail::sweep_mod(std::span<const detail::ModRowPoly>(polys),
                                                            static_cast<std::uint64_t>(a),
                                                            static_cast<std::uint64_t>(b),
                                                            [&](const std::uint64_t* v, auto, std::uint64_t) {
                                                              ++h[v[0]];
                                                            });
                                          return h;
                                        });
  std::vector<std::uint64_t> hist(q, 0);
  for (const auto& h : parts) {
    for (std::uint64_t v = 0; v < q; ++v) hist[v] += h[v];
  }
  return hist;
}

namespace {

Complex sum_from_histogram(const std::vector<std::uint64_t>& hist, std::uint64_t a, const RootTable& roots) {
  const std::uint64_t q = roots.order();
  Complex s = 0;
  for (std::uint64_t v = 0; v < hist.size(); ++v) {
    if (hist[v] == 0) continue;
    s += static_cast<double>(hist[v]) * roots[static_cast<std::uint64_t>(static_cast<uint128>(a) * v % q)];
  }
  return s;
}

std::uint64_t reduce_residue(std::int64_t a, std::uint64_t q) {
  const auto r = static_cast<std::int64_t>(a % static_cast<std::int64_t>(q));
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q) : r);
}

}  // namespace

Complex complete_exp_sum(const MultiPoly& f, std::int64_t a, std::uint64_t q, const CountOptions& options) {
  if (q == 0) throw DomainError("complete_exp_sum: q must be positive");
  const std::uint64_t ar = reduce_residue(a, q);
  if (std::gcd(ar, q) != 1) throw DomainError("complete_exp_sum: gcd(a, q) must be 1");
  const auto hist = value_histogram_mod(f, q, options);
  return sum_from_histogram(hist, ar, RootTable(q));
}

ExpSumTable exp_sum_table(const MultiPoly& f, std::uint64_t q, const CountOptions& options) {
  if (q == 0) throw DomainError("exp_sum_table: q must be positive");
  const auto hist = value_histogram_mod(f, q, options);
  const RootTable roots(q);
  ExpSumTable table;
  table.q = q;
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) == 1) table.values.emplace(a, sum_from_histogram(hist, a, roots));
  }
  return table;
}

double t_f(const MultiPoly& f, std::uint64_t q, const CountOptions& options) {
  const auto table = exp_sum_table(f, q, options);
  double total = 0;
  for (const auto& [a, s] : table.values) total += std::abs(s);
  return total / std::pow(static_cast<double>(q), static_cast<double>(f.n_vars()));
}

namespace {

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t q) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= q; ++p) {
    if (q % p != 0) continue;
    unsigned k = 0;
    while (q % p == 0) {
      q /= p;
      ++k;
    }
    out.emplace_back(p, k);
  }
  if (q > 1) out.emplace_back(q, 1);
  return out;
}

unsigned valuation(std::uint64_t d, std::uint64_t p) {
  unsigned k = 0;
  while (d % p == 0) {
    d /= p;
    ++k;
  }
  return k;
}

Rational rational_pow(std::uint64_t p, int e) {
  BigInt b;
  mpz_ui_pow_ui(b.get_mpz_t(), p, static_cast<unsigned long>(std::abs(e)));
  return e >= 0 ? Rational(b) : Rational(BigInt(1), b);
}

}  // namespace

Rational g_local(std::uint64_t q, std::uint64_t d) {
  if (q == 0 || d == 0 || q % d != 0) throw DomainError("g_local: d must divide q");
  Rational g = 1;
  for (auto [p, l] : factorize(q)) {
    const unsigned m = valuation(d, p);
    Rational scaled;
    if (l >= m && m >= 2) {
      scaled = 0;
    } else if (m < std::min(2u, l)) {
      scaled = 1;
    } else {
      scaled = Rational(1) - rational_pow(p, static_cast<int>(l) - 2);
    }
    g *= scaled / (rational_pow(p, static_cast<int>(l)) * (Rational(1) - rational_pow(p, -2)));
  }
  g.canonicalize();
  return g;
}

Rational big_g(std::uint64_t q) {
  if (q == 0) throw DomainError("big_g: q must be positive");
  Rational g = 1;
  for (auto [p, k] : factorize(q)) {
    if (k >= 3) return 0;
    g *= Rational(-1, p * p - 1);
  }
  g.canonicalize();
  return g;
}

namespace {

constexpr std::uint64_t kCoprimeSumCache = 10'000;

/// Σ_{c mod m, gcd(c, m) = 1} e(c/m) summed numerically and rounded.
std::int64_t coprime_root_sum(std::uint64_t m) {
  static std::vector<std::int64_t> cache;
  static std::vector<bool> known;
  static std::mutex mu;
  {
    std::lock_guard lock(mu);
    if (m <= kCoprimeSumCache && known.size() > m && known[m]) return cache[m];
  }
  Complex s = 0;
  if (m == 1) {
    s = 1;
  } else {
    for (std::uint64_t c = 1; c < m; ++c) {
      if (std::gcd(c, m) == 1) s += unit_phase(static_cast<long double>(c) / static_cast<long double>(m));
    }
  }
  const double r = std::round(s.real());
  if (std::abs(s.real() - r) > 1e-6 || std::abs(s.imag()) > 1e-6) {
    throw Error("coprime root sum for m=" + std::to_string(m) + " is not numerically integral");
  }
  const auto v = static_cast<std::int64_t>(r);
  if (m <= kCoprimeSumCache) {
    std::lock_guard lock(mu);
    if (known.size() <= kCoprimeSumCache) {
      known.assign(kCoprimeSumCache + 1, false);
      cache.assign(kCoprimeSumCache + 1, 0);
    }
    known[m] = true;
    cache[m] = v;
  }
  return v;
}

}  // namespace

Rational big_g_defining_sum(std::uint64_t q) {
  if (q == 0) throw DomainError("big_g_defining_sum: q must be positive");
  Rational total = 0;
  for (std::uint64_t d = 1; d <= q; ++d) {
    if (q % d != 0) continue;
    const std::int64_t r = coprime_root_sum(q / d);
    if (r == 0) continue;
    total += g_local(q, d) * Rational(BigInt(static_cast<long>(r)));
  }
  total.canonicalize();
  return total;
}

Complex big_g_numeric(std::uint64_t q) {
  if (q == 0) throw DomainError("big_g_numeric: q must be positive");
  Complex total = 0;
  for (std::uint64_t b = 0; b < q; ++b) {
    const double g = g_local(q, std::gcd(b, q)).get_d();
    total += g * unit_phase(static_cast<long double>(b) / static_cast<long double>(q));
  }
  return total;
}

std::map<std::int64_t, std::uint64_t> lattice_value_histogram(const MultiPoly& f, const Box& box,
                                                              std::int64_t P, std::uint64_t budget) {
  if (box.dim() != f.n_vars()) throw DomainError("box dimension does not match the polynomial");
  std::map<std::int64_t, std::uint64_t> hist;
  const BigInt points = box.lattice_point_count(P);
  if (points == 0) return hist;
  if (points > from_uint64(budget)) throw BudgetExceeded("lattice has more points than the budget allows");
  const auto ranges = box.lattice_ranges(P);
  std::vector<std::int64_t> x(ranges.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = ranges[i].first;
  for (;;) {
    const BigInt v = f.evaluate(std::span<const std::int64_t>(x));
    if (!fits_int64(v)) throw DomainError("polynomial value exceeds 64 bits");
    ++hist[to_int64(v)];
    std::size_t i = x.size();
    while (i > 0) {
      --i;
      if (++x[i] <= ranges[i].second) break;
      x[i] = ranges[i].first;
      if (i == 0) return hist;
    }
  }
}

Complex s_sum(const MultiPoly& f, const Box& box, std::int64_t P, long double alpha, std::uint64_t budget) {
  Complex s = 0;
  for (const auto& [v, c] : lattice_value_histogram(f, box, P, budget)) {
    s += static_cast<double>(c) * unit_phase(alpha * static_cast<long double>(v));
  }
  return s;
}

namespace {

Rational p_pow(std::int64_t P, int d) {
  BigInt b;
  mpz_pow_ui(b.get_mpz_t(), BigInt(static_cast<long>(P)).get_mpz_t(), static_cast<unsigned long>(d));
  return Rational(b);
}

IntegerInterval to_integer_interval(const Rational& lo, const Rational& hi) {
  const BigInt a = ceil_of(lo);
  const BigInt b = floor_of(hi);
  if (!fits_int64(a) || !fits_int64(b)) throw BudgetExceeded("interval endpoints exceed 64 bits");
  return {to_int64(a), to_int64(b)};
}

}  // namespace

IntegerInterval w_interval(const MultiPoly& f, const Box& box, std::int64_t P) {
  const MultiPoly f0 = top_degree_part(f);
  const ValueRange r = value_range(f0, box);
  const Rational scale = p_pow(P, f.degree());
  return to_integer_interval(Rational(1, 2) * r.min_lower * scale, Rational(2) * r.max_upper * scale);
}

IntegerInterval q_interval(const MultiPoly& f, const Box& box, std::int64_t P) {
  const MultiPoly f0 = top_degree_part(f);
  const ValueRange r = value_range(f0, box);
  const Rational scale = p_pow(P, f.degree());
  return to_integer_interval((r.min_lower - 1) * scale, (r.max_upper + 1) * scale);
}

Complex w_sum(const IntegerInterval& interval, long double alpha) {
  Complex s = 0;
  if (interval.hi < 2 || interval.lo > interval.hi) return s;
  const auto lo = static_cast<std::uint64_t>(std::max<std::int64_t>(interval.lo, 2));
  for (auto p : primes_in_interval(lo, static_cast<std::uint64_t>(interval.hi))) {
    s += unit_phase(alpha * static_cast<long double>(p));
  }
  return s;
}

Complex q_sum(const IntegerInterval& interval, long double alpha) {
  Complex s = 0;
  for (std::int64_t m = interval.lo; m <= interval.hi; ++m) {
    if (m == 0) continue;
    if (is_squarefree_u64(static_cast<std::uint64_t>(m < 0 ? -m : m))) {
      s += unit_phase(alpha * static_cast<long double>(m));
    }
  }
  return s;
}

OrthogonalityResult orthogonality_count(const MultiPoly& f, const Box& box, std::int64_t P,
                                        std::uint64_t budget) {
  require_nonconstant(f, "orthogonality_count");
  const MultiPoly f0 = top_degree_part(f);
  const auto cert = certify_above(f0, box, Rational(0));
  if (cert.verdict != PositivityVerdict::certified) {
    throw DomainError("orthogonality_count: f0 is not certified positive on the box");
  }
  OrthogonalityResult out;
  const auto values = lattice_value_histogram(f, box, P, budget);
  if (values.empty()) return out;
  const IntegerInterval w = w_interval(f, box, P);
  std::vector<std::uint64_t> primes;
  if (w.hi >= 2 && w.lo <= w.hi) {
    primes = primes_in_interval(static_cast<std::uint64_t>(std::max<std::int64_t>(w.lo, 2)),
                                static_cast<std::uint64_t>(w.hi));
  }
  std::int64_t lo = values.begin()->first;
  std::int64_t hi = values.rbegin()->first;
  if (!primes.empty()) {
    lo = std::min(lo, static_cast<std::int64_t>(primes.front()));
    hi = std::max(hi, static_cast<std::int64_t>(primes.back()));
  }
  const auto grid = static_cast<std::uint64_t>(hi - lo) + 1;
  if (static_cast<long double>(grid) * static_cast<long double>(values.size() + primes.size()) >
      static_cast<long double>(budget)) {
    throw BudgetExceeded("orthogonality grid too large for the budget");
  }
  const RootTable roots(grid);
  auto index = [&](std::uint64_t j, std::int64_t v) {
    const auto shifted = static_cast<std::uint64_t>(v - lo);
    return static_cast<std::uint64_t>(static_cast<uint128>(j) * shifted % grid);
  };
  long double re = 0;
  long double im = 0;
  for (std::uint64_t j = 0; j < grid; ++j) {
    Complex s = 0;
    for (const auto& [v, c] : values) s += static_cast<double>(c) * roots[index(j, v)];
    Complex w = 0;
    for (auto p : primes) w += roots[index(j, static_cast<std::int64_t>(p))];
    const Complex term = s * std::conj(w);
    re += term.real();
    im += term.imag();
  }
  re /= static_cast<long double>(grid);
  im /= static_cast<long double>(grid);
  out.grid = grid;
  out.count = std::llround(static_cast<double>(re));
  out.residual = std::max(std::abs(static_cast<double>(re) - static_cast<double>(out.count)),
                          std::abs(static_cast<double>(im)));
  if (out.residual >= 1e-6) {
    throw Error("orthogonality_count: DFT average is not integral (residual " + std::to_string(out.residual) + ")");
  }
  return out;
}

ObservatoryResult observatory_check(const MultiPoly& f, std::uint64_t p, const CountOptions& options) {
  if (!is_prime_u64(p)) throw DomainError("observatory_check: p must be prime");
  const auto hist = value_histogram_mod(f, p, options);
  const RootTable roots(p);
  Complex lhs = 0;
  for (std::uint64_t a = 1; a < p; ++a) lhs += sum_from_histogram(hist, a, roots);
  const double pn = std::pow(static_cast<double>(p), static_cast<double>(f.n_vars()));
  ObservatoryResult r;
  r.lhs = lhs.real();
  r.lhs_imag = lhs.imag();
  r.rhs = -pn + static_cast<double>(p) * static_cast<double>(hist[0]);
  r.agrees = std::abs(r.lhs - r.rhs) < 1e-6 * pn && std::abs(r.lhs_imag) < 1e-6 * pn;
  return r;
}

void write_exp_sum_table_csv(std::ostream& out, const ExpSumTable& table) {
  char buf[64];
  out << "a,re,im\r\n";
  for (const auto& [a, s] : table.values) {
    out << a;
    std::snprintf(buf, sizeof buf, ",%.17g", s.real());
    out << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", s.imag());
    out << buf << "\r\n";
  }
}

void write_tf_g_csv(std::ostream& out, const MultiPoly& f, std::uint64_t q_max, const CountOptions& options) {
  char buf[64];
  out << "q,T_f,G\r\n";
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    std::snprintf(buf, sizeof buf, "%.17g", t_f(f, q, options));
    out << q << ',' << buf << ',' << big_g(q).get_str() << "\r\n";
  }
}

}  // namespace polydens
