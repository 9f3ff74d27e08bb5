#include "polydens/poly_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "polydens/detail/mod_sweep.hpp"
#include "polydens/error.hpp"
#include "polydens/sieve.hpp"

namespace polydens {

SigmaEstimate user_sigma(int value, std::size_t n_vars) {
  if (value < 0 || value > static_cast<int>(n_vars) - 1) {
    throw DomainError("sigma must lie in [0, n-1]");
  }
  SigmaEstimate s;
  s.value = value;
  s.method = SigmaMethod::user_supplied;
  return s;
}

std::vector<std::uint64_t> default_sigma_primes(const MultiPoly& f0, std::uint64_t budget,
                                                std::size_t count) {
  require_nonconstant(f0, "default_sigma_primes");
  const auto floor_prime = static_cast<std::uint64_t>(std::max(f0.degree(), 3));
  std::vector<std::uint64_t> out;
  for (auto p : primes_up_to(1000)) {
    if (p <= floor_prime) continue;
    try {
      detail::checked_space_size(p, f0.n_vars(), budget, "sigma estimate");
    } catch (const BudgetExceeded&) {
      break;
    }
    out.push_back(p);
    if (out.size() == count) break;
  }
  if (out.empty()) {
    throw BudgetExceeded("no prime small enough to estimate the singular locus within budget");
  }
  return out;
}

SigmaEstimate singular_dimension_estimate(const MultiPoly& f0, std::span<const std::uint64_t> primes,
                                          std::uint64_t budget) {
  require_nonconstant(f0, "singular_dimension_estimate");
  if (!f0.is_homogeneous()) throw DomainError("singular_dimension_estimate: form must be homogeneous");
  if (primes.empty()) throw DomainError("singular_dimension_estimate: empty prime list");
  const std::size_t n = f0.n_vars();

  SigmaEstimate est;
  est.method = SigmaMethod::mod_p_estimated;
  std::map<int, int> votes;
  for (auto p : primes) {
    detail::checked_space_size(p, n, budget, "singular_dimension_estimate");
    std::vector<detail::ModRowPoly> grads;
    for (std::size_t i = 0; i < n; ++i) {
      const MultiPoly d = f0.derivative(i);
      if (d.is_zero()) continue;
      grads.emplace_back(d, p);
    }
    bool all_vanish = true;
    for (std::size_t i = 0; i < n && all_vanish; ++i) {
      const MultiPoly d = f0.derivative(i);
      for (const auto& [e, c] : d.terms()) {
        if (mpz_fdiv_ui(c.get_mpz_t(), p) != 0) {
          all_vanish = false;
          break;
        }
      }
    }
    if (all_vanish) {
      throw DomainError("singular_dimension_estimate: p=" + std::to_string(p) +
                        " divides every partial derivative");
    }
    std::uint64_t count = 0;
    detail::sweep_mod(std::span<const detail::ModRowPoly>(grads), 0, p,
                      [&](const std::uint64_t* v, std::span<const std::uint64_t>, std::uint64_t) {
                        for (std::size_t k = 0; k < grads.size(); ++k) {
                          if (v[k] != 0) return;
                        }
                        ++count;
                      });
    int dim = 0;
    if (count > 1) {
      dim = static_cast<int>(std::lround(std::log(static_cast<double>(count)) /
                                         std::log(static_cast<double>(p))));
    }
    dim = std::clamp(dim, 0, static_cast<int>(n) - 1);
    est.witness_primes.push_back(p);
    est.singular_counts.push_back(count);
    ++votes[dim];
  }
  int best = -1;
  int best_votes = 0;
  for (const auto& [dim, v] : votes) {
    if (v >= best_votes) {
      best = dim;
      best_votes = v;
    }
  }
  est.value = best;
  est.disagreement = votes.size() > 1;
  return est;
}

// ---------------------------------------------------------------------------
// Multivariate gcd over Z by recursive primitive pseudo-remainder sequences.

namespace {

int main_var(const MultiPoly& a) {
  for (std::size_t v = a.n_vars(); v-- > 0;) {
    if (a.depends_on(v)) return static_cast<int>(v);
  }
  return -1;
}

MultiPoly normalize_sign(MultiPoly a) {
  if (!a.is_zero() && sgn(a.terms().rbegin()->second) < 0) return -a;
  return a;
}

MultiPoly monomial(std::size_t n, std::size_t var, std::uint32_t k) {
  Exponents e(n, 0);
  e[var] = k;
  return MultiPoly(n, {{e, BigInt(1)}});
}

MultiPoly gcd_impl(const MultiPoly& a, const MultiPoly& b);

MultiPoly content_in(const MultiPoly& a, std::size_t v) {
  MultiPoly g(a.n_vars());
  const int d = a.degree_in(v);
  for (int k = d; k >= 0; --k) {
    MultiPoly c = a.coefficient_in(v, static_cast<std::uint32_t>(k));
    if (c.is_zero()) continue;
    g = gcd_impl(g, c);
    if (g.is_constant() && abs(g.terms().begin()->second) == 1) break;
  }
  return g;
}

MultiPoly primitive_in(const MultiPoly& a, std::size_t v) {
  const MultiPoly c = content_in(a, v);
  auto q = a.divide_exact(c);
  if (!q) throw Error("internal: content does not divide polynomial");
  return *q;
}

MultiPoly pseudo_remainder(const MultiPoly& a, const MultiPoly& b, std::size_t v) {
  const int n = b.degree_in(v);
  const MultiPoly lb = b.coefficient_in(v, static_cast<std::uint32_t>(n));
  MultiPoly r = a;
  while (!r.is_zero() && r.degree_in(v) >= n) {
    const int dr = r.degree_in(v);
    const MultiPoly lr = r.coefficient_in(v, static_cast<std::uint32_t>(dr));
    r = lb * r - lr * monomial(a.n_vars(), v, static_cast<std::uint32_t>(dr - n)) * b;
  }
  return r;
}

MultiPoly gcd_impl(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_zero()) return normalize_sign(b);
  if (b.is_zero()) return normalize_sign(a);
  if (a.is_constant() && b.is_constant()) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.terms().begin()->second.get_mpz_t(),
            b.terms().begin()->second.get_mpz_t());
    return MultiPoly::constant(a.n_vars(), g);
  }
  const auto v = static_cast<std::size_t>(std::max(main_var(a), main_var(b)));
  if (!a.depends_on(v)) return gcd_impl(a, content_in(b, v));
  if (!b.depends_on(v)) return gcd_impl(content_in(a, v), b);

  const MultiPoly ca = content_in(a, v);
  const MultiPoly cb = content_in(b, v);
  MultiPoly pa = *a.divide_exact(ca);
  MultiPoly pb = *b.divide_exact(cb);
  const MultiPoly c = gcd_impl(ca, cb);
  if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);

  MultiPoly g(a.n_vars());
  for (;;) {
    MultiPoly r = pseudo_remainder(pa, pb, v);
    if (r.is_zero()) {
      g = pb;
      break;
    }
    if (!r.depends_on(v)) {
      g = MultiPoly::constant(a.n_vars(), 1);
      break;
    }
    pa = std::move(pb);
    pb = primitive_in(r, v);
  }
  if (g.depends_on(v)) g = primitive_in(g, v);
  return normalize_sign(c * g);
}

}  // namespace

MultiPoly polynomial_gcd(const MultiPoly& a, const MultiPoly& b) { return gcd_impl(a, b); }

MultiPoly primitive_part(const MultiPoly& f) {
  if (f.is_zero()) throw DomainError("primitive_part: zero polynomial");
  return *f.divide_exact(MultiPoly::constant(f.n_vars(), content(f)));
}

Separability separability_check(const MultiPoly& f) {
  require_nonconstant(f, "separability_check");
  const MultiPoly pp = primitive_part(f);
  MultiPoly g = pp;
  for (std::size_t i = 0; i < f.n_vars(); ++i) {
    const MultiPoly d = pp.derivative(i);
    if (d.is_zero()) continue;
    g = polynomial_gcd(g, d);
    if (g.is_constant()) return Separability::separable;
  }
  return g.is_constant() ? Separability::separable : Separability::not_separable;
}

// ---------------------------------------------------------------------------
// Factor search over F_p.

namespace {

/// Polynomials over F_p with exponents packed 8 bits per variable, x1 in the
/// most significant position so that integer order is lex order.
using PackedPoly = std::map<std::uint64_t, std::uint64_t>;

constexpr std::size_t kMaxPackedVars = 8;

std::uint64_t pack(const Exponents& e) {
  std::uint64_t key = 0;
  for (auto x : e) key = (key << 8) | x;
  return key;
}

Exponents unpack(std::uint64_t key, std::size_t n) {
  Exponents e(n);
  for (std::size_t i = n; i-- > 0;) {
    e[i] = static_cast<std::uint32_t>(key & 0xff);
    key >>= 8;
  }
  return e;
}

bool divides_key(std::uint64_t d, std::uint64_t m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (((d >> (8 * i)) & 0xff) > ((m >> (8 * i)) & 0xff)) return false;
  }
  return true;
}

std::uint64_t powmod_u(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

PackedPoly reduce_mod(const MultiPoly& f, std::uint64_t p) {
  PackedPoly out;
  for (const auto& [e, c] : f.terms()) {
    const auto r = mpz_fdiv_ui(c.get_mpz_t(), p);
    if (r != 0) out.emplace(pack(e), r);
  }
  return out;
}

int packed_degree(const PackedPoly& f, std::size_t n) {
  int d = -1;
  for (const auto& [k, c] : f) {
    int s = 0;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<int>((k >> (8 * i)) & 0xff);
    d = std::max(d, s);
  }
  return d;
}

/// True when g divides f over F_p; g must have leading coefficient 1.
bool divides_mod_p(PackedPoly r, const PackedPoly& g, std::uint64_t p, std::size_t n) {
  const auto [lead, lead_c] = *g.rbegin();
  (void)lead_c;
  while (!r.empty()) {
    const auto [key, c] = *r.rbegin();
    if (!divides_key(lead, key, n)) return false;
    const std::uint64_t shift = key - lead;  // exponent difference, no borrows
    for (const auto& [gk, gc] : g) {
      const std::uint64_t k = gk + shift;
      const std::uint64_t sub = gc * c % p;
      auto [it, inserted] = r.try_emplace(k, (p - sub) % p);
      if (!inserted) {
        it->second = (it->second + p - sub) % p;
      }
      if (it->second == 0) r.erase(it);
    }
  }
  return true;
}

std::vector<std::uint64_t> monomials_up_to(std::size_t n, std::uint32_t k) {
  std::vector<std::uint64_t> out;
  Exponents e(n, 0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t left) {
    if (i == n) {
      out.push_back(pack(e));
      return;
    }
    for (std::uint32_t x = 0; x <= left; ++x) {
      e[i] = x;
      rec(i + 1, left - x);
    }
    e[i] = 0;
  };
  rec(0, k);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t key_degree(std::uint64_t key, std::size_t n) {
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<std::uint32_t>((key >> (8 * i)) & 0xff);
  return s;
}

enum class SearchOutcome { none_found, found, over_budget };

/// Exhaustive search for a monic (in lex order) factor of total degree k.
SearchOutcome find_factor_mod_p(const PackedPoly& f, std::uint64_t p, std::size_t n, std::uint32_t k,
                                std::uint64_t& budget, PackedPoly& factor) {
  const auto monos = monomials_up_to(n, k);
  const std::uint64_t f_lead = f.rbegin()->first;
  for (std::size_t j = 0; j < monos.size(); ++j) {
    if (!divides_key(monos[j], f_lead, n)) continue;
    // Candidates whose leading monomial is monos[j]: p^j of them.
    long double total = std::pow(static_cast<long double>(p), static_cast<long double>(j));
    if (total > static_cast<long double>(budget)) return SearchOutcome::over_budget;
    budget -= static_cast<std::uint64_t>(total);
    bool has_top = key_degree(monos[j], n) == k;
    std::vector<std::uint64_t> digits(j, 0);
    for (;;) {
      bool top = has_top;
      PackedPoly g;
      g.emplace(monos[j], 1);
      for (std::size_t i = 0; i < j; ++i) {
        if (digits[i] == 0) continue;
        g.emplace(monos[i], digits[i]);
        if (key_degree(monos[i], n) == k) top = true;
      }
      if (top && divides_mod_p(f, g, p, n)) {
        factor = std::move(g);
        return SearchOutcome::found;
      }
      std::size_t i = 0;
      while (i < j && ++digits[i] == p) digits[i++] = 0;
      if (i == j) break;
    }
  }
  return SearchOutcome::none_found;
}

MultiPoly lift_symmetric(const PackedPoly& g, std::uint64_t p, std::size_t n, std::uint64_t scale) {
  MultiPoly::TermMap terms;
  for (const auto& [key, c] : g) {
    std::uint64_t v = c * (scale % p) % p;
    BigInt big = v > p / 2 ? -BigInt(static_cast<unsigned long>(p - v)) : BigInt(static_cast<unsigned long>(v));
    terms.emplace(unpack(key, n), big);
  }
  return MultiPoly(n, std::move(terms));
}

std::optional<MultiPoly> monomial_factor(const MultiPoly& f) {
  for (std::size_t i = 0; i < f.n_vars(); ++i) {
    bool all = true;
    for (const auto& [e, c] : f.terms()) {
      if (e[i] == 0) {
        all = false;
        break;
      }
    }
    if (all) return MultiPoly::variable(f.n_vars(), i);
  }
  return std::nullopt;
}

}  // namespace

IrreducibilityReport heuristic_irreducibility(const MultiPoly& f, std::span<const std::uint64_t> primes,
                                              const IrreducibilityOptions& options) {
  require_nonconstant(f, "heuristic_irreducibility");
  if (content(f) != 1) throw DomainError("heuristic_irreducibility: content must be 1");
  const std::size_t n = f.n_vars();
  const int d = f.degree();
  IrreducibilityReport report;

  if (d == 1) {
    report.verdict = Irreducibility::irreducible;
    report.detail = "linear polynomial";
    return report;
  }
  if (auto m = monomial_factor(f); m && f.term_count() > 1) {
    report.verdict = Irreducibility::reducible;
    report.factor = *m;
    report.detail = "every term is divisible by " + m->to_string();
    return report;
  }
  if (separability_check(f) == Separability::not_separable) {
    MultiPoly g = f;
    for (std::size_t i = 0; i < n; ++i) {
      if (!f.derivative(i).is_zero()) g = polynomial_gcd(g, f.derivative(i));
    }
    report.verdict = Irreducibility::reducible;
    report.factor = g;
    report.detail = "repeated factor " + g.to_string();
    return report;
  }

  if (n > kMaxPackedVars) {
    report.detail = "too many variables for the modular factor search";
    return report;
  }
  for (const auto& [e, c] : f.terms()) {
    for (auto x : e) {
      if (x > 255) {
        report.detail = "exponent too large for the modular factor search";
        return report;
      }
    }
  }

  std::string notes;
  for (auto p : primes) {
    const PackedPoly fp = reduce_mod(f, p);
    if (fp.empty() || packed_degree(fp, n) != d) {
      notes += " p=" + std::to_string(p) + ": degree drops;";
      continue;
    }
    PackedPoly monic = fp;
    const std::uint64_t inv = powmod_u(monic.rbegin()->second, p - 2, p);
    for (auto& [key, c] : monic) c = c * inv % p;

    std::uint64_t budget = options.candidate_budget;
    bool exhausted = false;
    bool factor_found = false;
    for (std::uint32_t k = 1; 2 * k <= static_cast<std::uint32_t>(d); ++k) {
      PackedPoly g;
      const auto outcome = find_factor_mod_p(monic, p, n, k, budget, g);
      if (outcome == SearchOutcome::over_budget) {
        exhausted = true;
        break;
      }
      if (outcome == SearchOutcome::found) {
        factor_found = true;
        // Try the symmetric lift, rescaled by divisors of the lex-leading
        // coefficient of f.
        const BigInt lead = abs(f.terms().rbegin()->second);
        for (unsigned long s = 1; s <= 64 && s <= lead; ++s) {
          if (!mpz_divisible_ui_p(lead.get_mpz_t(), s)) continue;
          for (int sign : {1, -1}) {
            MultiPoly lifted = lift_symmetric(g, p, n, s);
            if (sign < 0) lifted = -lifted;
            if (lifted.is_constant()) continue;
            if (auto q = f.divide_exact(lifted); q && !q->is_constant()) {
              report.verdict = Irreducibility::reducible;
              report.factor = lifted;
              report.detail = "factor " + lifted.to_string() + " found mod " + std::to_string(p) +
                              " divides f over Z";
              return report;
            }
          }
        }
        notes += " p=" + std::to_string(p) + ": reducible mod p, lift failed;";
        break;
      }
    }
    if (exhausted) {
      notes += " p=" + std::to_string(p) + ": search budget exhausted;";
      continue;
    }
    if (!factor_found) {
      report.verdict = Irreducibility::irreducible;
      report.witness_prime = p;
      report.detail = "irreducible mod " + std::to_string(p) + " with degree preserved";
      return report;
    }
  }
  report.detail = "inconclusive:" + notes;
  return report;
}

std::string to_string(Separability s) {
  return s == Separability::separable ? "separable" : "not-separable";
}

std::string to_string(Irreducibility v) {
  switch (v) {
    case Irreducibility::irreducible: return "irreducible";
    case Irreducibility::reducible: return "reducible";
    case Irreducibility::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(SigmaMethod m) {
  return m == SigmaMethod::user_supplied ? "user-supplied" : "mod-p-estimated";
}

}  // namespace polydens
