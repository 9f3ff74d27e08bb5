#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <ostream>
#include <vector>

#include "polydens/bigint.hpp"
#include "polydens/box.hpp"
#include "polydens/local_counts.hpp"
#include "polydens/multipoly.hpp"

namespace polydens {

using Complex = std::complex<double>;

/// e(x) = exp(2πix), with the argument reduced mod 1 first.
Complex unit_phase(long double x);

/// e(k/q) for k in [0, q); exact at multiples of q/4.
class RootTable {
 public:
  explicit RootTable(std::uint64_t q);
  std::uint64_t order() const noexcept { return q_; }
  const Complex& operator[](std::uint64_t k) const { return roots_[k]; }

 private:
  std::uint64_t q_;
  std::vector<Complex> roots_;
};

/// hist[v] = #{x in (Z/qZ)^n : f(x) = v mod q}.
std::vector<std::uint64_t> value_histogram_mod(const MultiPoly& f, std::uint64_t q,
                                               const CountOptions& options = {});

/// S_{a,q} = Σ_{x mod q} e(a f(x)/q). Requires gcd(a, q) = 1.
Complex complete_exp_sum(const MultiPoly& f, std::int64_t a, std::uint64_t q,
                         const CountOptions& options = {});

struct ExpSumTable {
  std::uint64_t q = 1;
  std::map<std::uint64_t, Complex> values;
};

/// S_{a,q} for every a in [0, q) coprime to q.
ExpSumTable exp_sum_table(const MultiPoly& f, std::uint64_t q, const CountOptions& options = {});

/// T_f(q) = q^(-n) Σ_{a in (Z/qZ)*} |S_{a,q}|. T_f(1) = 1.
double t_f(const MultiPoly& f, std::uint64_t q, const CountOptions& options = {});

/// g(q, d) assembled multiplicatively from p^l (1 - p^-2) g(p^l, p^m):
/// 0 if l >= m >= 2, 1 if m < min(2, l), 1 - p^(l-2) if l = m <= 1.
Rational g_local(std::uint64_t q, std::uint64_t d);

/// G(q) by the closed form: zero unless q is cube-free, otherwise
/// Π_{p | q} -1/(p^2 - 1).
Rational big_g(std::uint64_t q);

/// G(q) = Σ_{b mod q} e(b/q) g(q, gcd(b, q)) from the definition, grouping b
/// by d = gcd(b, q). Each inner sum Σ_{gcd(c, q/d) = 1} e(c/(q/d)) is summed
/// numerically and rounded to the integer it must be.
Rational big_g_defining_sum(std::uint64_t q);

/// The defining sum evaluated term by term in floating point.
Complex big_g_numeric(std::uint64_t q);

/// Integer histogram of f over the lattice points of P·box.
std::map<std::int64_t, std::uint64_t> lattice_value_histogram(const MultiPoly& f, const Box& box,
                                                              std::int64_t P, std::uint64_t budget);

/// S(α) = Σ_{x in Z^n ∩ P·box} e(α f(x)).
Complex s_sum(const MultiPoly& f, const Box& box, std::int64_t P, long double alpha,
              std::uint64_t budget = 1'000'000'000);

struct IntegerInterval {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
};

/// [½ min f0(box) P^d, 2 max f0(box) P^d], widened to integers using outer
/// enclosures of the extrema.
IntegerInterval w_interval(const MultiPoly& f, const Box& box, std::int64_t P);

/// Integers m with min f0(box) - 1 <= m P^(-d) <= max f0(box) + 1.
IntegerInterval q_interval(const MultiPoly& f, const Box& box, std::int64_t P);

/// W(α) = Σ_{p prime in interval} e(α p).
Complex w_sum(const IntegerInterval& interval, long double alpha);

/// Q(α) = Σ_{m in interval, m != 0 square-free} e(α m).
Complex q_sum(const IntegerInterval& interval, long double alpha);

struct OrthogonalityResult {
  std::int64_t count = 0;
  /// Distance of the raw DFT average from the nearest integer.
  double residual = 0;
  std::uint64_t grid = 0;
};

/// (1/N) Σ_{j<N} S(j/N) conj(W(j/N)) with N one more than the spread of all
/// frequencies, which counts the lattice points with f(x) prime in the
/// W-interval exactly. Requires f0 > 0 on the box.
OrthogonalityResult orthogonality_count(const MultiPoly& f, const Box& box, std::int64_t P,
                                        std::uint64_t budget = 1'000'000'000);

struct ObservatoryResult {
  double lhs = 0;
  double lhs_imag = 0;
  double rhs = 0;
  bool agrees = false;
};

/// lhs = Σ_{a in F_p*} S_{a,p}, rhs = -p^n + p N_p.
ObservatoryResult observatory_check(const MultiPoly& f, std::uint64_t p, const CountOptions& options = {});

/// Rows a,re,im.
void write_exp_sum_table_csv(std::ostream& out, const ExpSumTable& table);
/// Rows q,T_f,G for q in [1, q_max]; G as an exact fraction.
void write_tf_g_csv(std::ostream& out, const MultiPoly& f, std::uint64_t q_max,
                    const CountOptions& options = {});

}  // namespace polydens
