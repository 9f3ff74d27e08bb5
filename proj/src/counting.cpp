#include "polydens/counting.hpp"

#include <chrono>

#include "polydens/detail/parallel.hpp"
#include "polydens/error.hpp"
#include "polydens/interval.hpp"
#include "polydens/primality.hpp"
#include "polydens/sieve.hpp"

namespace polydens {

namespace {

/// f grouped by the exponent of the last variable.
class RowPoly {
 public:
  explicit RowPoly(const MultiPoly& f) : n_(f.n_vars()) {
    const std::size_t last = n_ - 1;
    const int d = std::max(f.degree_in(last), 0);
    for (int j = 0; j <= d; ++j) coeffs_.push_back(f.coefficient_in(last, static_cast<std::uint32_t>(j)));
  }

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }

  /// Values at t0, t0 + 1, ..., t0 + degree.
  std::vector<BigInt> start_values(std::span<const std::int64_t> prefix, std::int64_t t0) const {
    std::vector<std::int64_t> point(prefix.begin(), prefix.end());
    point.push_back(0);
    std::vector<BigInt> c;
    c.reserve(coeffs_.size());
    for (const auto& poly : coeffs_) c.push_back(poly.evaluate(std::span<const std::int64_t>(point)));
    std::vector<BigInt> out;
    for (std::size_t i = 0; i <= degree(); ++i) {
      const BigInt t(static_cast<long>(t0 + static_cast<std::int64_t>(i)));
      BigInt v = 0;
      for (std::size_t j = c.size(); j-- > 0;) v = v * t + c[j];
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::size_t n_;
  std::vector<MultiPoly> coeffs_;
};

template <class T>
T convert(const BigInt& v);
template <>
int128 convert<int128>(const BigInt& v) { return to_int128(v); }
template <>
BigInt convert<BigInt>(const BigInt& v) { return v; }

template <class T>
class Walker {
 public:
  void start(const std::vector<BigInt>& values) {
    diff_.clear();
    for (const auto& v : values) diff_.push_back(convert<T>(v));
    const std::size_t d = diff_.size() - 1;
    for (std::size_t k = 1; k <= d; ++k) {
      for (std::size_t i = d; i >= k; --i) diff_[i] -= diff_[i - 1];
    }
  }
  const T& value() const noexcept { return diff_[0]; }
  void advance() {
    for (std::size_t k = 0; k + 1 < diff_.size(); ++k) diff_[k] += diff_[k + 1];
  }

 private:
  std::vector<T> diff_;
};

struct Tally {
  std::uint64_t count = 0;
  std::uint64_t unknown = 0;
  std::uint64_t unproven = 0;
};

class Classifier {
 public:
  Classifier(DensityMode mode, BitTable table) : mode_(mode), table_(std::move(table)) {}

  bool prime(const int128& v, Tally& t) const {
    if (v < 2) return false;
    const auto u = static_cast<uint128>(v);
    if (u <= UINT64_MAX) {
      const auto w = static_cast<std::uint64_t>(u);
      if (table_.contains(w)) return table_.test(w);
      return is_prime_u64(w);
    }
    return prime(from_int128(v), t);
  }

  bool prime(const BigInt& v, Tally& t) const {
    if (v < 2) return false;
    if (fits_int128(v)) {
      const int128 w = to_int128(v);
      if (static_cast<uint128>(w) <= UINT64_MAX) return prime(w, t);
    }
    const auto r = primality(v);
    if (r.prime && !r.proven) ++t.unproven;
    return r.prime;
  }

  bool squarefree(const int128& v, Tally& t) const {
    const uint128 a = v < 0 ? static_cast<uint128>(-v) : static_cast<uint128>(v);
    if (a == 0) return false;
    if (a <= UINT64_MAX) {
      const auto w = static_cast<std::uint64_t>(a);
      if (table_.contains(w)) return table_.test(w);
      if (w < 1'000'000'000'000'000'000ULL) return is_squarefree_u64(w);
    }
    return squarefree(from_int128(v), t);
  }

  bool squarefree(const BigInt& v, Tally& t) const {
    if (fits_int128(v)) {
      const int128 w = to_int128(v);
      const uint128 a = w < 0 ? static_cast<uint128>(-w) : static_cast<uint128>(w);
      if (a < 1'000'000'000'000'000'000ULL) return squarefree(w, t);
    }
    const auto verdict = squarefree_verdict(v);
    if (verdict == SquarefreeVerdict::unknown) {
      ++t.unknown;
      return false;
    }
    return verdict == SquarefreeVerdict::squarefree;
  }

  DensityMode mode() const noexcept { return mode_; }

 private:
  DensityMode mode_;
  BitTable table_;
};

template <class T>
Tally count_slab(const std::vector<RowPoly>& rows, const std::vector<std::pair<std::int64_t, std::int64_t>>& ranges,
                 std::int64_t first_lo, std::int64_t first_hi, const Classifier& classify) {
  Tally tally;
  const std::size_t n = ranges.size();
  const std::size_t prefix_len = n - 1;
  std::int64_t t_lo = ranges[n - 1].first;
  std::int64_t t_hi = ranges[n - 1].second + 1;
  std::vector<std::int64_t> prefix(prefix_len);
  if (prefix_len == 0) {
    t_lo = first_lo;
    t_hi = first_hi;
    if (t_lo >= t_hi) return tally;
  } else {
    if (first_lo >= first_hi) return tally;
    prefix[0] = first_lo;
    for (std::size_t i = 1; i < prefix_len; ++i) prefix[i] = ranges[i].first;
  }
  std::vector<Walker<T>> walkers(rows.size());
  for (;;) {
    for (std::size_t k = 0; k < rows.size(); ++k) walkers[k].start(rows[k].start_values(prefix, t_lo));
    for (std::int64_t t = t_lo; t < t_hi; ++t) {
      bool hit = true;
      switch (classify.mode()) {
        case DensityMode::prime: hit = classify.prime(walkers[0].value(), tally); break;
        case DensityMode::squarefree: hit = classify.squarefree(walkers[0].value(), tally); break;
        case DensityMode::joint:
          for (const auto& w : walkers) {
            if (!classify.prime(w.value(), tally)) {
              hit = false;
              break;
            }
          }
          break;
      }
      tally.count += hit;
      for (auto& w : walkers) w.advance();
    }
    std::size_t i = prefix_len;
    while (i > 0) {
      --i;
      const std::int64_t limit = i == 0 ? first_hi : ranges[i].second + 1;
      if (++prefix[i] < limit) break;
      if (i == 0) return tally;
      prefix[i] = ranges[i].first;
    }
    if (prefix_len == 0) return tally;
  }
}

}  // namespace

std::vector<BigInt> evaluate_row(const MultiPoly& f, std::span<const std::int64_t> prefix, std::int64_t t0,
                                 std::uint64_t count) {
  if (prefix.size() + 1 != f.n_vars()) throw DomainError("evaluate_row: prefix length must be n - 1");
  const RowPoly row(f);
  Walker<BigInt> w;
  w.start(row.start_values(prefix, t0));
  std::vector<BigInt> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(w.value());
    w.advance();
  }
  return out;
}

CountResult count_values(std::span<const MultiPoly> fs, const Box& box, std::int64_t P, DensityMode mode,
                         const CountingOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (fs.empty()) throw DomainError("count_values: no polynomials");
  if (mode != DensityMode::joint && fs.size() != 1) {
    throw DomainError("count_values: " + to_string(mode) + " mode takes exactly one polynomial");
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    require_nonconstant(fs[i], "count_values");
    if (fs[i].n_vars() != box.dim()) throw DomainError("count_values: box dimension mismatch");
    for (std::size_t j = 0; j < i; ++j) {
      if (fs[i] == fs[j]) throw DomainError("count_values: joint polynomials must be pairwise distinct");
    }
  }
  if (P <= 0) throw DomainError("count_values: P must be positive");

  CountResult result;
  result.P = P;
  result.mode = mode;
  const BigInt points = box.lattice_point_count(P);
  if (points > from_uint64(options.lattice_budget)) {
    throw BudgetExceeded("count_values: " + points.get_str() + " lattice points exceed the budget");
  }
  result.lattice_points = to_uint64(points);
  if (result.lattice_points == 0) return result;

  const auto ranges = box.lattice_ranges(P);
  const std::size_t n = ranges.size();

  // Exact enclosure of every value the difference tables can hold.
  std::vector<ClosedInterval> extended;
  for (std::size_t i = 0; i < n; ++i) {
    extended.push_back({Rational(BigInt(static_cast<long>(ranges[i].first))),
                        Rational(BigInt(static_cast<long>(ranges[i].second)))});
  }
  bool narrow = true;
  BigInt value_lo, value_hi;
  std::vector<RowPoly> rows;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    rows.emplace_back(fs[k]);
    auto ext = extended;
    ext[n - 1].hi += static_cast<long>(rows.back().degree());
    const RationalInterval r = enclose(fs[k], Box(ext));
    const BigInt lo = floor_of(r.lo);
    const BigInt hi = ceil_of(r.hi);
    value_lo = k == 0 ? lo : BigInt(std::min(value_lo, lo));
    value_hi = k == 0 ? hi : BigInt(std::max(value_hi, hi));
    BigInt bound = std::max(abs(lo), abs(hi));
    mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), rows.back().degree());
    if (mpz_sizeinbase(bound.get_mpz_t(), 2) > 124) narrow = false;
  }

  BitTable table;
  if (mode == DensityMode::squarefree) {
    const BigInt top = std::max(abs(value_lo), abs(value_hi));
    if (top <= from_uint64(options.table_limit)) {
      BigInt bottom = 0;
      if (sgn(value_lo) > 0) bottom = value_lo;
      if (sgn(value_hi) < 0) bottom = -value_hi;
      table = squarefree_table(to_uint64(bottom), to_uint64(top));
    }
  } else if (value_hi >= 2 && fits_int64(value_hi)) {
    const BigInt lo = std::max(value_lo, BigInt(0));
    if (value_hi - lo <= from_uint64(options.table_limit)) table = prime_table(to_uint64(lo), to_uint64(value_hi));
  }
  const Classifier classify(mode, std::move(table));

  const std::int64_t first_lo = ranges[0].first;
  const std::int64_t first_hi = ranges[0].second + 1;
  const auto parts = detail::run_chunks(first_lo, first_hi, options.threads, [&](std::int64_t a, std::int64_t b) {
    return narrow ? count_slab<int128>(rows, ranges, a, b, classify) : count_slab<BigInt>(rows, ranges, a, b, classify);
  });
  for (const auto& t : parts) {
    result.count += t.count;
    result.unknown += t.unknown;
    result.unproven += t.unproven;
  }
  result.partial = result.unknown > 0;
  result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace polydens
