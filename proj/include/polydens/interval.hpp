#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "polydens/bigint.hpp"
#include "polydens/box.hpp"
#include "polydens/multipoly.hpp"

namespace polydens {

/// Closed interval of rationals. All arithmetic is exact, so enclosures
/// never lose a bound to rounding.
struct RationalInterval {
  Rational lo;
  Rational hi;

  friend RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
  }
  friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b);
  friend RationalInterval operator*(const Rational& c, const RationalInterval& a);
};

RationalInterval pow(const RationalInterval& a, std::uint32_t k);

/// Exact value of f at a rational point.
Rational evaluate_rational(const MultiPoly& f, std::span<const Rational> point);

/// Natural interval extension of f over the box: a guaranteed enclosure of
/// f(box), generally wider than the true range.
RationalInterval enclose(const MultiPoly& f, const Box& box);

enum class PositivityVerdict { certified, violated, undecided };

struct PositivityCertificate {
  PositivityVerdict verdict = PositivityVerdict::undecided;
  std::size_t boxes_examined = 0;
  /// A point with f(point) <= threshold when verdict == violated.
  std::optional<std::vector<Rational>> witness;
};

/// Decides whether f > threshold everywhere on the box by recursive
/// bisection with interval enclosures.
PositivityCertificate certify_above(const MultiPoly& f, const Box& box, const Rational& threshold,
                                    std::size_t max_boxes = 200000);

/// Enclosures of min f(box) and max f(box):
/// min_lower <= min <= min_upper and max_lower <= max <= max_upper.
struct ValueRange {
  Rational min_lower;
  Rational min_upper;
  Rational max_lower;
  Rational max_upper;
};

/// Branch-and-bound refinement until each enclosure has relative width at
/// most `rel_tol` (or the box budget runs out).
ValueRange value_range(const MultiPoly& f, const Box& box, double rel_tol = 1e-9,
                       std::size_t max_boxes = 20000);

}  // namespace polydens
