#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "polydens/bigint.hpp"

namespace polydens {

struct ClosedInterval {
  Rational lo;
  Rational hi;
};

/// Axis-aligned closed box with rational endpoints.
class Box {
 public:
  explicit Box(std::vector<ClosedInterval> intervals);
  /// [lo, hi]^n
  static Box cube(std::size_t n, const Rational& lo, const Rational& hi);

  std::size_t dim() const noexcept { return intervals_.size(); }
  const ClosedInterval& operator[](std::size_t i) const { return intervals_[i]; }
  const std::vector<ClosedInterval>& intervals() const noexcept { return intervals_; }

  Rational volume() const;
  Rational width(std::size_t i) const { return intervals_[i].hi - intervals_[i].lo; }
  Box scaled(const Rational& factor) const;

  /// Integer coordinate ranges [ceil(P a_i), floor(P b_i)] of Z^n ∩ P·box.
  /// A range with lo > hi means the intersection is empty.
  std::vector<std::pair<std::int64_t, std::int64_t>> lattice_ranges(std::int64_t P) const;
  /// Π (floor(P b_i) - ceil(P a_i) + 1), clamped at zero.
  BigInt lattice_point_count(std::int64_t P) const;

  std::vector<double> lower_corner() const;
  std::vector<double> upper_corner() const;

  /// Stable text form such as "[1,2]x[1/2,3]".
  std::string to_string() const;

  friend bool operator==(const Box& a, const Box& b);

 private:
  std::vector<ClosedInterval> intervals_;
};

/// Accepts [[a,b], ...] with integers, decimals or "p/q" strings.
Box box_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Box& box);

}  // namespace polydens
