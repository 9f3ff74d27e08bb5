#include "polydens/box.hpp"

#include <sstream>

#include "polydens/error.hpp"

namespace polydens {

Box::Box(std::vector<ClosedInterval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw DomainError("a box needs at least one dimension");
  for (auto& iv : intervals_) {
    iv.lo.canonicalize();
    iv.hi.canonicalize();
    if (iv.lo > iv.hi) throw DomainError("box interval has lo > hi");
  }
}

Box Box::cube(std::size_t n, const Rational& lo, const Rational& hi) {
  return Box(std::vector<ClosedInterval>(n, ClosedInterval{lo, hi}));
}

Rational Box::volume() const {
  Rational v = 1;
  for (const auto& iv : intervals_) v *= iv.hi - iv.lo;
  return v;
}

Box Box::scaled(const Rational& factor) const {
  if (sgn(factor) <= 0) throw DomainError("box scale factor must be positive");
  std::vector<ClosedInterval> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) out.push_back({iv.lo * factor, iv.hi * factor});
  return Box(std::move(out));
}

std::vector<std::pair<std::int64_t, std::int64_t>> Box::lattice_ranges(std::int64_t P) const {
  if (P <= 0) throw DomainError("P must be a positive integer");
  const Rational scale{BigInt(static_cast<long>(P))};
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& iv : intervals_) {
    out.emplace_back(to_int64(ceil_of(iv.lo * scale)), to_int64(floor_of(iv.hi * scale)));
  }
  return out;
}

BigInt Box::lattice_point_count(std::int64_t P) const {
  BigInt count = 1;
  for (const auto& [lo, hi] : lattice_ranges(P)) {
    if (hi < lo) return 0;
    count *= BigInt(static_cast<long>(hi - lo + 1));
  }
  return count;
}

std::vector<double> Box::lower_corner() const {
  std::vector<double> out;
  for (const auto& iv : intervals_) out.push_back(iv.lo.get_d());
  return out;
}

std::vector<double> Box::upper_corner() const {
  std::vector<double> out;
  for (const auto& iv : intervals_) out.push_back(iv.hi.get_d());
  return out;
}

std::string Box::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i != 0) os << 'x';
    os << '[' << intervals_[i].lo.get_str() << ',' << intervals_[i].hi.get_str() << ']';
  }
  return os.str();
}

bool operator==(const Box& a, const Box& b) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i].lo != b[i].lo || a[i].hi != b[i].hi) return false;
  }
  return true;
}

namespace {

Rational endpoint_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(BigInt(v.dump()));
  if (v.is_number_float()) return parse_rational(v.dump());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw ConfigError("box endpoint must be a number or a rational string");
}

}  // namespace

Box box_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("box must be a non-empty array of [a, b] pairs");
  std::vector<ClosedInterval> intervals;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw ConfigError("box entries must be [a, b] pairs");
    intervals.push_back({endpoint_from_json(pair[0]), endpoint_from_json(pair[1])});
  }
  try {
    return Box(std::move(intervals));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json to_json(const Box& box) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& iv : box.intervals()) {
    auto emit = [](const Rational& q) -> nlohmann::json {
      if (q.get_den() == 1 && fits_int64(q.get_num())) return to_int64(q.get_num());
      return q.get_str();
    };
    out.push_back({emit(iv.lo), emit(iv.hi)});
  }
  return out;
}

}  // namespace polydens
