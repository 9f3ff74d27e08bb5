#include "polydens/interval.hpp"

#include <algorithm>
#include <queue>

#include "polydens/error.hpp"

namespace polydens {

RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
  const Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

RationalInterval operator*(const Rational& c, const RationalInterval& a) {
  if (sgn(c) >= 0) return {c * a.lo, c * a.hi};
  return {c * a.hi, c * a.lo};
}

RationalInterval pow(const RationalInterval& a, std::uint32_t k) {
  if (k == 0) return {1, 1};
  auto rpow = [](const Rational& x, std::uint32_t e) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), x.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), x.get_den_mpz_t(), e);
    return out;
  };
  const Rational lo_pow = rpow(a.lo, k);
  const Rational hi_pow = rpow(a.hi, k);
  if (k % 2 == 1) return {lo_pow, hi_pow};
  if (sgn(a.lo) >= 0) return {lo_pow, hi_pow};
  if (sgn(a.hi) <= 0) return {hi_pow, lo_pow};
  return {Rational(0), std::max(lo_pow, hi_pow)};
}

Rational evaluate_rational(const MultiPoly& f, std::span<const Rational> point) {
  if (point.size() != f.n_vars()) throw DomainError("point dimension does not match the polynomial");
  Rational total = 0;
  Rational power;
  for (const auto& [e, c] : f.terms()) {
    Rational term{c};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      mpz_pow_ui(power.get_num_mpz_t(), point[i].get_num_mpz_t(), e[i]);
      mpz_pow_ui(power.get_den_mpz_t(), point[i].get_den_mpz_t(), e[i]);
      term *= power;
    }
    total += term;
  }
  return total;
}

RationalInterval enclose(const MultiPoly& f, const Box& box) {
  if (box.dim() != f.n_vars()) throw DomainError("box dimension does not match the polynomial");
  RationalInterval total{0, 0};
  for (const auto& [e, c] : f.terms()) {
    RationalInterval term{1, 1};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) term = term * pow(RationalInterval{box[i].lo, box[i].hi}, e[i]);
    }
    total = total + Rational(c) * term;
  }
  return total;
}

namespace {

std::vector<Rational> midpoint(const Box& box) {
  std::vector<Rational> m;
  for (const auto& iv : box.intervals()) m.push_back((iv.lo + iv.hi) / 2);
  return m;
}

std::pair<Box, Box> bisect(const Box& box) {
  std::size_t widest = 0;
  for (std::size_t i = 1; i < box.dim(); ++i) {
    if (box.width(i) > box.width(widest)) widest = i;
  }
  auto left = box.intervals();
  auto right = box.intervals();
  const Rational mid = (box[widest].lo + box[widest].hi) / 2;
  left[widest].hi = mid;
  right[widest].lo = mid;
  return {Box(std::move(left)), Box(std::move(right))};
}

bool degenerate(const Box& box) {
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (sgn(box.width(i)) != 0) return false;
  }
  return true;
}

// Corners are the likeliest place for an extremum on the small boxes used here.
std::vector<std::vector<Rational>> sample_points(const Box& box) {
  std::vector<std::vector<Rational>> points{midpoint(box)};
  if (box.dim() <= 6) {
    const std::size_t corners = std::size_t{1} << box.dim();
    for (std::size_t mask = 0; mask < corners; ++mask) {
      std::vector<Rational> p;
      for (std::size_t i = 0; i < box.dim(); ++i) {
        p.push_back((mask >> i) & 1u ? box[i].hi : box[i].lo);
      }
      points.push_back(std::move(p));
    }
  }
  return points;
}

}  // namespace

PositivityCertificate certify_above(const MultiPoly& f, const Box& box, const Rational& threshold,
                                    std::size_t max_boxes) {
  PositivityCertificate cert;
  for (const auto& p : sample_points(box)) {
    if (evaluate_rational(f, p) <= threshold) {
      cert.verdict = PositivityVerdict::violated;
      cert.witness = p;
      cert.boxes_examined = 1;
      return cert;
    }
  }
  std::vector<Box> pending{box};
  while (!pending.empty()) {
    Box current = std::move(pending.back());
    pending.pop_back();
    ++cert.boxes_examined;
    if (enclose(f, current).lo > threshold) continue;
    auto mid = midpoint(current);
    if (evaluate_rational(f, mid) <= threshold) {
      cert.verdict = PositivityVerdict::violated;
      cert.witness = std::move(mid);
      return cert;
    }
    if (degenerate(current) || cert.boxes_examined >= max_boxes) {
      cert.verdict = PositivityVerdict::undecided;
      return cert;
    }
    auto [left, right] = bisect(current);
    pending.push_back(std::move(left));
    pending.push_back(std::move(right));
  }
  cert.verdict = PositivityVerdict::certified;
  return cert;
}

namespace {

// Returns an enclosure [lower, upper] of min f(box).
std::pair<Rational, Rational> refine_min(const MultiPoly& f, const Box& box, double rel_tol,
                                         std::size_t max_boxes) {
  struct Node {
    Rational lower;
    Box box;
  };
  auto cmp = [](const Node& a, const Node& b) { return a.lower > b.lower; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);

  Rational best_upper = evaluate_rational(f, midpoint(box));
  for (const auto& p : sample_points(box)) best_upper = std::min(best_upper, evaluate_rational(f, p));
  queue.push({enclose(f, box).lo, box});
  std::size_t examined = 0;
  const Rational tol(rel_tol);
  while (true) {
    const Node& top = queue.top();
    Rational gap = best_upper - top.lower;
    Rational scale = abs(best_upper);
    if (scale < 1) scale = 1;
    if (gap <= tol * scale || examined >= max_boxes || degenerate(top.box)) {
      return {std::min(top.lower, best_upper), best_upper};
    }
    Node node = top;
    queue.pop();
    ++examined;
    auto [left, right] = bisect(node.box);
    for (Box* child : {&left, &right}) {
      best_upper = std::min(best_upper, evaluate_rational(f, midpoint(*child)));
      queue.push({enclose(f, *child).lo, std::move(*child)});
    }
  }
}

}  // namespace

ValueRange value_range(const MultiPoly& f, const Box& box, double rel_tol, std::size_t max_boxes) {
  auto [min_lo, min_hi] = refine_min(f, box, rel_tol, max_boxes);
  auto [neg_lo, neg_hi] = refine_min(-f, box, rel_tol, max_boxes);
  return {min_lo, min_hi, -neg_hi, -neg_lo};
}

}  // namespace polydens
