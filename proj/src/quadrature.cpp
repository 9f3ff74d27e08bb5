#include "polydens/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "polydens/error.hpp"

namespace polydens {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using C = std::complex<double>;

struct Panel {
  double a;
  double b;
  C value;
  double error;
  friend bool operator<(const Panel& x, const Panel& y) { return x.error < y.error; }
};

class Integrator {
 public:
  Integrator(const ComplexIntegrand& f, std::span<const double> lower, std::span<const double> upper,
             const QuadratureOptions& options)
      : f_(f), lower_(lower.begin(), lower.end()), upper_(upper.begin(), upper.end()), options_(options),
        point_(lower.size()) {}

  ComplexQuadratureResult run() {
    ComplexQuadratureResult r;
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!(upper_[i] > lower_[i])) {
        r.value = 0;
        return r;
      }
    }
    const auto [value, error] = axis(0, options_.abs_tol);
    r.value = value;
    r.abs_error_estimate = error;
    r.evaluations = evaluations_;
    r.converged = !exhausted_ && error <= options_.abs_tol;
    return r;
  }

 private:
  /// Applies the 15-point rule on [a, b] along `level`; returns the
  /// Kronrod value and an error estimate.
  Panel rule(std::size_t level, double a, double b, double inner_tol) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    C kronrod = 0;
    C gauss = 0;
    double inner_error = 0;
    auto sample = [&](double x) -> std::pair<C, double> {
      point_[level] = x;
      if (level + 1 == point_.size()) {
        ++evaluations_;
        return {f_(point_), 0.0};
      }
      return axis(level + 1, inner_tol);
    };
    for (std::size_t k = 0; k < 8; ++k) {
      if (k == 7) {
        const auto [v, e] = sample(center);
        kronrod += kKronrod[7] * v;
        gauss += kGauss[3] * v;
        inner_error += kKronrod[7] * e;
        continue;
      }
      const double dx = half * kNodes[k];
      const auto [v1, e1] = sample(center - dx);
      const auto [v2, e2] = sample(center + dx);
      kronrod += kKronrod[k] * (v1 + v2);
      inner_error += kKronrod[k] * (e1 + e2);
      if (k % 2 == 1) gauss += kGauss[k / 2] * (v1 + v2);
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss) + half * inner_error};
  }

  std::pair<C, double> axis(std::size_t level, double tol) {
    const double lo = lower_[level];
    const double hi = upper_[level];
    const double width = hi - lo;
    const double inner_tol = tol / (2.0 * width);
    const std::uint32_t n = level < options_.panels.size() ? std::max<std::uint32_t>(1, options_.panels[level]) : 1;
    std::priority_queue<Panel> heap;
    C total = 0;
    double error = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double a = lo + width * i / n;
      const double b = i + 1 == n ? hi : lo + width * (i + 1) / n;
      Panel p = rule(level, a, b, inner_tol);
      total += p.value;
      error += p.error;
      heap.push(p);
    }
    while (error > tol && !heap.empty()) {
      if (evaluations_ > options_.max_evaluations) {
        exhausted_ = true;
        break;
      }
      const Panel worst = heap.top();
      const double mid = 0.5 * (worst.a + worst.b);
      if (!(mid > worst.a && mid < worst.b)) break;
      heap.pop();
      Panel left = rule(level, worst.a, mid, inner_tol);
      Panel right = rule(level, mid, worst.b, inner_tol);
      total += left.value + right.value - worst.value;
      error += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
    }
    total = 0;
    error = 0;
    for (auto h = heap; !h.empty(); h.pop()) {
      total += h.top().value;
      error += h.top().error;
    }
    return {total, error};
  }

  const ComplexIntegrand& f_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  QuadratureOptions options_;
  std::vector<double> point_;
  std::uint64_t evaluations_ = 0;
  bool exhausted_ = false;
};

}  // namespace

ComplexQuadratureResult integrate_box(const ComplexIntegrand& f, std::span<const double> lower,
                                      std::span<const double> upper, const QuadratureOptions& options) {
  if (lower.size() != upper.size() || lower.empty()) throw DomainError("integrate_box: bad box dimensions");
  if (!(options.abs_tol > 0)) throw DomainError("integrate_box: tolerance must be positive");
  return Integrator(f, lower, upper, options).run();
}

QuadratureResult integrate_box(const RealIntegrand& f, std::span<const double> lower,
                               std::span<const double> upper, const QuadratureOptions& options) {
  const ComplexIntegrand wrapped = [&f](std::span<const double> x) { return std::complex<double>(f(x), 0.0); };
  const auto c = integrate_box(wrapped, lower, upper, options);
  return {c.value.real(), c.abs_error_estimate, c.evaluations, c.converged};
}

}  // namespace polydens
