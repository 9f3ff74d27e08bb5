#include "polydens/singular_integral.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "polydens/error.hpp"
#include "polydens/exp_sums.hpp"
#include "polydens/interval.hpp"

namespace polydens {

namespace {

QuadratureOptions make_options(const IntegralOptions& o, double abs_tol) {
  QuadratureOptions q;
  q.abs_tol = abs_tol;
  q.max_evaluations = o.max_evaluations;
  return q;
}

void require_positive_form(const MultiPoly& f0, const Box& box, const char* op) {
  const auto cert = certify_above(f0, box, Rational(0));
  if (cert.verdict == PositivityVerdict::violated) {
    throw DomainError(std::string(op) + ": f0 is not positive on the box");
  }
  if (cert.verdict == PositivityVerdict::undecided) {
    throw DomainError(std::string(op) + ": positivity of f0 on the box could not be certified");
  }
}

void require_above_one(const MultiPoly& f0, const Box& box, double P, const char* op) {
  if (!(P > 0) || !std::isfinite(P)) throw DomainError(std::string(op) + ": P must be positive");
  Rational threshold = 1;
  const Rational rp(P);
  for (int i = 0; i < f0.degree(); ++i) threshold /= rp;
  const auto cert = certify_above(f0, box, threshold);
  if (cert.verdict != PositivityVerdict::certified) {
    throw DomainError(std::string(op) + ": f0 > 1 on P*B could not be certified");
  }
}

double volume_of(const Box& box) { return box.volume().get_d(); }

}  // namespace

ComplexQuadratureResult oscillatory_integral(const MultiPoly& f0, const Box& box, double gamma,
                                             const IntegralOptions& options) {
  require_nonconstant(f0, "oscillatory_integral");
  if (!f0.is_homogeneous()) throw DomainError("oscillatory_integral: f0 must be homogeneous");
  if (box.dim() != f0.n_vars()) throw DomainError("oscillatory_integral: box dimension mismatch");
  if (f0.n_vars() > 4) throw DomainError("oscillatory_integral: at most 4 variables");
  if (!(options.tol > 0)) throw DomainError("oscillatory_integral: tolerance must be positive");
  const auto lower = box.lower_corner();
  const auto upper = box.upper_corner();
  if (gamma == 0) {
    ComplexQuadratureResult r;
    r.value = volume_of(box);
    return r;
  }
  const RationalInterval range = enclose(f0, box);
  const double spread = Rational(range.hi - range.lo).get_d();
  const auto panels = static_cast<std::uint32_t>(std::ceil(1.0 + std::abs(gamma) * spread));
  QuadratureOptions q = make_options(options, options.tol);
  q.panels.assign(f0.n_vars(), panels);
  const ComplexIntegrand integrand = [&](std::span<const double> x) {
    return unit_phase(static_cast<long double>(gamma) * static_cast<long double>(f0.evaluate_real(x)));
  };
  return integrate_box(integrand, lower, upper, q);
}

QuadratureResult li_f(const MultiPoly& f, const Box& box, double P, const IntegralOptions& options) {
  const MultiPoly fs[] = {f};
  return li_joint(fs, box, P, options);
}

QuadratureResult li_joint(std::span<const MultiPoly> fs, const Box& box, double P, const IntegralOptions& options) {
  if (fs.empty()) throw DomainError("li_f: no polynomials");
  std::vector<MultiPoly> forms;
  std::vector<double> scales;
  for (const auto& f : fs) {
    require_nonconstant(f, "li_f");
    if (box.dim() != f.n_vars()) throw DomainError("li_f: box dimension mismatch");
    forms.push_back(top_degree_part(f));
    require_above_one(forms.back(), box, P, "li_f");
    scales.push_back(f.degree() * std::log(P));
  }
  const double pn = std::pow(P, static_cast<double>(box.dim()));
  const RealIntegrand integrand = [&](std::span<const double> t) {
    double denom = 1;
    for (std::size_t i = 0; i < forms.size(); ++i) denom *= scales[i] + std::log(forms[i].evaluate_real(t));
    return 1.0 / denom;
  };
  const auto lower = box.lower_corner();
  const auto upper = box.upper_corner();
  QuadratureResult r = integrate_box(integrand, lower, upper, make_options(options, options.tol));
  r.value *= pn;
  r.abs_error_estimate *= pn;
  return r;
}

QuadratureResult log_moment(const MultiPoly& f0, const Box& box, unsigned k, const IntegralOptions& options) {
  require_nonconstant(f0, "log_moment");
  if (k > 40) throw DomainError("log_moment: k must be at most 40");
  if (box.dim() != f0.n_vars()) throw DomainError("log_moment: box dimension mismatch");
  using Key = std::tuple<std::string, std::string, unsigned, double>;
  static std::map<Key, QuadratureResult> cache;
  static std::mutex mu;
  const Key key{f0.to_string(), box.to_string(), k, options.tol};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  require_positive_form(f0, box, "log_moment");
  QuadratureResult r;
  if (k == 0) {
    r.value = volume_of(box);
  } else {
    const RealIntegrand integrand = [&](std::span<const double> t) {
      return std::pow(std::log(f0.evaluate_real(t)), static_cast<double>(k));
    };
    const auto lower = box.lower_corner();
    const auto upper = box.upper_corner();
    r = integrate_box(integrand, lower, upper, make_options(options, options.tol));
  }
  std::lock_guard lock(mu);
  cache.emplace(key, r);
  return r;
}

LaurentExpansion laurent_expansion(const MultiPoly& f, const Box& box, double P, unsigned K,
                                   const IntegralOptions& options) {
  require_nonconstant(f, "laurent_expansion");
  if (K < 1) throw DomainError("laurent_expansion: K must be at least 1");
  if (K > 41) throw DomainError("laurent_expansion: K exceeds the moment budget");
  const double L = std::log(P);
  if (!(L > 2)) throw DomainError("laurent_expansion: requires log P > 2");
  LaurentExpansion out;
  const double vol = volume_of(box);
  if (vol == 0) return out;
  const MultiPoly f0 = top_degree_part(f);
  require_positive_form(f0, box, "laurent_expansion");
  const double d = f.degree();
  const double pn = std::pow(P, static_cast<double>(box.dim()));
  const double dl = d * L;
  // Term k of P^n Σ_k (-1)^k J(k) / (dL)^(k+1), for k = 0..K-1.
  double total = 0;
  double qerr = 0;
  double scale = 1.0 / dl;
  for (unsigned k = 0; k < K; ++k) {
    const QuadratureResult j = log_moment(f0, box, k, options);
    out.moments.push_back(j.value);
    total += (k % 2 == 0 ? 1.0 : -1.0) * j.value * scale;
    qerr += j.abs_error_estimate * scale;
    scale /= dl;
  }
  out.value = pn * total;
  out.quadrature_error = pn * qerr;

  const ValueRange range = value_range(f0, box);
  if (range.min_lower <= 0) {
    out.truncation_bound = std::numeric_limits<double>::infinity();
    return out;
  }
  const double m = std::max(std::abs(std::log(range.min_lower.get_d())), std::abs(std::log(range.max_upper.get_d())));
  const double ratio = m / dl;
  if (ratio >= 1) {
    out.truncation_bound = std::numeric_limits<double>::infinity();
  } else {
    out.truncation_bound = pn * vol * std::pow(m, static_cast<double>(K)) * scale / (1 - ratio);
  }
  return out;
}

}  // namespace polydens
