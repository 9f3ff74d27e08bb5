#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "polydens/box.hpp"
#include "polydens/multipoly.hpp"
#include "polydens/quadrature.hpp"

namespace polydens {

struct IntegralOptions {
  double tol = 1e-9;
  std::uint64_t max_evaluations = 50'000'000;
};

/// I(B; γ) = ∫_B e(γ f0(x)) dx, with ceil(1 + |γ|·(max f0 - min f0)) initial
/// panels per axis. Requires n <= 4.
ComplexQuadratureResult oscillatory_integral(const MultiPoly& f0, const Box& box, double gamma,
                                             const IntegralOptions& options = {});

/// Li_f(P·B) = ∫_{P·B} dx / log f0(x), computed as
/// P^n ∫_B dt / (d log P + log f0(t)). Requires f0 > 1 on P·B, certified
/// by interval bisection. The tolerance is relative to P^n.
QuadratureResult li_f(const MultiPoly& f, const Box& box, double P, const IntegralOptions& options = {});

/// ∫_{P·B} dx / Π_i log f_i0(x) for the joint count.
QuadratureResult li_joint(std::span<const MultiPoly> fs, const Box& box, double P,
                          const IntegralOptions& options = {});

/// J(k) = ∫_B (log f0(t))^k dt for 0 <= k <= 40. Results are cached per
/// (f0, B, k, tolerance).
QuadratureResult log_moment(const MultiPoly& f0, const Box& box, unsigned k, const IntegralOptions& options = {});

struct LaurentExpansion {
  double value = 0;
  /// Bound on the omitted terms k >= K of the geometric series.
  double truncation_bound = 0;
  /// Propagated quadrature error of the moments.
  double quadrature_error = 0;
  std::vector<double> moments;
};

/// vol(B)/d · P^n/log P + P^n Σ_{k=2}^{K} (-1)^(k-1) d^(-k) J(k-1) (log P)^(-k).
/// With L = log P and M = max |log f0| on B, the omitted terms are bounded
/// by P^n vol(B) M^K / ((dL)^(K+1) (1 - M/(dL))). Requires log P > 2 and
/// M < d log P.
LaurentExpansion laurent_expansion(const MultiPoly& f, const Box& box, double P, unsigned K,
                                   const IntegralOptions& options = {});

}  // namespace polydens
