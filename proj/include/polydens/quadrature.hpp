#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace polydens {

struct QuadratureResult {
  double value = 0;
  double abs_error_estimate = 0;
  std::uint64_t evaluations = 0;
  /// False when the evaluation budget ran out before the tolerance was met.
  bool converged = true;
};

struct ComplexQuadratureResult {
  std::complex<double> value;
  double abs_error_estimate = 0;
  std::uint64_t evaluations = 0;
  bool converged = true;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  std::uint64_t max_evaluations = 50'000'000;
  /// Initial equal panels per axis (missing entries mean 1).
  std::vector<std::uint32_t> panels;
};

using ComplexIntegrand = std::function<std::complex<double>(std::span<const double>)>;
using RealIntegrand = std::function<double(std::span<const double>)>;

/// Tensor-product adaptive Gauss-Kronrod (7/15) quadrature over the box
/// [lower, upper]: each axis is integrated adaptively, the inner axes
/// nested inside the outer ones. The error estimate combines the
/// Kronrod-Gauss difference with the propagated inner estimates.
ComplexQuadratureResult integrate_box(const ComplexIntegrand& f, std::span<const double> lower,
                                      std::span<const double> upper, const QuadratureOptions& options = {});

QuadratureResult integrate_box(const RealIntegrand& f, std::span<const double> lower,
                               std::span<const double> upper, const QuadratureOptions& options = {});

}  // namespace polydens
