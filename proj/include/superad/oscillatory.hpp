#pragma once

// I(t) = int_{-inf}^{t} e^{i sigma s/eps} (1 + i p s)^{-m} ds,  p = +-1 (pole),
// sigma = +-1 (phase direction; sigma = -1 gives the conjugate family).

#include <complex>
#include <span>
#include <vector>

#include "superad/pole_kernels.hpp"

namespace superad {

enum class PoleSign { plus, minus };

struct IntegralSpec {
  int m = 2;
  double epsilon = 0.5;
  PoleSign pole = PoleSign::plus;
  double t = 0;
  int phase_sign = 1;

  /// epsilon = 1/m.
  static IntegralSpec with_m(int m, PoleSign pole, double t);
  /// Requires m >= 2, epsilon > 0 and m = floor(1/epsilon).
  void validate() const;
};

struct QuadratureOptions {
  long max_panels = 20'000'000;
  int max_depth = 30;
  Exec exec = Exec::parallel;
};

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0;  // Kronrod-Gauss differences plus the tail bound
  long panels = 0;
};

std::complex<double> integrand(const IntegralSpec& spec, double s);

/// Truncation point S with S^{-(m-1)}/(m-1) <= tol/10.
double tail_cutoff(int m, double tol);

/// Adaptive G7-K15 on panels of width <= pi*eps. Throws AccuracyFailure
/// when the panel budget cannot reach `tol`.
QuadratureResult quadrature(const IntegralSpec& spec, double tol, const QuadratureOptions& opts = {});

/// I at every t in the increasing grid `ts` (spec.t ignored), accumulating
/// the integral piecewise; every point carries total error <= tol.
std::vector<QuadratureResult> quadrature_grid(const IntegralSpec& spec, std::span<const double> ts, double tol,
                                              const QuadratureOptions& opts = {});

/// Leading asymptotics: sqrt(pi/(2m)) (erf(sqrt(m/2) t) + 1) for pole +, 0 for
/// pole -; conjugated when phase_sign = -1 (with the pole roles swapped).
std::complex<double> asymptotic_value(const IntegralSpec& spec);

/// Exact value at t = +inf by residues.
std::complex<double> residue_value(const IntegralSpec& spec);

/// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half, Kronrod order)
/// and weights; exposed for the exactness tests.
struct GaussKronrod15 {
  static const double xgk[8];
  static const double wgk[8];
  static const double wg[4];
};

}  // namespace superad
