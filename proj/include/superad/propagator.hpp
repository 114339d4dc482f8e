#pragma once

// Error-controlled solution of i eps psi' = H(t) psi.
//
// The stepper is s-stage Gauss-Legendre collocation (order 2s) with
// step-doubling error control; every output grid point is hit exactly.
// propagate() works in rescaled variables s = t/delta, eps' = eps/(E delta)
// and maps results back to the caller's units.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "superad/hamiltonian.hpp"
#include "superad/precision.hpp"

namespace superad {

// ---------------------------------------------------------------- integrator

template <class Real>
using Generator = std::function<Sym2<Real>(const Real&)>;

struct IntegratorOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  int stages = 6;
  /// Error is controlled per `time_unit` of elapsed time.
  double time_unit = 1;
  std::size_t max_steps = 10'000'000;
  /// Unitarity guard: |‖psi‖ - ‖psi_0‖| <= 10 atol max(1, ‖psi_0‖) span / time_unit.
  bool check_norm = true;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double error_estimate = 0;  // sum of accepted local error estimates
  double max_norm_drift = 0;
};

/// Solves i eps y' = H(t) y on a strictly monotone grid (either direction),
/// returning y at every grid point; out[0] = y0.
/// Throws StiffnessError on step-size collapse and AccuracyFailure on norm drift.
template <class Real>
std::vector<Vec2<Real>> evolve(const Generator<Real>& H, double epsilon, const std::vector<Real>& grid,
                               const Vec2<Real>& y0, const IntegratorOptions& opts,
                               IntegratorStats* stats = nullptr);

/// One collocation step from (t, y) with signed step h.
template <class Real>
Vec2<Real> collocation_step(const Generator<Real>& H, const Real& epsilon, const Real& t, const Vec2<Real>& y,
                            const Real& h, int stages);

// ------------------------------------------------------------------ configs

struct PropagationConfig {
  double epsilon = 0;
  std::optional<double> t0, t1;  // default: symmetric window of half-width delta max(25, 10/sqrt(eps'))
  std::optional<double> rtol, atol;
  std::optional<Precision> precision;  // unset: chosen from e^{-1/eps'}
  int initial_level = 1;               // superadiabatic level used at t0
  std::optional<std::array<std::complex<double>, 2>> initial_vector;  // overrides the level
  std::vector<double> grid;  // explicit output grid (caller units); empty = default grid
  int uniform_points = 2001;
  int refined_points = 501;  // on |t| <= 4 sqrt(2 delta eps / E)
};

/// Config after defaults and validation; everything needed to reproduce a run.
struct ResolvedConfig {
  HamiltonianSpec spec;
  double epsilon = 0;
  double epsilon_rescaled = 0;
  double t0 = 0, t1 = 0;
  double rtol = 0, atol = 0;
  Precision precision = Precision::double_;
  int stages = 6;
  int initial_level = 1;
  std::optional<std::array<std::complex<double>, 2>> initial_vector;
  int order = 0;  // truncation order of the overlap basis, 0 if none
  bool explicit_grid = false;
  int uniform_points = 0;
  int refined_points = 0;
  std::vector<double> s_grid;  // rescaled times

  nlohmann::json to_json() const;
};

/// e^{-1/eps'} below which double precision is refused.
double double_precision_floor();

/// Applies defaults, chooses precision, validates. Throws InvalidInput for
/// malformed values and ConfigRejected for tolerances or precision that
/// cannot resolve the e^{-1/eps'} signal.
ResolvedConfig resolve(const HamiltonianSpec& spec, const PropagationConfig& config);

/// Uniform grid on [s0, s1] merged with a uniform grid on |s| <= half_width.
std::vector<double> merged_grid(double s0, double s1, int uniform_points, double half_width, int refined_points);

// ------------------------------------------------------------------ records

template <class Real>
struct TransitionRecord {
  std::vector<Real> times;  // caller units
  std::vector<Vec2<Real>> psi;
  std::vector<std::complex<Real>> b1, b2;  // empty when the overlap basis does not exist
  std::vector<Real> prediction;
  IntegratorStats stats;
  nlohmann::json meta;
};

/// Throws ConfigRejected when the resolved precision differs from Real.
template <class Real>
TransitionRecord<Real> propagate(const HamiltonianSpec& spec, const PropagationConfig& config);

template <class Real>
TransitionRecord<Real> propagate(const ResolvedConfig& resolved);

/// CSV: t, Re/Im psi_1, Re/Im psi_2, |b1|, |b2|, prediction, |b2 - prediction|,
/// preceded by a '#'-comment line carrying the JSON meta.
template <class Real>
void write_csv(std::ostream& out, const TransitionRecord<Real>& record);

/// Calls f(double{}) or f(Extended{}).
template <class F>
decltype(auto) with_precision(Precision p, F&& f) {
  if (p == Precision::extended) return f(Extended{});
  return f(double{});
}

}  // namespace superad
