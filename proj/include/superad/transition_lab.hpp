#pragma once

// Measured transition histories against the erf switching law.

#include <optional>
#include <vector>

#include <json.hpp>

#include "superad/propagator.hpp"
#include "superad/switching.hpp"

namespace superad {

/// sqrt(2) e^{-E delta/eps} (erf(sqrt(E/(2 delta eps)) t) + 1) / 2.
double predict(double epsilon, double E, double delta, double t);

struct ExperimentConfig {
  double epsilon = 0.125;
  double E = 1;
  double delta = 1;
  std::optional<double> rtol, atol;
  std::optional<Precision> precision;
  int uniform_points = 2001;
  int refined_points = 501;
  bool timing = false;  // wall-clock fields are opt-in so reports stay reproducible

  PropagationConfig propagation(int level) const;
  nlohmann::json to_json() const;
};

/// One experiment: start in psi_level at -T, watch the other component.
struct TransferReport {
  int level = 1;
  double sup_error = 0;  // max_t | |b(t)| - predict(t) |
  double sup_error_relative = 0;
  double final_amplitude = 0;
  double amplitude_relative_error = 0;
  double midpoint_ratio = 0;  // |b(0)| / |b(T)|
  double half_time = 0;       // first t with |b| >= final/2
  double rise_fraction = 0;   // (|b|(2w) - |b|(-2w)) / final, w = sqrt(2 delta eps/E)
  double late_variation = 0;  // (max - min) of |b| over t >= 5w, divided by the amplitude
  double width = 0;           // t(3/4 final) - t(1/4 final)
  IntegratorStats stats;
  std::optional<double> runtime_seconds;
};

struct BasisQuality {
  double norm_defect_1 = 0;  // max_t | ‖psi_1‖ - 1 |
  double norm_defect_2 = 0;
  double overlap = 0;        // max_t |<psi_1, psi_2>|
};

struct Curve {
  std::vector<double> t, measured, predicted;
};

struct ComparisonReport {
  ExperimentConfig config;
  nlohmann::json resolved;  // propagation config echo
  double epsilon_rescaled = 0;
  int order = 0;
  Precision precision = Precision::double_;
  double amplitude = 0;
  double switch_scale = 0;  // sqrt(2 delta eps / E)
  TransferReport forward;   // psi_1 -> psi_2
  TransferReport symmetric; // psi_2 -> psi_1
  double symmetry_defect = 0;  // max_t | |b_2 fwd| - |b_1 sym| |
  BasisQuality basis;
  Curve curve;  // forward experiment; not part of to_json()

  nlohmann::json to_json() const;
};

/// Requires n >= 2 (InvalidInput otherwise); propagation errors pass through.
ComparisonReport run_experiment(const ExperimentConfig& config);

/// Independent runs in parallel; results in input order. The first failure
/// (by index) is rethrown after all runs finish.
std::vector<ComparisonReport> sweep(const std::vector<ExperimentConfig>& configs);

struct CrosscheckReport {
  int N = 0;
  double beta_N = 0;
  double reference = 0;  // 1/(pi sqrt 2)
  double epsilon = 0;
  double final_amplitude = 0;
  double beta_implied = 0;  // final_amplitude / (2 pi e^{-1/eps})
  double beta_N_error = 0;
  double implied_relative_error = 0;
  double identity_defect = 0;  // |sqrt 2 - 2 pi / (pi sqrt 2)|
  nlohmann::json to_json() const;
};

CrosscheckReport beta_star_crosscheck(int N, double epsilon = 0.25);

struct DeltaSweepReport {
  double epsilon = 0, E = 0;
  std::vector<double> deltas, amplitudes, widths;
  bool amplitude_strictly_decreasing = false;
  double width_scaling = 0;  // (width(d_max)/width(d_min)) / sqrt(d_max/d_min)
  nlohmann::json to_json() const;
};

DeltaSweepReport delta_monotonicity(double epsilon, double E, const std::vector<double>& deltas);

/// Linear interpolation on a sorted grid, clamped at the ends.
double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at);

/// First t where y crosses `level` going up (linear interpolation); NaN if never.
double first_crossing(const std::vector<double>& x, const std::vector<double>& y, double level);

}  // namespace superad
