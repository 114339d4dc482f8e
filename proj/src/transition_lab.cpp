#include "superad/transition_lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>

#include "superad/expansion.hpp"
#include "superad/superadiabatic.hpp"

namespace superad {

double predict(double epsilon, double E, double delta, double t) {
  return switching_curve<double>(epsilon, E, delta, t);
}

PropagationConfig ExperimentConfig::propagation(int level) const {
  PropagationConfig p;
  p.epsilon = epsilon;
  p.rtol = rtol;
  p.atol = atol;
  p.precision = precision;
  p.initial_level = level;
  p.uniform_points = uniform_points;
  p.refined_points = refined_points;
  return p;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"epsilon", epsilon}, {"E", E}, {"delta", delta}, {"uniform_points", uniform_points},
                   {"refined_points", refined_points}};
  return j;  // tolerances and precision appear resolved in the propagation echo
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double u = (at - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + u * (y[k] - y[k - 1]);
}

double first_crossing(const std::vector<double>& x, const std::vector<double>& y, double level) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (y[k] >= level) {
      if (k == 0) return x[0];
      const double u = (level - y[k - 1]) / (y[k] - y[k - 1]);
      return x[k - 1] + u * (x[k] - x[k - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

TransferReport summarize(int level, const std::vector<double>& t, const std::vector<double>& m,
                         const std::vector<double>& pred, double amplitude, double w) {
  TransferReport r;
  r.level = level;
  for (std::size_t k = 0; k < t.size(); ++k) r.sup_error = std::max(r.sup_error, std::abs(m[k] - pred[k]));
  r.sup_error_relative = r.sup_error / amplitude;
  r.final_amplitude = m.back();
  r.amplitude_relative_error = std::abs(r.final_amplitude - amplitude) / amplitude;
  r.midpoint_ratio = interpolate(t, m, 0.0) / r.final_amplitude;
  r.half_time = first_crossing(t, m, 0.5 * r.final_amplitude);
  r.rise_fraction = (interpolate(t, m, 2 * w) - interpolate(t, m, -2 * w)) / r.final_amplitude;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= 5 * w) {
      lo = std::min(lo, m[k]);
      hi = std::max(hi, m[k]);
    }
  }
  r.late_variation = hi >= lo ? (hi - lo) / amplitude : 0;
  r.width = first_crossing(t, m, 0.75 * r.final_amplitude) - first_crossing(t, m, 0.25 * r.final_amplitude);
  return r;
}

nlohmann::json transfer_json(const TransferReport& r) {
  nlohmann::json j{{"initial_level", r.level},
                   {"sup_error", r.sup_error},
                   {"sup_error_relative", r.sup_error_relative},
                   {"final_amplitude", r.final_amplitude},
                   {"amplitude_relative_error", r.amplitude_relative_error},
                   {"midpoint_ratio", r.midpoint_ratio},
                   {"half_time", r.half_time},
                   {"rise_fraction", r.rise_fraction},
                   {"late_variation", r.late_variation},
                   {"width", r.width},
                   {"accepted_steps", r.stats.accepted},
                   {"rejected_steps", r.stats.rejected},
                   {"error_estimate", r.stats.error_estimate},
                   {"max_norm_drift", r.stats.max_norm_drift}};
  if (r.runtime_seconds) j["runtime_seconds"] = *r.runtime_seconds;
  return j;
}

template <class Real>
ComparisonReport run_impl(const ExperimentConfig& cfg, const ResolvedConfig& r1, const ResolvedConfig& r2) {
  using clock = std::chrono::steady_clock;
  ComparisonReport rep;
  rep.config = cfg;
  rep.resolved = r1.to_json();
  rep.resolved.erase("initial_level");
  rep.epsilon_rescaled = r1.epsilon_rescaled;
  rep.order = r1.order;
  rep.precision = r1.precision;
  rep.amplitude = switching_amplitude<double>(cfg.epsilon, cfg.E, cfg.delta);
  rep.switch_scale = std::sqrt(2 * cfg.delta * cfg.epsilon / cfg.E);

  const auto start1 = clock::now();
  const auto fwd = propagate<Real>(r1);
  const auto end1 = clock::now();
  const auto sym = propagate<Real>(r2);
  const auto end2 = clock::now();

  const std::size_t n = fwd.times.size();
  std::vector<double> t(n), m2(n), m1(n), pred(n);
  for (std::size_t k = 0; k < n; ++k) {
    using std::abs;
    t[k] = to_double(fwd.times[k]);
    m2[k] = to_double(Real(abs(fwd.b2[k])));
    m1[k] = to_double(Real(abs(sym.b1[k])));
    pred[k] = to_double(fwd.prediction[k]);
  }
  rep.forward = summarize(1, t, m2, pred, rep.amplitude, rep.switch_scale);
  rep.symmetric = summarize(2, t, m1, pred, rep.amplitude, rep.switch_scale);
  rep.forward.stats = fwd.stats;
  rep.symmetric.stats = sym.stats;
  if (cfg.timing) {
    rep.forward.runtime_seconds = std::chrono::duration<double>(end1 - start1).count();
    rep.symmetric.runtime_seconds = std::chrono::duration<double>(end2 - end1).count();
  }
  for (std::size_t k = 0; k < n; ++k) rep.symmetry_defect = std::max(rep.symmetry_defect, std::abs(m2[k] - m1[k]));

  // basis quality on the same grid, rescaled time
  BuildOptions bo;
  bo.exec = Exec::serial;
  const auto table = FloatTable<Real>::build(r1.order, bo);
  const auto s1 = make_state<Real>(r1.epsilon_rescaled, 1, table);
  const auto s2 = make_state<Real>(r1.epsilon_rescaled, 2, table);
  for (double s : r1.s_grid) {
    using std::abs;
    const Vec2<Real> p1 = evaluate_state(s1, Real(s));
    const Vec2<Real> p2 = evaluate_state(s2, Real(s));
    rep.basis.norm_defect_1 = std::max(rep.basis.norm_defect_1, to_double(Real(abs(Real(norm(p1) - 1)))));
    rep.basis.norm_defect_2 = std::max(rep.basis.norm_defect_2, to_double(Real(abs(Real(norm(p2) - 1)))));
    rep.basis.overlap = std::max(rep.basis.overlap, to_double(Real(abs(inner(p1, p2)))));
  }
  rep.curve = {std::move(t), std::move(m2), std::move(pred)};
  return rep;
}

}  // namespace

ComparisonReport run_experiment(const ExperimentConfig& cfg) {
  check_switching_params(cfg.epsilon, cfg.E, cfg.delta);
  const HamiltonianSpec spec{cfg.E, cfg.delta};
  const double eps_r = cfg.epsilon / (cfg.E * cfg.delta);
  if (!(eps_r < 1.0 / 3) || optimal_order(eps_r) < 2) {
    throw InvalidInput("switching experiment needs truncation order n >= 2, i.e. eps/(E delta) < 1/3; got " +
                       format_real(eps_r));
  }
  const ResolvedConfig r1 = resolve(spec, cfg.propagation(1));
  const ResolvedConfig r2 = resolve(spec, cfg.propagation(2));
  return with_precision(r1.precision, [&](auto zero) { return run_impl<decltype(zero)>(cfg, r1, r2); });
}

std::vector<ComparisonReport> sweep(const std::vector<ExperimentConfig>& configs) {
  const long count = static_cast<long>(configs.size());
  std::vector<ComparisonReport> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run_experiment(configs[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json j;
  j["config"] = config.to_json();
  j["resolved"] = resolved;
  j["epsilon_rescaled"] = epsilon_rescaled;
  j["order"] = order;
  j["precision"] = to_string(precision);
  j["amplitude"] = amplitude;
  j["switch_scale"] = switch_scale;
  j["sup_error"] = forward.sup_error;
  j["sup_error_relative"] = forward.sup_error_relative;
  j["final_amplitude"] = forward.final_amplitude;
  j["amplitude_relative_error"] = forward.amplitude_relative_error;
  j["forward"] = transfer_json(forward);
  j["symmetric"] = transfer_json(symmetric);
  j["symmetry_defect"] = symmetry_defect;
  j["basis_quality"] = {{"norm_defect_1", basis.norm_defect_1},
                        {"norm_defect_2", basis.norm_defect_2},
                        {"overlap", basis.overlap}};
  j["thresholds_note"] = "acceptance thresholds for this comparison are empirical; the asymptotic error constants are unspecified";
  return j;
}

CrosscheckReport beta_star_crosscheck(int N, double epsilon) {
  if (N < 100) throw InvalidInput("beta crosscheck needs N >= 100");
  CrosscheckReport r;
  r.N = N;
  r.beta_N = beta_sequence<double>(N).back();
  const double pi = superad::pi<double>();
  r.reference = 1 / (pi * std::sqrt(2.0));
  r.epsilon = epsilon;
  ExperimentConfig cfg;
  cfg.epsilon = epsilon;
  const ComparisonReport rep = run_experiment(cfg);
  r.final_amplitude = rep.forward.final_amplitude;
  r.beta_implied = r.final_amplitude / (2 * pi * std::exp(-1 / epsilon));
  r.beta_N_error = std::abs(r.beta_N - r.reference);
  r.implied_relative_error = std::abs(r.beta_implied - r.reference) / r.reference;
  r.identity_defect = std::abs(std::sqrt(2.0) - 2 * pi * r.reference);
  return r;
}

nlohmann::json CrosscheckReport::to_json() const {
  return {{"N", N},
          {"beta_N", beta_N},
          {"reference", reference},
          {"beta_N_error", beta_N_error},
          {"epsilon", epsilon},
          {"final_amplitude", final_amplitude},
          {"beta_implied", beta_implied},
          {"implied_relative_error", implied_relative_error},
          {"identity_defect", identity_defect}};
}

DeltaSweepReport delta_monotonicity(double epsilon, double E, const std::vector<double>& deltas) {
  if (deltas.size() < 2) throw InvalidInput("delta sweep needs at least two values");
  std::vector<ExperimentConfig> cfgs;
  for (double d : deltas) {
    ExperimentConfig c;
    c.epsilon = epsilon;
    c.E = E;
    c.delta = d;
    cfgs.push_back(c);
  }
  const auto reps = sweep(cfgs);
  DeltaSweepReport r;
  r.epsilon = epsilon;
  r.E = E;
  r.deltas = deltas;
  for (const auto& rep : reps) {
    r.amplitudes.push_back(rep.forward.final_amplitude);
    r.widths.push_back(rep.forward.width);
  }
  std::vector<std::size_t> idx(deltas.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return deltas[a] < deltas[b]; });
  r.amplitude_strictly_decreasing = true;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (!(r.amplitudes[idx[i]] < r.amplitudes[idx[i - 1]])) r.amplitude_strictly_decreasing = false;
  }
  const std::size_t lo = idx.front(), hi = idx.back();
  r.width_scaling = (r.widths[hi] / r.widths[lo]) / std::sqrt(deltas[hi] / deltas[lo]);
  return r;
}

nlohmann::json DeltaSweepReport::to_json() const {
  return {{"epsilon", epsilon},
          {"E", E},
          {"deltas", deltas},
          {"amplitudes", amplitudes},
          {"widths", widths},
          {"amplitude_strictly_decreasing", amplitude_strictly_decreasing},
          {"width_scaling", width_scaling}};
}

}  // namespace superad
