#include "superad/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "superad/expansion.hpp"
#include "superad/gauss_legendre.hpp"
#include "superad/superadiabatic.hpp"
#include "superad/switching.hpp"

namespace superad {

namespace {

template <class Real>
Real cabs1(const std::complex<Real>& z) {
  using std::abs;
  return abs(z.real()) + abs(z.imag());
}

// In-place LU with partial pivoting, row-major n x n; overwrites rhs with the solution.
template <class Real>
void solve_dense(std::vector<std::complex<Real>>& m, std::vector<std::complex<Real>>& rhs, int n) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    Real best = cabs1(m[k * n + k]);
    for (int r = k + 1; r < n; ++r) {
      const Real v = cabs1(m[r * n + k]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0) throw InternalConsistency("singular collocation system");
    if (piv != k) {
      for (int c = 0; c < n; ++c) std::swap(m[k * n + c], m[piv * n + c]);
      std::swap(rhs[k], rhs[piv]);
    }
    const std::complex<Real> inv = std::complex<Real>(1) / m[k * n + k];
    for (int r = k + 1; r < n; ++r) {
      const std::complex<Real> l = m[r * n + k] * inv;
      if (l == std::complex<Real>(0)) continue;
      for (int c = k + 1; c < n; ++c) m[r * n + c] -= l * m[k * n + c];
      rhs[r] -= l * rhs[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    std::complex<Real> v = rhs[k];
    for (int c = k + 1; c < n; ++c) v -= m[k * n + c] * rhs[c];
    rhs[k] = v / m[k * n + k];
  }
}

template <class Real>
Real diff_norm(const Vec2<Real>& a, const Vec2<Real>& b) {
  using std::sqrt;
  return sqrt(std::norm(a[0] - b[0]) + std::norm(a[1] - b[1]));
}

template <class Real>
Real rabs(const Real& x) {
  using std::abs;
  return abs(x);
}

}  // namespace

template <class Real>
Vec2<Real> collocation_step(const Generator<Real>& H, const Real& epsilon, const Real& t, const Vec2<Real>& y,
                            const Real& h, int stages) {
  using Cx = std::complex<Real>;
  const auto& tab = gauss_legendre<Real>(stages);
  const int s = stages;
  const int n = 2 * s;
  std::vector<Sym2<Real>> hj(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) hj[j] = H(t + tab.c[j] * h);

  // stage values Y_i - h sum_j a_ij A_j Y_j = y, with A = -(i/eps) H
  std::vector<Cx> m(static_cast<std::size_t>(n * n), Cx(0));
  std::vector<Cx> rhs(static_cast<std::size_t>(n));
  const Real k = h / epsilon;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const Real w = k * tab.a[i][j];
      const Sym2<Real>& q = hj[j];
      const int r0 = 2 * i, c0 = 2 * j;
      m[r0 * n + c0] += Cx(0, w * q.a);
      m[r0 * n + c0 + 1] += Cx(0, w * q.b);
      m[(r0 + 1) * n + c0] += Cx(0, w * q.b);
      m[(r0 + 1) * n + c0 + 1] += Cx(0, w * q.c);
    }
    m[2 * i * n + 2 * i] += Cx(1);
    m[(2 * i + 1) * n + 2 * i + 1] += Cx(1);
    rhs[2 * i] = y[0];
    rhs[2 * i + 1] = y[1];
  }
  solve_dense(m, rhs, n);

  Cx acc0(0), acc1(0);
  for (int j = 0; j < s; ++j) {
    const Vec2<Real> hy = superad::apply(hj[j], Vec2<Real>{rhs[2 * j], rhs[2 * j + 1]});
    acc0 += tab.b[j] * hy[0];
    acc1 += tab.b[j] * hy[1];
  }
  const Cx mik(0, -k);
  return {y[0] + mik * acc0, y[1] + mik * acc1};
}

template <class Real>
std::vector<Vec2<Real>> evolve(const Generator<Real>& H, double epsilon, const std::vector<Real>& grid,
                               const Vec2<Real>& y0, const IntegratorOptions& opts, IntegratorStats* stats) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive and finite");
  if (grid.size() < 2) throw InvalidInput("output grid needs at least two points");
  if (!(opts.rtol > 0) || !(opts.atol > 0)) throw InvalidInput("tolerances must be positive");
  if (!(opts.time_unit > 0)) throw InvalidInput("time unit must be positive");
  if (opts.stages < 1) throw InvalidInput("stage count must be positive");
  const bool forward = grid[1] > grid[0];
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if ((grid[k] > grid[k - 1]) != forward || grid[k] == grid[k - 1]) {
      throw InvalidInput("output grid must be strictly monotone");
    }
  }

  using std::pow;
  const Real eps(epsilon);
  const Real unit(opts.time_unit);
  const Real rtol(opts.rtol), atol(opts.atol);
  const Real denom = pow(Real(2), 2 * opts.stages) - Real(1);
  const Real expo = Real(1) / Real(2 * opts.stages);
  const Real tiny = Real(64) * machine_epsilon<Real>();
  const Real norm0 = norm(y0);
  const Real span = rabs(Real(grid.back() - grid.front()));
  const Real drift_bound = Real(10) * atol * std::max(Real(1), norm0) * span / unit;

  IntegratorStats st;
  std::vector<Vec2<Real>> out;
  out.reserve(grid.size());
  out.push_back(y0);
  Vec2<Real> y = y0;
  Real t = grid[0];
  Real h = grid[1] - grid[0];
  std::size_t steps = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const Real target = grid[k];
    while (t != target) {
      const Real remaining = target - t;
      Real hh = h;
      bool last = false;
      if (rabs(hh) * Real(1.05) >= rabs(remaining)) {
        hh = remaining;
        last = true;
      }
      if (rabs(hh) <= tiny * std::max(rabs(t), unit)) {
        throw StiffnessError("step size collapsed to " + format_real(to_double(hh)) + " at t = " +
                             format_real(to_double(t)));
      }
      if (++steps > opts.max_steps) throw StiffnessError("step budget exhausted");

      const Vec2<Real> y1 = collocation_step(H, eps, t, y, hh, opts.stages);
      const Real half = hh / Real(2);
      const Vec2<Real> ym = collocation_step(H, eps, t, y, half, opts.stages);
      const Vec2<Real> y2 = collocation_step(H, eps, t + half, ym, half, opts.stages);
      const Real err = diff_norm(y2, y1) / denom;
      const Real tol = std::max(rtol * norm(y), atol) * rabs(hh) / unit;

      using std::isfinite;
      Real factor = Real(4);
      if (!isfinite(err)) {
        factor = Real(0.2);
      } else if (err > 0) {
        factor = std::clamp(Real(0.9) * pow(tol / err, expo), Real(0.2), Real(4));
      }
      if (err <= tol) {
        ++st.accepted;
        st.error_estimate += to_double(err);
        y = y2;
        t = last ? target : t + hh;
        // a clipped final step says nothing about the step the solution allows
        h = last ? (rabs(h) > rabs(hh * factor) ? h : hh * factor) : hh * factor;
      } else {
        ++st.rejected;
        h = hh * factor;
      }
    }
    out.push_back(y);
    if (opts.check_norm) {
      const Real drift = rabs(Real(norm(y) - norm0));
      st.max_norm_drift = std::max(st.max_norm_drift, to_double(drift));
      if (drift > drift_bound) {
        if (stats) *stats = st;
        throw AccuracyFailure("norm drift " + format_real(to_double(drift)) + " exceeds " +
                                  format_real(to_double(drift_bound)) + " at t = " + format_real(to_double(t)),
                              to_double(drift));
      }
    }
  }
  if (stats) *stats = st;
  return out;
}

// ------------------------------------------------------------------ configs

double double_precision_floor() { return 1e3 * std::numeric_limits<double>::epsilon(); }

std::vector<double> merged_grid(double s0, double s1, int uniform_points, double half_width, int refined_points) {
  if (!(s0 < s1)) throw InvalidInput("grid window must satisfy t0 < t1");
  if (uniform_points < 2) throw InvalidInput("uniform grid needs at least two points");
  if (refined_points < 0) throw InvalidInput("refined point count must be non-negative");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(uniform_points + refined_points));
  const double du = (s1 - s0) / (uniform_points - 1);
  for (int i = 0; i < uniform_points - 1; ++i) g.push_back(s0 + i * du);
  g.push_back(s1);
  if (refined_points >= 2 && half_width > 0) {
    const double dr = 2 * half_width / (refined_points - 1);
    for (int i = 0; i < refined_points; ++i) {
      const double r = i == refined_points - 1 ? half_width : -half_width + i * dr;
      if (r > s0 && r < s1) g.push_back(r);
    }
  }
  std::sort(g.begin(), g.end());
  const double min_gap = 1e-9 * (s1 - s0);
  std::vector<double> out;
  out.reserve(g.size());
  for (double v : g) {
    if (!out.empty() && v - out.back() <= min_gap) {
      // endpoints of the window win over refined points
      if (v == s1) out.back() = s1;
      continue;
    }
    out.push_back(v);
  }
  return out;
}

ResolvedConfig resolve(const HamiltonianSpec& spec, const PropagationConfig& config) {
  spec.validate();
  if (!(config.epsilon > 0) || !std::isfinite(config.epsilon)) throw InvalidInput("epsilon must be positive and finite");
  ResolvedConfig r;
  r.spec = spec;
  r.epsilon = config.epsilon;
  r.epsilon_rescaled = config.epsilon / (spec.E * spec.delta);
  const double eps_r = r.epsilon_rescaled;
  const double signal = std::exp(-1 / eps_r);

  if (config.precision) {
    r.precision = *config.precision;
    if (r.precision == Precision::double_ && signal < double_precision_floor()) {
      throw ConfigRejected("e^{-1/eps'} = " + format_real(signal) + " is below " +
                           format_real(double_precision_floor()) + "; extended precision is required");
    }
  } else {
    // double also needs room for a tolerance 1e3 below the signal
    r.precision = signal < 10 * double_precision_floor() ? Precision::extended : Precision::double_;
  }
  const double eps_p = r.precision == Precision::double_
                           ? std::numeric_limits<double>::epsilon()
                           : std::numeric_limits<Extended>::epsilon().convert_to<double>();
  r.stages = r.precision == Precision::double_ ? 6 : 10;

  const double floor_tol = 10 * eps_p;
  r.rtol = config.rtol.value_or(std::max(floor_tol, std::min(1e-12, 1e-4 * signal)));
  r.atol = config.atol.value_or(std::max(floor_tol, std::min(1e-14, 1e-6 * signal)));
  for (double tol : {r.rtol, r.atol}) {
    if (!(tol > 0) || !std::isfinite(tol)) throw InvalidInput("tolerances must be positive and finite");
    if (tol < floor_tol) {
      throw ConfigRejected("tolerance " + format_real(tol) + " is below the working-precision floor " +
                           format_real(floor_tol));
    }
  }
  const double required = 1e-3 * signal;
  if (std::max(r.rtol, r.atol) > required) {
    throw ConfigRejected("tolerance too loose for a transition of size e^{-1/eps'} = " + format_real(signal) +
                         "; need rtol, atol <= " + format_real(required));
  }

  if (config.initial_vector) {
    const auto& v = *config.initial_vector;
    for (const auto& z : v) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidInput("initial vector must be finite");
    }
    if (std::norm(v[0]) + std::norm(v[1]) == 0) throw InvalidInput("initial vector must be nonzero");
    r.initial_vector = v;
    r.initial_level = 0;
  } else {
    if (config.initial_level != 1 && config.initial_level != 2) throw InvalidInput("initial level must be 1 or 2");
    r.initial_level = config.initial_level;
  }
  const int n = eps_r <= 0.5 ? optimal_order(eps_r) : 0;
  r.order = std::max(n, 0);
  if (r.initial_level != 0 && r.order < 1) {
    throw TruncationOrderZero("eps' = " + format_real(eps_r) + " > 1/2 leaves no superadiabatic initial state");
  }

  if (!config.grid.empty()) {
    if (config.t0 || config.t1) throw InvalidInput("give either an explicit grid or t0/t1, not both");
    r.explicit_grid = true;
    for (double t : config.grid) {
      if (!std::isfinite(t)) throw InvalidInput("grid points must be finite");
      r.s_grid.push_back(t / spec.delta);
    }
    if (r.s_grid.size() < 2) throw InvalidInput("output grid needs at least two points");
    for (std::size_t k = 1; k < r.s_grid.size(); ++k) {
      if (!(r.s_grid[k] > r.s_grid[k - 1])) throw InvalidInput("output grid must be strictly increasing");
    }
    r.t0 = config.grid.front();
    r.t1 = config.grid.back();
  } else {
    const double half = std::max(25.0, 10 / std::sqrt(eps_r));
    r.t0 = config.t0.value_or(-spec.delta * half);
    r.t1 = config.t1.value_or(spec.delta * half);
    if (!std::isfinite(r.t0) || !std::isfinite(r.t1) || !(r.t0 < r.t1)) {
      throw InvalidInput("time window must satisfy t0 < t1");
    }
    r.uniform_points = config.uniform_points;
    r.refined_points = config.refined_points;
    r.s_grid = merged_grid(r.t0 / spec.delta, r.t1 / spec.delta, r.uniform_points, 4 * std::sqrt(2 * eps_r),
                           r.refined_points);
  }
  return r;
}

nlohmann::json ResolvedConfig::to_json() const {
  nlohmann::json j;
  j["epsilon"] = epsilon;
  j["E"] = spec.E;
  j["delta"] = spec.delta;
  j["epsilon_rescaled"] = epsilon_rescaled;
  j["rtol"] = rtol;
  j["atol"] = atol;
  j["precision"] = to_string(precision);
  j["stages"] = stages;
  j["order"] = order;
  if (initial_vector) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& z : *initial_vector) v.push_back({z.real(), z.imag()});
    j["initial_vector"] = v;
  } else {
    j["initial_level"] = initial_level;
  }
  if (explicit_grid) {
    nlohmann::json g = nlohmann::json::array();
    for (double s : s_grid) g.push_back(s * spec.delta);
    j["grid"] = g;
  } else {
    j["t0"] = t0;
    j["t1"] = t1;
    j["uniform_points"] = uniform_points;
    j["refined_points"] = refined_points;
  }
  return j;
}

// ------------------------------------------------------------------ records

template <class Real>
TransitionRecord<Real> propagate(const HamiltonianSpec& spec, const PropagationConfig& config) {
  return propagate<Real>(resolve(spec, config));
}

template <class Real>
TransitionRecord<Real> propagate(const ResolvedConfig& r) {
  if (r.precision != precision_of<Real>) {
    throw ConfigRejected("configuration resolved to " + to_string(r.precision) + " precision, caller uses " +
                         to_string(precision_of<Real>));
  }
  using Cx = std::complex<Real>;
  std::vector<Real> s_grid(r.s_grid.begin(), r.s_grid.end());

  std::optional<SuperadiabaticState<Real>> st1, st2;
  if (r.order >= 1) {
    BuildOptions bo;
    bo.exec = Exec::serial;
    const auto table = FloatTable<Real>::build(r.order, bo);
    st1 = make_state<Real>(r.epsilon_rescaled, 1, table);
    st2 = make_state<Real>(r.epsilon_rescaled, 2, table);
  }

  Vec2<Real> y0;
  if (r.initial_vector) {
    y0 = {Cx(Real((*r.initial_vector)[0].real()), Real((*r.initial_vector)[0].imag())),
          Cx(Real((*r.initial_vector)[1].real()), Real((*r.initial_vector)[1].imag()))};
  } else {
    y0 = evaluate_state(r.initial_level == 1 ? *st1 : *st2, s_grid.front());
  }

  const HamiltonianSpec unit = HamiltonianSpec::rescaled_model();
  const Generator<Real> H = [&unit](const Real& s) { return hamiltonian(unit, s); };
  IntegratorOptions io;
  io.rtol = r.rtol;
  io.atol = r.atol;
  io.stages = r.stages;
  io.time_unit = 1;

  TransitionRecord<Real> rec;
  rec.psi = evolve(H, r.epsilon_rescaled, s_grid, y0, io, &rec.stats);
  const Real delta(r.spec.delta);
  rec.times.reserve(s_grid.size());
  for (const Real& s : s_grid) rec.times.push_back(delta * s);
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    if (st1) {
      rec.b1.push_back(inner(evaluate_state(*st1, s_grid[k]), rec.psi[k]));
      rec.b2.push_back(inner(evaluate_state(*st2, s_grid[k]), rec.psi[k]));
    }
    rec.prediction.push_back(switching_curve<Real>(r.epsilon, r.spec.E, r.spec.delta, rec.times[k]));
  }
  rec.meta["config"] = r.to_json();
  rec.meta["integrator"] = {{"method", "gauss-legendre collocation, step doubling"},
                            {"accepted_steps", rec.stats.accepted},
                            {"rejected_steps", rec.stats.rejected},
                            {"error_estimate", rec.stats.error_estimate},
                            {"max_norm_drift", rec.stats.max_norm_drift}};
  return rec;
}

template <class Real>
void write_csv(std::ostream& out, const TransitionRecord<Real>& rec) {
  out << "# " << rec.meta.dump() << '\n';
  out << "t,re_psi1,im_psi1,re_psi2,im_psi2,abs_b1,abs_b2,prediction,abs_b2_minus_prediction\n";
  const bool have = !rec.b2.empty();
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    const auto& p = rec.psi[k];
    out << format_real(rec.times[k]) << ',' << format_real(p[0].real()) << ',' << format_real(p[0].imag()) << ','
        << format_real(p[1].real()) << ',' << format_real(p[1].imag()) << ',';
    if (have) {
      using std::abs;
      const Real a2 = abs(rec.b2[k]);
      out << format_real(Real(abs(rec.b1[k]))) << ',' << format_real(a2) << ',' << format_real(rec.prediction[k])
          << ',' << format_real(Real(abs(a2 - rec.prediction[k])));
    } else {
      out << "nan,nan," << format_real(rec.prediction[k]) << ",nan";
    }
    out << '\n';
  }
}

#define SUPERAD_PROPAGATOR_INSTANTIATE(R)                                                                         \
  template Vec2<R> collocation_step<R>(const Generator<R>&, const R&, const R&, const Vec2<R>&, const R&, int);  \
  template std::vector<Vec2<R>> evolve<R>(const Generator<R>&, double, const std::vector<R>&, const Vec2<R>&,    \
                                          const IntegratorOptions&, IntegratorStats*);                           \
  template TransitionRecord<R> propagate<R>(const HamiltonianSpec&, const PropagationConfig&);                  \
  template TransitionRecord<R> propagate<R>(const ResolvedConfig&);                                             \
  template void write_csv<R>(std::ostream&, const TransitionRecord<R>&);

SUPERAD_PROPAGATOR_INSTANTIATE(double)
SUPERAD_PROPAGATOR_INSTANTIATE(Extended)

}  // namespace superad
