#include "superad/oscillatory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "superad/errors.hpp"
#include "superad/special.hpp"

namespace superad {

const double GaussKronrod15::xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double GaussKronrod15::wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double GaussKronrod15::wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

namespace {

using C = std::complex<double>;

struct Piece {
  C value;
  double err = 0;
  long panels = 0;
  bool ok = true;
};

void gk15(const IntegralSpec& spec, double a, double b, C& kron, double& err) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const C fc = integrand(spec, mid);
  C rk = fc * GaussKronrod15::wgk[7];
  C rg = fc * GaussKronrod15::wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * GaussKronrod15::xgk[j];
    const C f = integrand(spec, mid - dx) + integrand(spec, mid + dx);
    rk += f * GaussKronrod15::wgk[j];
    if (j % 2 == 1) rg += f * GaussKronrod15::wg[j / 2];
  }
  kron = rk * half;
  err = std::abs((rk - rg) * half);
}

void adapt(const IntegralSpec& spec, double a, double b, double tol, int depth, int max_depth, Piece& out) {
  C v;
  double e;
  gk15(spec, a, b, v, e);
  if (e <= tol || depth >= max_depth) {
    out.value += v;
    out.err += e;
    out.panels += 1;
    if (e > tol) out.ok = false;
    return;
  }
  const double mid = 0.5 * (a + b);
  adapt(spec, a, mid, 0.5 * tol, depth + 1, max_depth, out);
  adapt(spec, mid, b, 0.5 * tol, depth + 1, max_depth, out);
}

/// [a, b] split into equal panels no wider than pi*eps; panel results are
/// summed in order so the value does not depend on the thread count.
Piece integrate_interval(const IntegralSpec& spec, double a, double b, double tol, const QuadratureOptions& opts,
                         long budget) {
  Piece total;
  if (!(b > a)) return total;
  const double width = M_PI * spec.epsilon;
  const double count = std::ceil((b - a) / width);
  if (count > static_cast<double>(budget)) {
    total.ok = false;
    total.panels = static_cast<long>(count);
    return total;
  }
  const long n = std::max(1L, static_cast<long>(count));
  const double h = (b - a) / static_cast<double>(n);
  const double local_tol = tol / static_cast<double>(n);
  std::vector<Piece> parts(static_cast<std::size_t>(n));
  const bool par = opts.exec == Exec::parallel && n > 64;
#pragma omp parallel for schedule(static) if (par)
  for (long i = 0; i < n; ++i) {
    const double lo = a + h * static_cast<double>(i);
    const double hi = (i == n - 1) ? b : a + h * static_cast<double>(i + 1);
    adapt(spec, lo, hi, local_tol, 0, opts.max_depth, parts[static_cast<std::size_t>(i)]);
  }
  for (const auto& p : parts) {
    total.value += p.value;
    total.err += p.err;
    total.panels += p.panels;
    total.ok = total.ok && p.ok;
  }
  return total;
}

}  // namespace

IntegralSpec IntegralSpec::with_m(int m, PoleSign pole, double t) {
  IntegralSpec s;
  s.m = m;
  s.epsilon = 1.0 / m;
  s.pole = pole;
  s.t = t;
  return s;
}

void IntegralSpec::validate() const {
  if (m < 2) throw InvalidInput("oscillatory integral needs m >= 2 for absolute integrability");
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive and finite");
  const int expect = static_cast<int>(std::floor(1.0 / epsilon * (1 + 8 * std::numeric_limits<double>::epsilon())));
  if (expect != m) throw InvalidInput("m must equal floor(1/epsilon)");
  if (phase_sign != 1 && phase_sign != -1) throw InvalidInput("phase_sign must be +-1");
}

C integrand(const IntegralSpec& spec, double s) {
  // (1 +- i s)^{-m} = (1+s^2)^{-m/2} e^{-+ i m atan s}
  const double amp = std::exp(-0.5 * spec.m * std::log1p(s * s));
  const double p = spec.pole == PoleSign::plus ? 1.0 : -1.0;
  const double phase = spec.phase_sign * s / spec.epsilon - p * spec.m * std::atan(s);
  return {amp * std::cos(phase), amp * std::sin(phase)};
}

double tail_cutoff(int m, double tol) {
  // S^{-(m-1)} / (m-1) = tol/10
  const double k = m - 1;
  return std::max(1.0, std::exp(std::log(10.0 / (tol * k)) / k));
}

QuadratureResult quadrature(const IntegralSpec& spec, double tol, const QuadratureOptions& opts) {
  spec.validate();
  if (!(tol > 0)) throw InvalidInput("tolerance must be positive");
  const double cut = tail_cutoff(spec.m, tol);
  const double tail = std::pow(cut, -(spec.m - 1)) / (spec.m - 1);
  const double upper = std::min(spec.t, cut);
  QuadratureResult r;
  if (upper <= -cut) {
    r.error_estimate = std::pow(-spec.t, -(spec.m - 1)) / (spec.m - 1);
    return r;
  }
  const double tails = spec.t > cut ? 2 * tail : tail;
  const Piece p = integrate_interval(spec, -cut, upper, 0.9 * tol - tails, opts, opts.max_panels);
  if (!p.ok) {
    double achieved = p.err + tails;
    if (p.err == 0) {
      // budget exhausted before integrating: best tolerance the budget admits
      const double reach = opts.max_panels * M_PI * spec.epsilon / 2;
      achieved = std::pow(reach, -(spec.m - 1)) / (spec.m - 1) * 10;
    }
    throw AccuracyFailure("quadrature cannot reach tol " + format_real(tol) + " within the panel budget", achieved);
  }
  r.value = p.value;
  r.error_estimate = p.err + tails;
  r.panels = p.panels;
  return r;
}

std::vector<QuadratureResult> quadrature_grid(const IntegralSpec& spec, std::span<const double> ts, double tol,
                                              const QuadratureOptions& opts) {
  spec.validate();
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (!(ts[i] >= ts[i - 1])) throw InvalidInput("quadrature grid must be nondecreasing");
  }
  std::vector<QuadratureResult> out(ts.size());
  if (ts.empty()) return out;
  const double cut = tail_cutoff(spec.m, tol);
  const double tail = std::pow(cut, -(spec.m - 1)) / (spec.m - 1);
  // breakpoints: -cut, then grid points clipped to [-cut, cut]
  std::vector<double> knots{-cut};
  for (double t : ts) knots.push_back(std::clamp(t, -cut, cut));
  const double span_len = std::max(knots.back() - knots.front(), 1e-300);
  const double budget_tol = 0.9 * tol - 2 * tail;
  std::vector<Piece> pieces(ts.size());
  QuadratureOptions inner = opts;
  inner.exec = Exec::serial;
  const bool par = opts.exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    pieces[i] = integrate_interval(spec, a, b, budget_tol * (b - a) / span_len + 1e-300, inner, opts.max_panels);
  }
  C acc = 0;
  double err = 0;
  long panels = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!pieces[i].ok) throw AccuracyFailure("grid quadrature exceeded the panel budget", pieces[i].err);
    acc += pieces[i].value;
    err += pieces[i].err;
    panels += pieces[i].panels;
    out[i].value = acc;
    out[i].error_estimate = err + (ts[i] > cut ? 2 * tail : tail);
    out[i].panels = panels;
  }
  return out;
}

C asymptotic_value(const IntegralSpec& spec) {
  const bool forward = (spec.pole == PoleSign::plus) == (spec.phase_sign == 1);
  if (!forward) return 0;
  const double m = spec.m;
  const double v = std::sqrt(M_PI / (2 * m)) * (erf(std::sqrt(m / 2) * spec.t) + 1);
  return v;  // real, so conjugation leaves it unchanged
}

C residue_value(const IntegralSpec& spec) {
  spec.validate();
  const bool forward = (spec.pole == PoleSign::plus) == (spec.phase_sign == 1);
  if (!forward) return 0;
  // 2 pi eps^{1-m} e^{-1/eps} / (m-1)!
  const double m = spec.m;
  const double logv = std::log(2 * M_PI) + (1 - m) * std::log(spec.epsilon) - 1 / spec.epsilon - std::lgamma(m);
  return std::exp(logv);
}

}  // namespace superad
