#include "superad/superadiabatic.hpp"

#include <cmath>
#include <limits>

#include "superad/pole_algebra.hpp"

namespace superad {

namespace {

template <class Real>
std::complex<Real> cexp(const std::complex<Real>& z) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Real r = exp(z.real());
  return {r * cos(z.imag()), r * sin(z.imag())};
}

template <class Real>
std::complex<Real> prefactor(const SuperadiabaticState<Real>& s, const Real& t) {
  const std::complex<Real> F = integrate_from_minus_infinity(s.exponent_integrand, t);
  const std::complex<Real> phase(Real(0), t / (Real(2) * s.epsilon));
  return s.level == 1 ? cexp(phase + F) : cexp(-phase - F);
}

}  // namespace

int optimal_order(double epsilon) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive and finite");
  const double inv = 1.0 / epsilon * (1 + 8 * std::numeric_limits<double>::epsilon());
  if (inv > 1e6) throw CapacityError("epsilon too small: truncation order would exceed 1e6");
  return static_cast<int>(std::floor(inv)) - 1;
}

template <class Real, class Coeff>
SuperadiabaticState<Real> make_state(double epsilon, int level, const ExpansionTable<Coeff>& table, int n_override) {
  if (level != 1 && level != 2) throw InvalidInput("state level must be 1 or 2");
  const int n = n_override > 0 ? n_override : optimal_order(epsilon);
  if (n < 1) throw TruncationOrderZero("epsilon > 1/2 leaves no terms in the truncated expansion");
  if (table.order() < n) {
    throw CapacityError("expansion table has order " + std::to_string(table.order()) + ", state needs " +
                        std::to_string(n));
  }
  if (table.reflected()) throw InvalidInput("make_state expects the unreflected table");
  using Cx = std::complex<Real>;
  SuperadiabaticState<Real> s;
  s.epsilon = Real(epsilon);
  s.n = n;
  s.level = level;

  // unnormalized scale eps^j (j-1)!
  std::vector<Real> scale_j(static_cast<std::size_t>(n) + 1);
  scale_j[1] = s.epsilon;
  for (int j = 1; j < n; ++j) scale_j[j + 1] = scale_j[j] * s.epsilon * Real(j);

  std::vector<FloatPole<Real>> gh;  // g^_j in working precision
  gh.reserve(static_cast<std::size_t>(n));
  PoleBuilder<Cx> gb(2 * n);
  for (int j = 1; j <= n; ++j) {
    gh.push_back(to_float<Real>(table.g(j)));
    for (const auto& term : gh.back().terms()) gb.at(term.index) += term.value * scale_j[j];
  }
  FloatPole<Real> g = gb.build();
  if (level == 2) g = reflect(g);
  s.g_eps = g;
  s.exponent_integrand = times_coupling(g);
  s.sigma = scale_j[n] * s.epsilon;

  if constexpr (CoeffTraits<Coeff>::exact) {
    s.beta_n = rational_to<Real>(table.beta(n));
  } else {
    s.beta_n = Real(table.beta(n));
  }
  s.lead = times_i(differentiate(to_float<Real>(table.G(n))));

  // rest = i ( h^_n' + f sum_{total=n}^{2n} eps^{total-n} sum_j W_j g^_j g^_{total-j} ),
  // W = (j-1)! (l-1)! / (n-1)!
  std::vector<Real> fact(static_cast<std::size_t>(2 * n) + 1);
  fact[0] = Real(1);
  for (int k = 1; k <= 2 * n; ++k) fact[k] = fact[k - 1] * Real(k);
  PoleBuilder<Cx> acc(4 * n + 2);
  Real eps_pow(1);
  for (int total = n; total <= 2 * n; ++total) {
    const int lo = std::max(1, total - n);
    const int hi = total - lo;
    if (lo <= hi) {
      std::vector<Real> w;
      for (int j = lo; j <= hi; ++j) w.push_back(fact[j - 1] * fact[total - j - 1] / fact[n - 1] * eps_pow);
      const auto part = pair_sum<Cx>(std::span<const FloatPole<Real>>(gh), total, lo, hi, w, Exec::serial);
      for (const auto& term : part.terms()) acc.at(term.index) += term.value;
    }
    eps_pow *= s.epsilon;
  }
  const auto conv = times_coupling(acc.build());
  s.rest = times_i(differentiate(to_float<Real>(table.h(n))) + conv);
  return s;
}

template <class Real>
std::complex<Real> exponent(const SuperadiabaticState<Real>& state, const Real& t) {
  return integrate_from_minus_infinity(state.exponent_integrand, t);
}

template <class Real>
Vec2<Real> evaluate_state(const SuperadiabaticState<Real>& s, const Real& t) {
  const auto [phi1, phi2] = eigenvectors(HamiltonianSpec::rescaled_model(), t);
  const std::complex<Real> pre = prefactor(s, t);
  const std::complex<Real> g = evaluate(s.g_eps, t);
  if (s.level == 1) {
    return {pre * (phi1[0] + g * phi2[0]), pre * (phi1[1] + g * phi2[1])};
  }
  return {pre * (phi2[0] + g * phi1[0]), pre * (phi2[1] + g * phi1[1])};
}

template <class Real>
Vec2<Real> residual(const SuperadiabaticState<Real>& s, const Real& t) {
  const auto [phi1, phi2] = eigenvectors(HamiltonianSpec::rescaled_model(), t);
  const std::complex<Real> pre = prefactor(s, t);
  if (s.level == 1) {
    const std::complex<Real> b = s.sigma * (evaluate(s.lead, t) + evaluate(s.rest, t));
    return {pre * b * phi2[0], pre * b * phi2[1]};
  }
  const Real mt = -t;
  const std::complex<Real> b = -s.sigma * (evaluate(s.lead, mt) + evaluate(s.rest, mt));
  return {pre * b * phi1[0], pre * b * phi1[1]};
}

template <class Real>
Vec2<Real> residual_leading(const SuperadiabaticState<Real>& s, const Real& t) {
  const auto [phi1, phi2] = eigenvectors(HamiltonianSpec::rescaled_model(), t);
  const std::complex<Real> pre = prefactor(s, t);
  if (s.level == 1) {
    const std::complex<Real> b = s.sigma * evaluate(s.lead, t);
    return {pre * b * phi2[0], pre * b * phi2[1]};
  }
  const Real mt = -t;
  const std::complex<Real> b = -s.sigma * evaluate(s.lead, mt);
  return {pre * b * phi1[0], pre * b * phi1[1]};
}

template <class Real>
ResidualNorms residual_norms(const SuperadiabaticState<Real>& s) {
  ResidualNorms r;
  const Real lead = l1_norm(s.lead);
  const Real rest = l1_norm(s.rest);
  r.leading = to_double(s.sigma * lead);
  // eps^{n+1} |G_n'| = 2 beta_n eps^{n+1} n!
  r.leading_identity = to_double(Real(2) * s.beta_n * s.sigma * Real(s.n));
  r.remainder = to_double(s.sigma * rest);
  r.ratio = to_double(rest / lead);
  return r;
}

template <class Real>
std::complex<Real> riccati_residual(const SuperadiabaticState<Real>& s, const Real& t) {
  const FloatPole<Real> g1 = s.level == 1 ? s.g_eps : reflect(s.g_eps);
  const std::complex<Real> g = evaluate(g1, t);
  const std::complex<Real> dg = evaluate(differentiate(g1), t);
  const Real f = Real(1) / (Real(2) * (Real(1) + t * t));
  const std::complex<Real> i(Real(0), Real(1));
  return -g + i * s.epsilon * (dg + f * (Real(1) + g * g));
}

std::vector<ExactPole> residual_series(const ExactTable& table, int n) {
  if (n < 1 || n > table.order()) throw CapacityError("residual_series: order outside the table");
  std::vector<ExactPole> g(static_cast<std::size_t>(n) + 1);
  mpz_class fact = 1;
  for (int j = 1; j <= n; ++j) {
    if (j > 1) fact *= j - 1;
    g[j] = scale(table.g(j), ComplexRational(Rational(fact)));
  }
  const ExactPole f = coupling<ComplexRational>();
  std::vector<ExactPole> p(static_cast<std::size_t>(2 * n) + 2);
  p[1] = times_i(f);
  for (int j = 1; j <= n; ++j) {
    p[j] = p[j] - g[j];
    p[j + 1] = p[j + 1] + times_i(differentiate(g[j]));
    for (int l = 1; l <= n; ++l) p[j + l + 1] = p[j + l + 1] + times_i(multiply(f, multiply(g[j], g[l])));
  }
  return p;
}

#define SUPERAD_STATE(R)                                                                                         \
  template SuperadiabaticState<R> make_state<R, ComplexRational>(double, int, const ExpansionTable<ComplexRational>&, \
                                                                 int);                                          \
  template SuperadiabaticState<R> make_state<R, std::complex<double>>(                                          \
      double, int, const ExpansionTable<std::complex<double>>&, int);                                           \
  template SuperadiabaticState<R> make_state<R, std::complex<Extended>>(                                        \
      double, int, const ExpansionTable<std::complex<Extended>>&, int);                                         \
  template Vec2<R> evaluate_state(const SuperadiabaticState<R>&, const R&);                                     \
  template std::complex<R> exponent(const SuperadiabaticState<R>&, const R&);                                   \
  template Vec2<R> residual(const SuperadiabaticState<R>&, const R&);                                           \
  template Vec2<R> residual_leading(const SuperadiabaticState<R>&, const R&);                                   \
  template ResidualNorms residual_norms(const SuperadiabaticState<R>&);                                         \
  template std::complex<R> riccati_residual(const SuperadiabaticState<R>&, const R&);

SUPERAD_STATE(double)
SUPERAD_STATE(Extended)

}  // namespace superad
