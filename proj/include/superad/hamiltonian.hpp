#pragma once

// H(t) = E / (2 sqrt(t^2 + delta^2)) [[delta, t], [t, -delta]].
// With alpha = atan(t/delta):
//   Phi_1 = ( sin(alpha/2), -cos(alpha/2) )   eigenvalue -E/2
//   Phi_2 = ( cos(alpha/2),  sin(alpha/2) )   eigenvalue +E/2
// so that <Phi_2, Phi_1'> = alpha'/2 = delta / (2 (t^2 + delta^2)) > 0.

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "superad/errors.hpp"
#include "superad/precision.hpp"

namespace superad {

template <class Real>
using Vec2 = std::array<std::complex<Real>, 2>;

/// Real symmetric 2x2 matrix [[a, b], [b, c]].
template <class Real>
struct Sym2 {
  Real a, b, c;
};

struct HamiltonianSpec {
  double E = 1;
  double delta = 1;

  static HamiltonianSpec rescaled_model() { return {}; }
  bool rescaled() const { return E == 1 && delta == 1; }
  void validate() const {
    if (!(E > 0) || !std::isfinite(E)) throw InvalidInput("gap E must be positive and finite");
    if (!(delta > 0) || !std::isfinite(delta)) throw InvalidInput("delta must be positive and finite");
  }
};

template <class Real>
Sym2<Real> hamiltonian(const HamiltonianSpec& spec, const Real& t) {
  using std::sqrt;
  const Real d(spec.delta);
  const Real k = Real(spec.E) / (Real(2) * sqrt(t * t + d * d));
  return {k * d, k * t, -k * d};
}

template <class Real>
std::pair<std::array<Real, 2>, std::array<Real, 2>> eigenvectors(const HamiltonianSpec& spec, const Real& t) {
  using std::atan2;
  using std::cos;
  using std::sin;
  const Real half_alpha = atan2(t, Real(spec.delta)) / Real(2);
  const Real s = sin(half_alpha), c = cos(half_alpha);
  return {{s, -c}, {c, s}};
}

/// <Phi_2, Phi_1'>.
template <class Real>
Real coupling_value(const HamiltonianSpec& spec, const Real& t) {
  const Real d(spec.delta);
  return d / (Real(2) * (t * t + d * d));
}

template <class Real>
Vec2<Real> apply(const Sym2<Real>& h, const Vec2<Real>& v) {
  return {h.a * v[0] + h.b * v[1], h.b * v[0] + h.c * v[1]};
}

template <class Real>
std::complex<Real> inner(const Vec2<Real>& u, const Vec2<Real>& v) {
  return std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1];
}

template <class Real>
Real norm(const Vec2<Real>& v) {
  using std::sqrt;
  return sqrt(std::norm(v[0]) + std::norm(v[1]));
}

}  // namespace superad
