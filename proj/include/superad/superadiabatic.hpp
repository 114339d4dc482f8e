#pragma once

// Optimally truncated adiabatic states in rescaled units (E = delta = 1):
//   psi_1 = e^{ it/(2 eps)} e^{ int_{-inf}^t f g}  (Phi_1 + g  Phi_2),
//   psi_2 = e^{-it/(2 eps)} e^{-int_{-inf}^t f g~} (Phi_2 + g~ Phi_1),
// with g = sum_{j<=n} eps^j g_j, g~(t) = g(-t), n = floor(1/eps) - 1.

#include <vector>

#include "superad/expansion.hpp"
#include "superad/hamiltonian.hpp"

namespace superad {

/// floor(1/eps) - 1, robust to the rounding of eps = 1/k.
int optimal_order(double epsilon);

template <class Real>
struct SuperadiabaticState {
  Real epsilon;
  int n = 0;
  int level = 1;
  FloatPole<Real> g_eps;               // g (level 1) or g~ (level 2)
  FloatPole<Real> exponent_integrand;  // f g_eps

  // residual, level-1 orientation: B = sigma (lead + rest) with
  // sigma = eps^{n+1} (n-1)!, lead = i G^_n', rest carrying every other term
  Real sigma;
  Real beta_n;
  FloatPole<Real> lead;
  FloatPole<Real> rest;
};

/// `n_override` > 0 replaces the optimal order (diagnostic use only).
template <class Real, class Coeff>
SuperadiabaticState<Real> make_state(double epsilon, int level, const ExpansionTable<Coeff>& table,
                                     int n_override = 0);

template <class Real>
Vec2<Real> evaluate_state(const SuperadiabaticState<Real>& state, const Real& t);

/// Exponent int_{-inf}^t f g_eps (sign as in the level-1 formula).
template <class Real>
std::complex<Real> exponent(const SuperadiabaticState<Real>& state, const Real& t);

/// zeta_n(eps, t) = i eps psi' - H psi from the closed-form expansion.
template <class Real>
Vec2<Real> residual(const SuperadiabaticState<Real>& state, const Real& t);

/// Leading part i eps^{n+1} G_n' (prefactor) Phi only.
template <class Real>
Vec2<Real> residual_leading(const SuperadiabaticState<Real>& state, const Real& t);

struct ResidualNorms {
  double leading = 0;        // eps^{n+1} |G_n'|
  double leading_identity = 0;  // 2 beta_n eps^{n+1} n!
  double remainder = 0;      // |zeta - leading| in the pole l1 norm
  double ratio = 0;
};
template <class Real>
ResidualNorms residual_norms(const SuperadiabaticState<Real>& state);

/// Riccati diagnostic: -g + i eps (g' + f (1 + g^2)) evaluated pointwise from
/// g_eps directly (level-1 orientation). No tolerance is attached.
template <class Real>
std::complex<Real> riccati_residual(const SuperadiabaticState<Real>& state, const Real& t);

/// Exact coefficients of eps^m, m = 0..2n+1, of the Phi_2 component
/// -g + i eps (g' + f (1 + g^2)) with g = sum_{j<=n} eps^j g_j (unnormalized).
std::vector<ExactPole> residual_series(const ExactTable& table, int n);

}  // namespace superad
