#pragma once

// Butcher tableau of the s-stage Gauss-Legendre collocation method (order 2s).
// Nodes and weights come from Newton iteration on P_s in 100-digit MPFR; the
// matrix a_ij = int_0^{c_i} l_j solves a Vandermonde system at that precision
// and is then rounded to the working type.

#include <vector>

#include "superad/precision.hpp"

namespace superad {

template <class Real>
struct GaussLegendreTableau {
  int stages = 0;
  std::vector<Real> c;               // nodes in (0, 1)
  std::vector<Real> b;               // weights
  std::vector<std::vector<Real>> a;  // a[i][j]
};

/// Cached per (Real, stages); thread-safe.
template <class Real>
const GaussLegendreTableau<Real>& gauss_legendre(int stages);

}  // namespace superad
