#pragma once

// Predicted transition history
//   sqrt(2) e^{-E delta/eps} (erf(sqrt(E/(2 delta eps)) t) + 1) / 2.

#include <cmath>

#include "superad/errors.hpp"
#include "superad/special.hpp"

namespace superad {

inline void check_switching_params(double epsilon, double E, double delta) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive and finite");
  if (!(E > 0) || !std::isfinite(E)) throw InvalidInput("gap E must be positive and finite");
  if (!(delta > 0) || !std::isfinite(delta)) throw InvalidInput("delta must be positive and finite");
}

template <class Real>
Real switching_amplitude(double epsilon, double E, double delta) {
  using std::exp;
  using std::sqrt;
  check_switching_params(epsilon, E, delta);
  return sqrt(Real(2)) * exp(-Real(E) * Real(delta) / Real(epsilon));
}

template <class Real>
Real switching_curve(double epsilon, double E, double delta, const Real& t) {
  using std::sqrt;
  const Real amp = switching_amplitude<Real>(epsilon, E, delta);
  const Real k = sqrt(Real(E) / (Real(2) * Real(delta) * Real(epsilon)));
  // erfc keeps the left tail that erf + 1 would cancel away
  return amp * erfc(-k * t) / Real(2);
}

}  // namespace superad
