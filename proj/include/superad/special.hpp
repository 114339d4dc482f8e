#pragma once

#include "superad/precision.hpp"

namespace superad {

/// Error function. Positive-term series for |x| <= 2, Lentz continued
/// fraction for erfc beyond; odd; saturates to +-1 at infinity.
template <class Real>
Real erf(const Real& x);

/// Complementary error function on the same split.
template <class Real>
Real erfc(const Real& x);

}  // namespace superad
