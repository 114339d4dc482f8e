#include "superad/special.hpp"

#include <limits>

#include "superad/errors.hpp"

namespace superad {

namespace {

template <class Real>
Real series(const Real& x) {
  // erf x = 2x/sqrt(pi) e^{-x^2} sum_n (2x^2)^n / (1*3*...*(2n+1))
  using std::exp;
  using std::sqrt;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real two_x2 = Real(2) * x * x;
  Real term(1), sum(1);
  for (int n = 1; n < 10000; ++n) {
    term *= two_x2 / Real(2 * n + 1);
    sum += term;
    if (term < eps * sum * Real(0.01)) break;
  }
  return Real(2) * x / sqrt(pi<Real>()) * exp(-x * x) * sum;
}

template <class Real>
Real cf_erfc(const Real& x) {
  // erfc x = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0
  using std::abs;
  using std::exp;
  using std::sqrt;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real tiny = std::numeric_limits<Real>::min() * Real(1e10);
  Real f = x;
  Real c = x;
  Real d(0);
  for (int k = 1; k < 200000; ++k) {
    const Real a = Real(k) / Real(2);
    d = x + a * d;
    if (abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (abs(c) < tiny) c = tiny;
    d = Real(1) / d;
    const Real delta = c * d;
    f *= delta;
    if (abs(delta - Real(1)) < eps * Real(0.5)) {
      return exp(-x * x) / (sqrt(pi<Real>()) * f);
    }
  }
  throw InternalConsistency("erfc continued fraction did not converge");
}

template <class Real>
bool is_inf(const Real& x) {
  return x == std::numeric_limits<Real>::infinity() || x == -std::numeric_limits<Real>::infinity();
}

}  // namespace

template <class Real>
Real erf(const Real& x) {
  if (x != x) return x;
  if (x < Real(0)) return -erf(Real(-x));
  if (is_inf(x)) return Real(1);
  if (x <= Real(2)) return series(x);
  return Real(1) - cf_erfc(x);
}

template <class Real>
Real erfc(const Real& x) {
  if (x != x) return x;
  if (is_inf(x)) return x > Real(0) ? Real(0) : Real(2);
  if (x < Real(0)) return Real(2) - erfc(Real(-x));
  if (x <= Real(2)) return Real(1) - series(x);
  return cf_erfc(x);
}

template double erf<double>(const double&);
template Extended erf<Extended>(const Extended&);
template double erfc<double>(const double&);
template Extended erfc<Extended>(const Extended&);

}  // namespace superad
