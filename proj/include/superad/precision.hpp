#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/mpfr.hpp>

namespace superad {

/// 50 significant decimal digits, expression templates off so that the type
/// composes with std::complex and generic code.
using Extended = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<50>,
                                               boost::multiprecision::et_off>;

enum class Precision { double_, extended };

Precision parse_precision(std::string_view name);
std::string to_string(Precision p);

/// Reads SUPERAD_PRECISION; returns `fallback` when unset.
Precision precision_from_env(Precision fallback);

template <class Real>
inline constexpr Precision precision_of =
    std::is_same_v<Real, double> ? Precision::double_ : Precision::extended;

template <class Real>
Real pi() {
  if constexpr (std::is_same_v<Real, double>) {
    return 3.14159265358979323846264338327950288;
  } else {
    return boost::math::constants::pi<Real>();
  }
}

template <class Real>
Real machine_epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

/// Shortest text that round-trips: 17 significant digits for double, all
/// digits for extended.
std::string format_real(double x);
std::string format_real(const Extended& x);

template <class Real>
double to_double(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x;
  } else {
    return x.template convert_to<double>();
  }
}

template <class Real>
std::complex<double> to_double(const std::complex<Real>& z) {
  return {to_double(z.real()), to_double(z.imag())};
}

}  // namespace superad
