#pragma once

#include <complex>
#include <limits>

#include <json.hpp>

#include "superad/pole_function.hpp"
#include "superad/product_table.hpp"

namespace superad {

/// Exact expansion of e_k e_m.
ExactPole basis_product(int k, int m, const ProductTable& table = ProductTable::shared());

/// The rescaled coupling f(t) = 1/(2(1+t^2)) = (e_1 + e_2)/4.
template <class Coeff>
PoleFunction<Coeff> coupling();

template <class Coeff>
PoleFunction<Coeff> operator+(const PoleFunction<Coeff>& a, const PoleFunction<Coeff>& b);
template <class Coeff>
PoleFunction<Coeff> operator-(const PoleFunction<Coeff>& a, const PoleFunction<Coeff>& b);
template <class Coeff>
PoleFunction<Coeff> operator-(const PoleFunction<Coeff>& a);
template <class Coeff>
PoleFunction<Coeff> scale(const PoleFunction<Coeff>& a, const Coeff& s);
template <class Coeff>
PoleFunction<Coeff> times_i(const PoleFunction<Coeff>& a);

/// Bilinear product through the memoized product table.
template <class Coeff>
PoleFunction<Coeff> multiply(const PoleFunction<Coeff>& a, const PoleFunction<Coeff>& b,
                             const ProductTable& table = ProductTable::shared());

template <class Coeff>
PoleFunction<Coeff> differentiate(const PoleFunction<Coeff>& a);

/// t -> -t, i.e. e_{2j-1} <-> e_{2j}.
template <class Coeff>
PoleFunction<Coeff> reflect(const PoleFunction<Coeff>& a);

/// Sum of coefficient moduli. Exact mode returns a certified upper bound
/// when a modulus is irrational.
template <class Coeff>
typename CoeffTraits<Coeff>::Scalar l1_norm(const PoleFunction<Coeff>& a);

/// a(t) for real t; t = +-inf gives 0.
template <class Real, class Coeff>
std::complex<Real> evaluate(const PoleFunction<Coeff>& a, const Real& t);

/// Closed-form integral over (-inf, t]. Requires equal e_1 and e_2
/// coefficients (exactly, or to rounding in float mode); throws
/// NonIntegrable otherwise.
template <class Real, class Coeff>
std::complex<Real> integrate_from_minus_infinity(const PoleFunction<Coeff>& a, const Real& t);

template <class Real, class Coeff>
FloatPole<Real> to_float(const PoleFunction<Coeff>& a);

template <class Coeff>
nlohmann::json to_json(const PoleFunction<Coeff>& a);
template <class Coeff>
PoleFunction<Coeff> pole_from_json(const nlohmann::json& j);

template <class Real, class Coeff>
std::complex<Real> coeff_to(const Coeff& c) {
  if constexpr (std::is_same_v<Coeff, ComplexRational>) {
    return c.template to_complex<Real>();
  } else if constexpr (std::is_same_v<Coeff, std::complex<Real>>) {
    return c;
  } else {
    return {Real(c.real()), Real(c.imag())};
  }
}

}  // namespace superad
