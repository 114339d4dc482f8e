#pragma once

#include <complex>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

#include "superad/precision.hpp"

namespace superad {

using Rational = mpq_class;

/// Gaussian rational re + i*im with exact GMP arithmetic.
class ComplexRational {
 public:
  ComplexRational() = default;
  ComplexRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  ComplexRational(long re) : re_(re), im_(0) {}

  static ComplexRational i() { return {0, 1}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_imaginary() const { return sgn(re_) == 0; }

  ComplexRational conj() const { return {re_, -im_}; }
  /// Multiplication by the imaginary unit.
  ComplexRational times_i() const { return {-im_, re_}; }
  /// |z|^2, exact.
  Rational norm_squared() const { return re_ * re_ + im_ * im_; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o);
  ComplexRational& operator*=(const Rational& s) {
    re_ *= s;
    im_ *= s;
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& o);

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator*(ComplexRational a, const Rational& s) { return a *= s; }
  friend ComplexRational operator*(const Rational& s, ComplexRational a) { return a *= s; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  template <class Real>
  std::complex<Real> to_complex() const;

  std::string to_string() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const ComplexRational& z);

/// Upper bound on |z| that is exact when z is real or purely imaginary and
/// otherwise within a relative 2^-64 of the true modulus.
Rational modulus_upper_bound(const ComplexRational& z);

template <class Real>
Real rational_to(const Rational& q);
template <>
double rational_to<double>(const Rational& q);
template <>
Extended rational_to<Extended>(const Rational& q);

template <class Real>
std::complex<Real> ComplexRational::to_complex() const {
  return {rational_to<Real>(re_), rational_to<Real>(im_)};
}

}  // namespace superad
