#include "superad/complex_rational.hpp"

#include <ostream>

namespace superad {

ComplexRational& ComplexRational::operator*=(const ComplexRational& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ComplexRational& ComplexRational::operator/=(const ComplexRational& o) {
  const Rational den = o.norm_squared();
  if (sgn(den) == 0) throw std::domain_error("ComplexRational: division by zero");
  Rational re = (re_ * o.re_ + im_ * o.im_) / den;
  Rational im = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string ComplexRational::to_string() const {
  if (is_real()) return re_.get_str();
  if (is_imaginary()) return im_.get_str() + "i";
  std::string s = re_.get_str();
  s += sgn(im_) < 0 ? "-" : "+";
  s += Rational(abs(im_)).get_str();
  return s + "i";
}

std::ostream& operator<<(std::ostream& os, const ComplexRational& z) { return os << z.to_string(); }

Rational modulus_upper_bound(const ComplexRational& z) {
  if (z.is_imaginary()) return abs(z.imag());
  if (z.is_real()) return abs(z.real());
  // sqrt(p/q) = sqrt(p*q)/q; scale by 4^k until the integer root carries
  // at least 70 bits, then round the root up.
  const Rational r2 = z.norm_squared();
  const mpz_class p = r2.get_num();
  const mpz_class q = r2.get_den();
  mpz_class radicand = p * q;
  const long bits = static_cast<long>(mpz_sizeinbase(radicand.get_mpz_t(), 2));
  const long k = std::max(0L, 71 - bits / 2);
  radicand <<= static_cast<mp_bitcnt_t>(2 * k);
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  if (root * root != radicand) root += 1;
  mpz_class den = q;
  den <<= static_cast<mp_bitcnt_t>(k);
  Rational out(root, den);
  out.canonicalize();
  return out;
}

template <>
double rational_to<double>(const Rational& q) {
  return q.get_d();
}

template <>
Extended rational_to<Extended>(const Rational& q) {
  Extended x;
  mpfr_set_q(x.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return x;
}

}  // namespace superad
