#pragma once

// Finite linear combinations of the pole basis
//   e_{2j-1}(t) = (1 + i t)^{-j},   e_{2j}(t) = (1 - i t)^{-j},   j >= 1.
// Odd indices carry the pole at t = i, even indices the pole at t = -i.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

#include "superad/complex_rational.hpp"
#include "superad/errors.hpp"
#include "superad/precision.hpp"

namespace superad {

template <class Coeff>
struct CoeffTraits;

template <>
struct CoeffTraits<ComplexRational> {
  using Scalar = Rational;
  static constexpr bool exact = true;
  static bool is_zero(const ComplexRational& c) { return c.is_zero(); }
  static ComplexRational times_i(const ComplexRational& c) { return c.times_i(); }
  static ComplexRational conj(const ComplexRational& c) { return c.conj(); }
  static Scalar modulus(const ComplexRational& c) { return modulus_upper_bound(c); }
  static ComplexRational from_scalar(const Scalar& s) { return {s, 0}; }
  static Scalar half() { return Rational(1, 2); }
  /// Smallest relative coefficient kept by the canonical form; exact mode
  /// keeps everything that is not identically zero.
  static Scalar prune_threshold() { return 0; }
};

template <class Real>
struct CoeffTraits<std::complex<Real>> {
  using Scalar = Real;
  static constexpr bool exact = false;
  static bool is_zero(const std::complex<Real>& c) { return c.real() == 0 && c.imag() == 0; }
  static std::complex<Real> times_i(const std::complex<Real>& c) { return {-c.imag(), c.real()}; }
  static std::complex<Real> conj(const std::complex<Real>& c) { return std::conj(c); }
  static Scalar modulus(const std::complex<Real>& c) { return std::abs(c); }
  static std::complex<Real> from_scalar(const Scalar& s) { return {s, Real(0)}; }
  static Scalar half() { return Real(0.5); }
  static Scalar prune_threshold() {
    if constexpr (std::is_same_v<Real, double>) {
      return 1e-30;
    } else {
      // ten digits below working precision
      return pow(Real(10), -(std::numeric_limits<Real>::digits10 + 10));
    }
  }
};

template <class Coeff>
class PoleFunction {
 public:
  using Traits = CoeffTraits<Coeff>;
  using Scalar = typename Traits::Scalar;

  struct Term {
    int index;
    Coeff value;
  };

  PoleFunction() = default;

  /// Canonical form of an arbitrary term list: repeated indices are summed,
  /// zero (or, in float mode, negligible) coefficients are dropped.
  static PoleFunction from_terms(const std::vector<Term>& terms);

  static PoleFunction basis(int index, const Coeff& value = Coeff(1)) {
    if (index < 1) throw InvalidInput("pole basis index must be >= 1");
    return from_terms({{index, value}});
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// Highest index with a nonzero coefficient, 0 for the zero function.
  int max_index() const { return terms_.empty() ? 0 : terms_.back().index; }

  Coeff coefficient(int index) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                               [](const Term& t, int i) { return t.index < i; });
    if (it != terms_.end() && it->index == index) return it->value;
    return Coeff(0);
  }

  friend bool operator==(const PoleFunction& a, const PoleFunction& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].index != b.terms_[i].index || !(a.terms_[i].value == b.terms_[i].value)) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Term> terms_;  // sorted by index, no zero coefficients
};

/// Dense accumulator indexed by basis index; `build` yields the canonical
/// PoleFunction.
template <class Coeff>
class PoleBuilder {
 public:
  using Traits = CoeffTraits<Coeff>;
  using Scalar = typename Traits::Scalar;

  explicit PoleBuilder(int max_index = 0) : dense_(static_cast<std::size_t>(max_index) + 1, Coeff(0)) {}

  void add(int index, const Coeff& c) {
    if (index < 1) throw InvalidInput("pole basis index must be >= 1");
    if (static_cast<std::size_t>(index) >= dense_.size()) {
      dense_.resize(static_cast<std::size_t>(index) + 1, Coeff(0));
    }
    dense_[static_cast<std::size_t>(index)] += c;
  }

  /// Slot for in-place accumulation; grows the buffer as needed.
  Coeff& at(int index) {
    if (static_cast<std::size_t>(index) >= dense_.size()) {
      dense_.resize(static_cast<std::size_t>(index) + 1, Coeff(0));
    }
    return dense_[static_cast<std::size_t>(index)];
  }

  PoleFunction<Coeff> build() const;

 private:
  std::vector<Coeff> dense_;
};

template <class Coeff>
PoleFunction<Coeff> PoleBuilder<Coeff>::build() const {
  std::vector<typename PoleFunction<Coeff>::Term> terms;
  Scalar total(0);
  if constexpr (!Traits::exact) {
    for (const auto& c : dense_) total += Traits::modulus(c);
  }
  const Scalar cutoff = Traits::prune_threshold() * total;
  for (std::size_t j = 1; j < dense_.size(); ++j) {
    const Coeff& c = dense_[j];
    if (Traits::is_zero(c)) continue;
    if constexpr (!Traits::exact) {
      if (Traits::modulus(c) < cutoff) continue;
    }
    terms.push_back({static_cast<int>(j), c});
  }
  PoleFunction<Coeff> out;
  // from_terms would re-sort; the dense scan is already canonical
  out = PoleFunction<Coeff>::from_terms(terms);
  return out;
}

template <class Coeff>
PoleFunction<Coeff> PoleFunction<Coeff>::from_terms(const std::vector<Term>& terms) {
  std::vector<Term> sorted = terms;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Term& a, const Term& b) { return a.index < b.index; });
  std::vector<Term> merged;
  merged.reserve(sorted.size());
  for (const Term& t : sorted) {
    if (t.index < 1) throw InvalidInput("pole basis index must be >= 1");
    if (!merged.empty() && merged.back().index == t.index) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  Scalar total(0);
  if constexpr (!Traits::exact) {
    for (const Term& t : merged) total += Traits::modulus(t.value);
  }
  const Scalar cutoff = Traits::prune_threshold() * total;
  PoleFunction out;
  for (Term& t : merged) {
    if (Traits::is_zero(t.value)) continue;
    if constexpr (!Traits::exact) {
      if (Traits::modulus(t.value) < cutoff) continue;
    }
    out.terms_.push_back(std::move(t));
  }
  return out;
}

using ExactPole = PoleFunction<ComplexRational>;
template <class Real>
using FloatPole = PoleFunction<std::complex<Real>>;

}  // namespace superad
