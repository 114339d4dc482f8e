#include "superad/pole_algebra.hpp"

#include <string>

namespace superad {

namespace {

template <class Coeff>
Coeff table_coeff(const ProductTable::Row& row, std::size_t q) {
  if constexpr (std::is_same_v<Coeff, ComplexRational>) {
    return ComplexRational(row.exact[q]);
  } else if constexpr (std::is_same_v<Coeff, std::complex<double>>) {
    return {row.approx[q], 0.0};
  } else {
    using Real = typename Coeff::value_type;
    return {rational_to<Real>(row.exact[q]), Real(0)};
  }
}

template <class Real>
bool is_pos_inf(const Real& t) {
  return t == std::numeric_limits<Real>::infinity();
}
template <class Real>
bool is_neg_inf(const Real& t) {
  return t == -std::numeric_limits<Real>::infinity();
}

}  // namespace

ExactPole basis_product(int k, int m, const ProductTable& table) {
  const auto& row = table.row(k, m);
  std::vector<ExactPole::Term> terms;
  for (std::size_t q = 0; q < row.index.size(); ++q) terms.push_back({row.index[q], ComplexRational(row.exact[q])});
  return ExactPole::from_terms(terms);
}

template <class Coeff>
PoleFunction<Coeff> coupling() {
  Coeff quarter;
  if constexpr (CoeffTraits<Coeff>::exact) {
    quarter = ComplexRational(Rational(1, 4));
  } else {
    quarter = Coeff(0.25);
  }
  return PoleFunction<Coeff>::from_terms({{1, quarter}, {2, quarter}});
}

template <class Coeff>
PoleFunction<Coeff> operator+(const PoleFunction<Coeff>& a, const PoleFunction<Coeff>& b) {
  auto terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return PoleFunction<Coeff>::from_terms(terms);
}

template <class Coeff>
PoleFunction<Coeff> operator-(const PoleFunction<Coeff>& a) {
  auto terms = a.terms();
  for (auto& t : terms) t.value = -t.value;
  return PoleFunction<Coeff>::from_terms(terms);
}

template <class Coeff>
PoleFunction<Coeff> operator-(const PoleFunction<Coeff>& a, const PoleFunction<Coeff>& b) {
  return a + (-b);
}

template <class Coeff>
PoleFunction<Coeff> scale(const PoleFunction<Coeff>& a, const Coeff& s) {
  auto terms = a.terms();
  for (auto& t : terms) t.value *= s;
  return PoleFunction<Coeff>::from_terms(terms);
}

template <class Coeff>
PoleFunction<Coeff> times_i(const PoleFunction<Coeff>& a) {
  auto terms = a.terms();
  for (auto& t : terms) t.value = CoeffTraits<Coeff>::times_i(t.value);
  return PoleFunction<Coeff>::from_terms(terms);
}

template <class Coeff>
PoleFunction<Coeff> multiply(const PoleFunction<Coeff>& a, const PoleFunction<Coeff>& b,
                             const ProductTable& table) {
  if (a.is_zero() || b.is_zero()) return {};
  PoleBuilder<Coeff> out(a.max_index() + b.max_index() + 1);
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      const Coeff prod = ta.value * tb.value;
      const auto& row = table.row(ta.index, tb.index);
      for (std::size_t q = 0; q < row.index.size(); ++q) {
        out.at(row.index[q]) += prod * table_coeff<Coeff>(row, q);
      }
    }
  }
  return out.build();
}

template <class Coeff>
PoleFunction<Coeff> differentiate(const PoleFunction<Coeff>& a) {
  // d/dt (1 -+ it)^{-j}... odd: -i j e_{2j+1}; even: +i j e_{2j+2}
  std::vector<typename PoleFunction<Coeff>::Term> terms;
  for (const auto& t : a.terms()) {
    const int j = (t.index + 1) / 2;
    Coeff c = CoeffTraits<Coeff>::times_i(t.value);
    c *= Coeff(j);
    if (t.index % 2 == 1) c = -c;
    terms.push_back({t.index + 2, c});
  }
  return PoleFunction<Coeff>::from_terms(terms);
}

template <class Coeff>
PoleFunction<Coeff> reflect(const PoleFunction<Coeff>& a) {
  auto terms = a.terms();
  for (auto& t : terms) t.index += (t.index % 2 == 1) ? 1 : -1;
  return PoleFunction<Coeff>::from_terms(terms);
}

template <class Coeff>
typename CoeffTraits<Coeff>::Scalar l1_norm(const PoleFunction<Coeff>& a) {
  typename CoeffTraits<Coeff>::Scalar s(0);
  for (const auto& t : a.terms()) s += CoeffTraits<Coeff>::modulus(t.value);
  return s;
}

template <class Real, class Coeff>
std::complex<Real> evaluate(const PoleFunction<Coeff>& a, const Real& t) {
  using C = std::complex<Real>;
  if (a.is_zero() || is_pos_inf(t) || is_neg_inf(t)) return C(0);
  const C x = C(Real(1)) / C(Real(1), t);  // (1+it)^{-1}
  const C y = std::conj(x);
  C acc(0), xp(1), yp(1);
  int px = 0, py = 0;
  for (const auto& term : a.terms()) {
    const int j = (term.index + 1) / 2;
    if (term.index % 2 == 1) {
      while (px < j) { xp *= x; ++px; }
      acc += coeff_to<Real>(term.value) * xp;
    } else {
      while (py < j) { yp *= y; ++py; }
      acc += coeff_to<Real>(term.value) * yp;
    }
  }
  return acc;
}

template <class Real, class Coeff>
std::complex<Real> integrate_from_minus_infinity(const PoleFunction<Coeff>& a, const Real& t) {
  using C = std::complex<Real>;
  const Coeff c1 = a.coefficient(1);
  const Coeff c2 = a.coefficient(2);
  if constexpr (CoeffTraits<Coeff>::exact) {
    if (!(c1 == c2)) throw NonIntegrable("e_1 and e_2 coefficients differ: " + c1.to_string() + " vs " + c2.to_string());
  } else {
    using S = typename CoeffTraits<Coeff>::Scalar;
    const S gap = CoeffTraits<Coeff>::modulus(c1 - c2);
    const S scale_ = l1_norm(a);
    if (gap > S(64) * std::numeric_limits<S>::epsilon() * scale_) {
      throw NonIntegrable("e_1 and e_2 coefficients differ beyond rounding");
    }
  }
  if (is_neg_inf(t)) return C(0);
  const C c = (coeff_to<Real>(c1) + coeff_to<Real>(c2)) / Real(2);
  const Real pi_ = pi<Real>();
  using std::atan;
  const Real arc = is_pos_inf(t) ? Real(2) * pi_ : Real(2) * atan(t) + pi_;
  C acc = c * arc;
  if (is_pos_inf(t)) return acc;
  // (1 + it)^{-(j-1)} antiderivative pieces vanish at -inf
  const C x = C(Real(1)) / C(Real(1), t);
  const C y = std::conj(x);
  C xp(1), yp(1);
  int px = 0, py = 0;
  const C iu(Real(0), Real(1));
  for (const auto& term : a.terms()) {
    if (term.index <= 2) continue;
    const int j = (term.index + 1) / 2;
    const C v = coeff_to<Real>(term.value) / Real(j - 1);
    if (term.index % 2 == 1) {
      while (px < j - 1) { xp *= x; ++px; }
      acc += iu * v * xp;
    } else {
      while (py < j - 1) { yp *= y; ++py; }
      acc -= iu * v * yp;
    }
  }
  return acc;
}

template <class Real, class Coeff>
FloatPole<Real> to_float(const PoleFunction<Coeff>& a) {
  std::vector<typename FloatPole<Real>::Term> terms;
  for (const auto& t : a.terms()) terms.push_back({t.index, coeff_to<Real>(t.value)});
  return FloatPole<Real>::from_terms(terms);
}

template <class Coeff>
nlohmann::json to_json(const PoleFunction<Coeff>& a) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : a.terms()) {
    if constexpr (CoeffTraits<Coeff>::exact) {
      arr.push_back({{"index", t.index},
                     {"re_num", t.value.real().get_num().get_str()},
                     {"re_den", t.value.real().get_den().get_str()},
                     {"im_num", t.value.imag().get_num().get_str()},
                     {"im_den", t.value.imag().get_den().get_str()}});
    } else if constexpr (std::is_same_v<Coeff, std::complex<double>>) {
      arr.push_back({{"index", t.index}, {"re", format_real(t.value.real())}, {"im", format_real(t.value.imag())}});
    } else {
      arr.push_back({{"index", t.index}, {"re", format_real(t.value.real())}, {"im", format_real(t.value.imag())}});
    }
  }
  return arr;
}

template <class Coeff>
PoleFunction<Coeff> pole_from_json(const nlohmann::json& j) {
  std::vector<typename PoleFunction<Coeff>::Term> terms;
  for (const auto& rec : j) {
    const int index = rec.at("index").get<int>();
    if constexpr (CoeffTraits<Coeff>::exact) {
      Rational re(mpz_class(rec.at("re_num").get<std::string>()), mpz_class(rec.at("re_den").get<std::string>()));
      Rational im(mpz_class(rec.at("im_num").get<std::string>()), mpz_class(rec.at("im_den").get<std::string>()));
      terms.push_back({index, ComplexRational(re, im)});
    } else {
      using Real = typename Coeff::value_type;
      const auto parse = [](const nlohmann::json& v) {
        if (v.is_number()) return Real(v.get<double>());
        if constexpr (std::is_same_v<Real, double>) {
          return std::stod(v.get<std::string>());
        } else {
          return Real(v.get<std::string>());
        }
      };
      terms.push_back({index, Coeff(parse(rec.at("re")), parse(rec.at("im")))});
    }
  }
  return PoleFunction<Coeff>::from_terms(terms);
}

#define SUPERAD_POLE_COEFF(C)                                                               \
  template PoleFunction<C> coupling<C>();                                                  \
  template PoleFunction<C> operator+(const PoleFunction<C>&, const PoleFunction<C>&);      \
  template PoleFunction<C> operator-(const PoleFunction<C>&, const PoleFunction<C>&);      \
  template PoleFunction<C> operator-(const PoleFunction<C>&);                               \
  template PoleFunction<C> scale(const PoleFunction<C>&, const C&);                        \
  template PoleFunction<C> times_i(const PoleFunction<C>&);                                \
  template PoleFunction<C> multiply(const PoleFunction<C>&, const PoleFunction<C>&,        \
                                    const ProductTable&);                                  \
  template PoleFunction<C> differentiate(const PoleFunction<C>&);                          \
  template PoleFunction<C> reflect(const PoleFunction<C>&);                                \
  template CoeffTraits<C>::Scalar l1_norm(const PoleFunction<C>&);                         \
  template nlohmann::json to_json(const PoleFunction<C>&);                                 \
  template PoleFunction<C> pole_from_json<C>(const nlohmann::json&);                        \
  template std::complex<double> evaluate<double, C>(const PoleFunction<C>&, const double&); \
  template std::complex<Extended> evaluate<Extended, C>(const PoleFunction<C>&, const Extended&); \
  template std::complex<double> integrate_from_minus_infinity<double, C>(const PoleFunction<C>&, \
                                                                         const double&);     \
  template std::complex<Extended> integrate_from_minus_infinity<Extended, C>(                \
      const PoleFunction<C>&, const Extended&);                                            \
  template FloatPole<double> to_float<double, C>(const PoleFunction<C>&);                  \
  template FloatPole<Extended> to_float<Extended, C>(const PoleFunction<C>&);

SUPERAD_POLE_COEFF(ComplexRational)
SUPERAD_POLE_COEFF(std::complex<double>)
SUPERAD_POLE_COEFF(std::complex<Extended>)

}  // namespace superad
