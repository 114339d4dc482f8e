#include "superad/expansion.hpp"

#include <cmath>

#include "superad/pole_algebra.hpp"

namespace superad {

namespace {

mpz_class factorial(int n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

template <class Scalar>
double scalar_to_double(const Scalar& s) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return s.get_d();
  } else {
    return to_double(s);
  }
}

template <class Scalar>
std::string scalar_to_string(const Scalar& s) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return s.get_str();
  } else {
    return format_real(s);
  }
}

template <class Coeff>
std::vector<typename CoeffTraits<Coeff>::Scalar> weights_for(int n) {
  if constexpr (CoeffTraits<Coeff>::exact) {
    return pair_weights_exact(n);
  } else {
    return pair_weights<typename Coeff::value_type>(n);
  }
}

template <class Coeff>
typename CoeffTraits<Coeff>::Scalar beta_of(const PoleFunction<Coeff>& G, int n) {
  return G.coefficient(2 * n - 1).imag();
}

}  // namespace

std::vector<Rational> pair_weights_exact(int n) {
  std::vector<Rational> w;
  if (n < 2) return w;
  const mpz_class nf = factorial(n);
  for (int j = 1; j <= n - 1; ++j) {
    Rational r(factorial(j - 1) * factorial(n - j - 1), nf);
    r.canonicalize();
    w.push_back(r);
  }
  return w;
}

template <class Real>
std::vector<Real> pair_weights(int n) {
  std::vector<Real> w;
  if (n < 2) return w;
  w.resize(static_cast<std::size_t>(n - 1));
  // w_{j+1} = w_j j/(n-j-1); first half only, mirrored so the sum stays
  // exactly symmetric
  Real cur = Real(1) / (Real(n) * Real(n - 1));
  for (int j = 1; 2 * j <= n; ++j) {
    w[j - 1] = cur;
    w[n - j - 1] = cur;
    cur = cur * Real(j) / Real(n - j - 1);
  }
  return w;
}

std::vector<Rational> gamma_sequence(int order) {
  if (order < 1) throw InvalidInput("order must be >= 1");
  std::vector<Rational> gamma{Rational(1, 4)};
  for (int n = 1; n < order; ++n) {
    Rational s = 0;
    for (int j = 1; j <= n - 1; ++j) s += gamma[j - 1] * gamma[n - j - 1];
    Rational next = Rational(n) * gamma[n - 1] - s / 4;
    gamma.push_back(next);
  }
  return gamma;
}

template <class Real>
std::vector<Real> beta_sequence(int order) {
  if (order < 1) throw InvalidInput("order must be >= 1");
  std::vector<Real> beta{Real(0.25)};
  if (order >= 2) beta.push_back(Real(0.25));
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real sixteenth = Real(1) / Real(16);  // beta_j beta_{n-j} <= 1/16
  for (int n = 2; n < order; ++n) {
    const int pairs = (n - 1) / 2;
    const bool middle = n % 2 == 0;
    Real w = Real(1) / (Real(n) * Real(n - 1));
    Real sum(0);
    bool truncated = false;
    for (int j = 1; j <= pairs; ++j) {
      sum += Real(2) * w * beta[j - 1] * beta[n - j - 1];
      w = w * Real(j) / Real(n - j - 1);  // w_{j+1}; decreasing up to the middle
      const Real tail = Real(2 * (pairs - j) + (middle ? 1 : 0)) * w * sixteenth;
      if (tail <= Real(0.1) * eps * beta[n - 1]) {
        truncated = true;
        break;
      }
    }
    if (!truncated && middle) sum += w * beta[n / 2 - 1] * beta[n / 2 - 1];
    beta.push_back(beta[n - 1] - sum / Real(4));
  }
  return beta;
}

template <class Real>
std::vector<Real> beta_sequence_reference(int order) {
  if (order < 1) throw InvalidInput("order must be >= 1");
  std::vector<Real> beta{Real(0.25)};
  for (int n = 1; n < order; ++n) {
    const auto w = pair_weights<Real>(n);
    Real sum(0);
    for (int j = 1; j <= n - 1; ++j) sum += w[j - 1] * beta[j - 1] * beta[n - j - 1];
    beta.push_back(beta[n - 1] - sum / Real(4));
  }
  return beta;
}

FactorialSums factorial_sum_check(int n) {
  if (n < 1) throw InvalidInput("factorial_sum_check needs n >= 1");
  const mpz_class nf = factorial(n);
  FactorialSums s;
  for (int j = 0; j <= n; ++j) {
    Rational term(factorial(n - j) * factorial(j), nf);
    term.canonicalize();
    s.full += term;
    if (j <= n - 1) s.drop_one += term;
    if (j >= 1 && j <= n - 1) s.inner += term;
  }
  if (s.full > Rational(8, 3)) throw BoundViolation(n, "factorial sum <= 8/3", s.full.get_str());
  if (s.drop_one > Rational(5, 3)) throw BoundViolation(n, "factorial sum <= 5/3", s.drop_one.get_str());
  if (s.inner > Rational(2, 3)) throw BoundViolation(n, "factorial sum <= 2/3", s.inner.get_str());
  return s;
}

template <class Coeff>
ExpansionTable<Coeff> ExpansionTable<Coeff>::build(int order, const BuildOptions& opts) {
  if (order < 1) throw InvalidInput("expansion order must be >= 1");
  if (Traits::exact && order > opts.exact_cap) {
    throw CapacityError("exact backend capped at order " + std::to_string(opts.exact_cap) + ", requested " +
                        std::to_string(order));
  }
  if (!Traits::exact && order > opts.float_cap) {
    throw CapacityError("float backend capped at order " + std::to_string(opts.float_cap));
  }
  ExpansionTable t;
  t.g_.reserve(static_cast<std::size_t>(order));
  Coeff quarter_i;
  if constexpr (Traits::exact) {
    quarter_i = ComplexRational(0, Rational(1, 4));
  } else {
    quarter_i = Coeff(0, 0.25);
  }
  t.g_.push_back(Pole::from_terms({{1, quarter_i}, {2, quarter_i}}));
  for (int n = 1; n < order; ++n) {
    Pole next = differentiate(t.g_.back());
    if constexpr (Traits::exact) {
      next = scale(next, ComplexRational(Rational(1, n)));
    } else {
      next = scale(next, Coeff(Scalar(1) / Scalar(n)));
    }
    if (n >= 2) {
      const auto w = weights_for<Coeff>(n);
      const Pole s = pair_sum<Coeff>(std::span<const Pole>(t.g_), n, 1, n - 1, w, opts.exec);
      next = next + times_coupling(s);
    }
    t.g_.push_back(times_i(next));
  }

  for (int n = 1; n <= order; ++n) {
    const Pole& g = t.g_[n - 1];
    std::vector<typename Pole::Term> lead, rest;
    for (const auto& term : g.terms()) (term.index >= 2 * n - 1 ? lead : rest).push_back(term);
    Pole G = Pole::from_terms(lead);
    Pole h = Pole::from_terms(rest);
    const Coeff c_odd = G.coefficient(2 * n - 1);
    const Coeff c_even = G.coefficient(2 * n);
    if (g.max_index() > 2 * n) throw InternalConsistency("g_" + std::to_string(n) + " exceeds index 2n");
    if constexpr (Traits::exact) {
      const ComplexRational sign = (n % 2 == 1) ? c_odd : -c_odd;
      if (sgn(c_odd.real()) != 0 || !(c_even == sign)) {
        throw InternalConsistency("leading pole part of g_" + std::to_string(n) + " lost its structure");
      }
    }
    t.beta_.push_back(beta_of(G, n));
    t.norm_g_.push_back(l1_norm(g));
    t.norm_G_.push_back(l1_norm(G));
    t.norm_h_.push_back(l1_norm(h));
    t.norm_dG_.push_back(l1_norm(differentiate(G)));
    t.G_.push_back(std::move(G));
    t.h_.push_back(std::move(h));
  }

  // reconcile with the scalar recurrence
  if constexpr (Traits::exact) {
    const auto gamma = gamma_sequence(order);
    for (int n = 1; n <= order; ++n) {
      const Rational expected = gamma[n - 1] / Rational(factorial(n - 1));
      if (t.beta_[n - 1] != expected) {
        throw InternalConsistency("gamma_" + std::to_string(n) + " from the coefficient table (" +
                                  Rational(t.beta_[n - 1] * factorial(n - 1)).get_str() +
                                  ") disagrees with the scalar recurrence (" + gamma[n - 1].get_str() + ")");
      }
    }
  } else {
    using Real = Scalar;
    const auto ref = beta_sequence_reference<Real>(order);
    const Real tol = Real(1e4) * std::numeric_limits<Real>::epsilon() * Real(order);
    for (int n = 1; n <= order; ++n) {
      using std::abs;
      if (abs(t.beta_[n - 1] - ref[n - 1]) > tol * ref[n - 1]) {
        throw InternalConsistency("beta_" + std::to_string(n) + " from the coefficient table disagrees with the scalar recurrence");
      }
    }
  }
  return t;
}

template <class Coeff>
ExpansionTable<Coeff> ExpansionTable<Coeff>::reflected_view() const {
  ExpansionTable r = *this;
  for (auto& p : r.g_) p = reflect(p);
  for (auto& p : r.G_) p = reflect(p);
  for (auto& p : r.h_) p = reflect(p);
  r.reflected_ = !reflected_;
  return r;
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json rows_js = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_js.push_back({{"n", r.n},
                       {"a_n", r.a},
                       {"a_milestone", r.a_milestone},
                       {"G_over_fact", r.G},
                       {"dG_over_n_fact", r.dG},
                       {"b_n", r.b},
                       {"b_bound", r.b_bound},
                       {"h_ratio", r.h_ratio},
                       {"e1_e2_equal", r.e12_equal}});
  }
  return {{"backend", backend},
          {"order", order},
          {"max_h_ratio", max_h_ratio},
          {"max_h_ratio_at", max_h_ratio_at},
          {"h3_norm_over_1fact", h3},
          {"rows", rows_js}};
}

template <class Coeff>
BoundReport verify_bounds(const ExpansionTable<Coeff>& table) {
  using Scalar = typename CoeffTraits<Coeff>::Scalar;
  BoundReport rep;
  rep.backend = CoeffTraits<Coeff>::exact ? "exact" : (std::is_same_v<Coeff, std::complex<double>> ? "double" : "extended");
  rep.order = table.order();
  for (int n = 1; n <= table.order(); ++n) {
    BoundRow row;
    row.n = n;
    const Scalar& a = table.norm_g(n);
    const Scalar& gn = table.norm_G(n);
    const Scalar& dg = table.norm_dG(n);
    row.a = scalar_to_double(a);
    row.G = scalar_to_double(gn);
    row.dG = scalar_to_double(dg) / n;
    if (gn > a) throw BoundViolation(n, "|G_n| <= |g_n|", std::to_string(row.G) + " > " + std::to_string(row.a));
    if (a > Scalar(1)) throw BoundViolation(n, "|g_n| <= (n-1)!", "a_n = " + scalar_to_string(a));
    if (dg > Scalar(n)) throw BoundViolation(n, "|G_n'| <= n!", "ratio " + std::to_string(row.dG));
    if (n >= 3) {
      const Scalar milestone = Scalar(1) - Scalar(4) / Scalar(3 * n);
      row.a_milestone = scalar_to_double(milestone);
      if (a > milestone) {
        throw BoundViolation(n, "a_n <= 1 - 4/(3n)", scalar_to_string(a) + " > " + scalar_to_string(milestone));
      }
    }
    const auto& g = table.g(n);
    const auto& h = table.h(n);
    row.e12_equal = g.coefficient(1) == g.coefficient(2) && h.coefficient(1) == h.coefficient(2);
    if (!row.e12_equal) throw BoundViolation(n, "e_1/e_2 coefficients equal", "g_n or h_n differs");
    if (n <= 2 && !h.is_zero()) throw BoundViolation(n, "h_1 = h_2 = 0", "nonzero remainder");
    if (n >= 2) {
      row.b = scalar_to_double(table.norm_h(n)) * (n - 1);
    }
    if (n == 3) rep.h3 = scalar_to_double(table.norm_h(3)) * 2;
    if (n >= 3) {
      row.b_bound = 10.0 / 3.0 * (1 + std::log(n - 2.0));
      if (row.b > row.b_bound * (1 + 1e-12)) {
        throw BoundViolation(n, "|h_n| <= (10/3)(1 + log(n-2)) (n-2)!", std::to_string(row.b));
      }
    }
    if (n >= 4) {
      row.h_ratio = row.b / std::log(n - 2.0);
      if (row.h_ratio > rep.max_h_ratio) {
        rep.max_h_ratio = row.h_ratio;
        rep.max_h_ratio_at = n;
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

template <class Coeff>
nlohmann::json table_to_json(const ExpansionTable<Coeff>& table) {
  nlohmann::json entries = nlohmann::json::array();
  mpz_class fact = 1;
  for (int n = 1; n <= table.order(); ++n) {
    if (n > 1) fact *= (n - 1);
    nlohmann::json e{{"n", n},
                     {"beta", scalar_to_string(table.beta(n))},
                     {"a_n", scalar_to_string(table.norm_g(n))},
                     {"g", to_json(table.g(n))},
                     {"G", to_json(table.G(n))},
                     {"h", to_json(table.h(n))}};
    if constexpr (CoeffTraits<Coeff>::exact) e["gamma"] = Rational(table.beta(n) * fact).get_str();
    entries.push_back(std::move(e));
  }
  return {{"backend", CoeffTraits<Coeff>::exact ? "exact" : "float"},
          {"order", table.order()},
          {"reflected", table.reflected()},
          {"normalization", "listed coefficients are g_n/(n-1)!"},
          {"entries", entries}};
}

template std::vector<double> pair_weights<double>(int);
template std::vector<Extended> pair_weights<Extended>(int);
template std::vector<double> beta_sequence<double>(int);
template std::vector<Extended> beta_sequence<Extended>(int);
template std::vector<double> beta_sequence_reference<double>(int);
template std::vector<Extended> beta_sequence_reference<Extended>(int);

#define SUPERAD_TABLE(C)                                              \
  template class ExpansionTable<C>;                                   \
  template BoundReport verify_bounds(const ExpansionTable<C>&);       \
  template nlohmann::json table_to_json(const ExpansionTable<C>&);

SUPERAD_TABLE(ComplexRational)
SUPERAD_TABLE(std::complex<double>)
SUPERAD_TABLE(std::complex<Extended>)

}  // namespace superad
