#pragma once

// Perturbation coefficients g_n of the adiabatic ansatz, stored normalized
// as g_n / (n-1)! so that float tables reach n in the hundreds without
// overflow. With this scaling
//   g^_1     = (i/4)(e_1 + e_2),
//   g^_{n+1} = i ( g^_n'/n + f sum_{j=1}^{n-1} w_{n,j} g^_j g^_{n-j} ),
//   w_{n,j}  = (j-1)! (n-j-1)! / n!.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "superad/pole_function.hpp"
#include "superad/pole_kernels.hpp"

namespace superad {

struct BuildOptions {
  int exact_cap = 60;
  int float_cap = 5000;
  Exec exec = Exec::parallel;
};

template <class Coeff>
class ExpansionTable {
 public:
  using Pole = PoleFunction<Coeff>;
  using Traits = CoeffTraits<Coeff>;
  using Scalar = typename Traits::Scalar;

  /// Runs the vector recurrence to order N and reconciles the leading-pole
  /// scalars with the independent scalar recurrence.
  static ExpansionTable build(int order, const BuildOptions& opts = {});

  int order() const { return static_cast<int>(g_.size()); }
  static constexpr bool exact() { return Traits::exact; }
  bool reflected() const { return reflected_; }

  /// Normalized coefficient g_n/(n-1)!, and its split G + h.
  const Pole& g(int n) const { return g_.at(idx(n)); }
  const Pole& G(int n) const { return G_.at(idx(n)); }
  const Pole& h(int n) const { return h_.at(idx(n)); }

  /// beta_n = gamma_n/(n-1)!, where G_n = i gamma_n (e_{2n-1} + (-1)^{n-1} e_{2n}).
  const Scalar& beta(int n) const { return beta_.at(idx(n)); }
  /// a_n = |g_n| / (n-1)!.
  const Scalar& norm_g(int n) const { return norm_g_.at(idx(n)); }
  /// |G_n| / (n-1)!.
  const Scalar& norm_G(int n) const { return norm_G_.at(idx(n)); }
  /// |h_n| / (n-1)!.
  const Scalar& norm_h(int n) const { return norm_h_.at(idx(n)); }
  /// |G_n'| / (n-1)!.
  const Scalar& norm_dG(int n) const { return norm_dG_.at(idx(n)); }

  /// Table for the reflected ansatz, g~_n(t) = g_n(-t).
  ExpansionTable reflected_view() const;

  std::span<const Pole> g_span() const { return g_; }

 private:
  std::size_t idx(int n) const {
    if (n < 1 || n > order()) throw CapacityError("expansion order " + std::to_string(n) + " not in table");
    return static_cast<std::size_t>(n - 1);
  }

  std::vector<Pole> g_, G_, h_;
  std::vector<Scalar> beta_, norm_g_, norm_G_, norm_h_, norm_dG_;
  bool reflected_ = false;
};

using ExactTable = ExpansionTable<ComplexRational>;
template <class Real>
using FloatTable = ExpansionTable<std::complex<Real>>;

/// w_{n,j} for j = 1..n-1.
std::vector<Rational> pair_weights_exact(int n);
template <class Real>
std::vector<Real> pair_weights(int n);

/// gamma_1..gamma_N from gamma_{n+1} = n gamma_n - (1/4) sum gamma_j gamma_{n-j}.
std::vector<Rational> gamma_sequence(int order);

/// beta_1..beta_N. The inner sum is truncated once a certified bound on the
/// remaining terms drops below working precision.
template <class Real>
std::vector<Real> beta_sequence(int order);
/// Same recurrence with every inner term summed.
template <class Real>
std::vector<Real> beta_sequence_reference(int order);

struct FactorialSums {
  Rational full;      // sum_{j=0}^{n}   (n-j)! j! / n!
  Rational drop_one;  // sum_{j=0}^{n-1}
  Rational inner;     // sum_{j=1}^{n-1}
};
/// Throws BoundViolation if any sum exceeds 8/3, 5/3, 2/3 respectively.
FactorialSums factorial_sum_check(int n);

struct BoundRow {
  int n = 0;
  double a = 0;          // |g_n|/(n-1)!
  double a_milestone = 0;  // 1 - 4/(3n), n >= 3
  double G = 0;          // |G_n|/(n-1)!
  double dG = 0;         // |G_n'|/n!
  double b = 0;          // |h_n|/(n-2)!, n >= 2
  double b_bound = 0;    // (10/3)(1 + log(n-2)), n >= 3
  double h_ratio = 0;    // b / log(n-2), n >= 4
  bool e12_equal = true;
};

struct BoundReport {
  std::string backend;
  int order = 0;
  std::vector<BoundRow> rows;
  double max_h_ratio = 0;
  int max_h_ratio_at = 0;
  double h3 = 0;  // |h_3| reported directly
  nlohmann::json to_json() const;
};

/// Checks |G_n| <= |g_n| <= (n-1)!, |G_n'| <= n!, a_n <= 1 - 4/(3n) for n >= 3,
/// |h_n| <= (10/3)(1 + log(n-2)) (n-2)!, h_1 = h_2 = 0 and the e_1/e_2
/// equality. Throws BoundViolation on the first failure. Comparisons are
/// exact for the exact backend.
template <class Coeff>
BoundReport verify_bounds(const ExpansionTable<Coeff>& table);

template <class Coeff>
nlohmann::json table_to_json(const ExpansionTable<Coeff>& table);

}  // namespace superad
