#include "superad/pole_kernels.hpp"

#include <algorithm>

#include "superad/pole_algebra.hpp"

namespace superad {

namespace {

template <class Coeff>
struct Split {
  std::vector<Coeff> u;  // u[k]: coefficient of x^k, k >= 1
  std::vector<Coeff> v;  // v[m]: coefficient of y^m
  int du = 0, dv = 0;
};

template <class Coeff>
Split<Coeff> split(const PoleFunction<Coeff>& a) {
  Split<Coeff> s;
  const int top = (a.max_index() + 1) / 2;
  s.u.assign(static_cast<std::size_t>(top) + 1, Coeff(0));
  s.v.assign(static_cast<std::size_t>(top) + 1, Coeff(0));
  for (const auto& t : a.terms()) {
    const int j = (t.index + 1) / 2;
    if (t.index % 2 == 1) {
      s.u[j] = t.value;
      s.du = std::max(s.du, j);
    } else {
      s.v[j] = t.value;
      s.dv = std::max(s.dv, j);
    }
  }
  return s;
}

/// Collapses the mixed array P (rows 0..K, cols 0..M, row-major, stride M+1)
/// into the pure accumulators.
template <class Coeff>
void sweep(std::vector<Coeff>& p, int big_k, int big_m, std::vector<Coeff>& xx, std::vector<Coeff>& yy) {
  using Traits = CoeffTraits<Coeff>;
  const auto half = Traits::half();
  const std::size_t stride = static_cast<std::size_t>(big_m) + 1;
  auto at = [&](int k, int m) -> Coeff& { return p[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(m)]; };
  for (int d = big_k + big_m; d >= 2; --d) {
    const int k_lo = std::max(1, d - big_m);
    const int k_hi = std::min(big_k, d - 1);
    for (int k = k_lo; k <= k_hi; ++k) {
      const int m = d - k;
      Coeff inflow(0);
      bool any = false;
      if (m + 1 <= big_m && !Traits::is_zero(at(k, m + 1))) {
        inflow += at(k, m + 1);
        any = true;
      }
      if (k + 1 <= big_k && !Traits::is_zero(at(k + 1, m))) {
        inflow += at(k + 1, m);
        any = true;
      }
      if (any) at(k, m) += inflow * half;
    }
  }
  for (int k = 1; k <= big_k; ++k) {
    if (!Traits::is_zero(at(k, 1))) xx[k] += at(k, 1) * half;
  }
  for (int m = 1; m <= big_m; ++m) {
    if (!Traits::is_zero(at(1, m))) yy[m] += at(1, m) * half;
  }
}

template <class Coeff>
PoleFunction<Coeff> assemble(const std::vector<Coeff>& xx, const std::vector<Coeff>& yy) {
  const int top = static_cast<int>(std::max(xx.size(), yy.size()));
  PoleBuilder<Coeff> b(2 * top);
  for (std::size_t k = 1; k < xx.size(); ++k) {
    if (!CoeffTraits<Coeff>::is_zero(xx[k])) b.at(2 * static_cast<int>(k) - 1) += xx[k];
  }
  for (std::size_t m = 1; m < yy.size(); ++m) {
    if (!CoeffTraits<Coeff>::is_zero(yy[m])) b.at(2 * static_cast<int>(m)) += yy[m];
  }
  return b.build();
}

template <class Coeff>
void check_range(std::size_t n, int total, int lo, int hi, std::size_t nweights) {
  if (lo < 1 || hi < lo || lo + hi != total || static_cast<std::size_t>(hi) > n) {
    throw InvalidInput("pair_sum: need 1 <= lo <= hi <= size and lo + hi == total");
  }
  if (nweights != 0 && nweights != static_cast<std::size_t>(hi - lo + 1)) {
    throw InvalidInput("pair_sum: weight count does not match the index range");
  }
}

}  // namespace

template <class Coeff>
PoleFunction<Coeff> pair_sum(std::span<const PoleFunction<Coeff>> g, int total, int lo, int hi,
                             std::span<const typename CoeffTraits<Coeff>::Scalar> weights, Exec exec) {
  using Traits = CoeffTraits<Coeff>;
  using Scalar = typename Traits::Scalar;
  check_range<Coeff>(g.size(), total, lo, hi, weights.size());
  const bool par = exec == Exec::parallel;

  auto weight = [&](int j) -> Scalar { return weights.empty() ? Scalar(1) : weights[static_cast<std::size_t>(j - lo)]; };

  std::vector<int> active;
  if constexpr (Traits::exact) {
    for (int j = lo; j <= hi; ++j) {
      if (sgn(weight(j)) != 0 && !g[j - 1].is_zero() && !g[total - j - 1].is_zero()) active.push_back(j);
    }
  } else {
    std::vector<Scalar> size(static_cast<std::size_t>(hi - lo + 1));
    Scalar biggest(0);
    for (int j = lo; j <= hi; ++j) {
      using std::abs;
      size[j - lo] = abs(weight(j)) * l1_norm(g[j - 1]) * l1_norm(g[total - j - 1]);
      biggest = std::max(biggest, size[j - lo]);
    }
    const Scalar cut = Traits::prune_threshold() * biggest;
    for (int j = lo; j <= hi; ++j) {
      if (size[j - lo] > cut && size[j - lo] != Scalar(0)) active.push_back(j);
    }
  }
  if (active.empty()) return {};

  std::vector<Split<Coeff>> parts(static_cast<std::size_t>(hi + 1));
  for (int j = lo; j <= hi; ++j) parts[j] = split(g[j - 1]);

  int big_k = 0, big_m = 0;
  for (int j : active) {
    if (parts[j].du > 0 && parts[total - j].dv > 0) {
      big_k = std::max(big_k, parts[j].du);
      big_m = std::max(big_m, parts[total - j].dv);
    }
  }
  int top_x = 0, top_y = 0;
  for (int j : active) {
    top_x = std::max(top_x, parts[j].du + parts[total - j].du);
    top_y = std::max(top_y, parts[j].dv + parts[total - j].dv);
  }
  const int top = std::max({top_x, top_y, big_k, big_m}) + 1;
  std::vector<Coeff> xx(static_cast<std::size_t>(top) + 1, Coeff(0));
  std::vector<Coeff> yy(static_cast<std::size_t>(top) + 1, Coeff(0));

  // mixed part: P[k][m] = 2 sum_j w_j U_j[k] V_{total-j}[m]
  const std::size_t stride = static_cast<std::size_t>(big_m) + 1;
  std::vector<Coeff> p((static_cast<std::size_t>(big_k) + 1) * stride, Coeff(0));
  const Scalar two(2);
#pragma omp parallel for schedule(dynamic) if (par)
  for (int k = 1; k <= big_k; ++k) {
    for (int j : active) {
      const auto& a = parts[j];
      const auto& b = parts[total - j];
      if (k > a.du || Traits::is_zero(a.u[k])) continue;
      const Coeff c = a.u[k] * (two * weight(j));
      for (int m = 1; m <= b.dv; ++m) {
        if (!Traits::is_zero(b.v[m])) p[static_cast<std::size_t>(k) * stride + m] += c * b.v[m];
      }
    }
  }

  // pure parts, one output degree per iteration
#pragma omp parallel for schedule(dynamic) if (par)
  for (int q = 2; q <= top; ++q) {
    Coeff sx(0), sy(0);
    for (int j : active) {
      const auto& a = parts[j];
      const auto& b = parts[total - j];
      const Scalar w = weight(j);
      Coeff accx(0), accy(0);
      bool hitx = false, hity = false;
      for (int k = std::max(1, q - b.du); k <= std::min(a.du, q - 1); ++k) {
        if (Traits::is_zero(a.u[k]) || Traits::is_zero(b.u[q - k])) continue;
        accx += a.u[k] * b.u[q - k];
        hitx = true;
      }
      for (int k = std::max(1, q - b.dv); k <= std::min(a.dv, q - 1); ++k) {
        if (Traits::is_zero(a.v[k]) || Traits::is_zero(b.v[q - k])) continue;
        accy += a.v[k] * b.v[q - k];
        hity = true;
      }
      if (hitx) sx += accx * w;
      if (hity) sy += accy * w;
    }
    xx[q] = sx;
    yy[q] = sy;
  }

  if (big_k > 0 && big_m > 0) sweep(p, big_k, big_m, xx, yy);
  return assemble(xx, yy);
}

template <class Coeff>
PoleFunction<Coeff> pair_sum_reference(std::span<const PoleFunction<Coeff>> g, int total, int lo, int hi,
                                       std::span<const typename CoeffTraits<Coeff>::Scalar> weights) {
  using Traits = CoeffTraits<Coeff>;
  check_range<Coeff>(g.size(), total, lo, hi, weights.size());
  PoleFunction<Coeff> acc;
  for (int j = lo; j <= hi; ++j) {
    auto prod = multiply(g[j - 1], g[total - j - 1]);
    if (!weights.empty()) prod = scale(prod, Traits::from_scalar(weights[static_cast<std::size_t>(j - lo)]));
    acc = acc + prod;
  }
  return acc;
}

template <class Coeff>
PoleFunction<Coeff> multiply_sweep(const PoleFunction<Coeff>& a, const PoleFunction<Coeff>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  // a b = (a b + b a)/2 fits the symmetric pair form with total 3
  const std::vector<PoleFunction<Coeff>> g{a, b};
  const std::vector<typename CoeffTraits<Coeff>::Scalar> w{CoeffTraits<Coeff>::half(), CoeffTraits<Coeff>::half()};
  return pair_sum<Coeff>(std::span<const PoleFunction<Coeff>>(g), 3, 1, 2, w, Exec::serial);
}

template <class Coeff>
PoleFunction<Coeff> times_coupling(const PoleFunction<Coeff>& a) {
  return multiply_sweep(coupling<Coeff>(), a);
}

#define SUPERAD_KERNELS(C)                                                                                      \
  template PoleFunction<C> pair_sum<C>(std::span<const PoleFunction<C>>, int, int, int,                        \
                                       std::span<const CoeffTraits<C>::Scalar>, Exec);                         \
  template PoleFunction<C> pair_sum_reference<C>(std::span<const PoleFunction<C>>, int, int, int,              \
                                                 std::span<const CoeffTraits<C>::Scalar>);                     \
  template PoleFunction<C> multiply_sweep(const PoleFunction<C>&, const PoleFunction<C>&);                     \
  template PoleFunction<C> times_coupling(const PoleFunction<C>&);

SUPERAD_KERNELS(ComplexRational)
SUPERAD_KERNELS(std::complex<double>)
SUPERAD_KERNELS(std::complex<Extended>)

}  // namespace superad
