#include "superad/gauss_legendre.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "superad/errors.hpp"

namespace superad {

namespace {

using Wide = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>,
                                           boost::multiprecision::et_off>;

// (P_s(x), P_s'(x)) by the three-term recurrence
std::pair<Wide, Wide> legendre(int s, const Wide& x) {
  Wide p0 = 1, p1 = x;
  for (int k = 2; k <= s; ++k) {
    Wide p2 = (Wide(2 * k - 1) * x * p1 - Wide(k - 1) * p0) / Wide(k);
    p0 = p1;
    p1 = p2;
  }
  const Wide dp = Wide(s) * (x * p1 - p0) / (x * x - 1);
  return {p1, dp};
}

// Gaussian elimination with partial pivoting; columns of rhs solved together.
std::vector<std::vector<Wide>> solve(std::vector<std::vector<Wide>> m, std::vector<std::vector<Wide>> rhs) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (abs(m[r][k]) > abs(m[piv][k])) piv = r;
    }
    std::swap(m[k], m[piv]);
    std::swap(rhs[k], rhs[piv]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const Wide l = m[r][k] / m[k][k];
      for (std::size_t c = k; c < n; ++c) m[r][c] -= l * m[k][c];
      for (std::size_t c = 0; c < rhs[r].size(); ++c) rhs[r][c] -= l * rhs[k][c];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t c = 0; c < rhs[k].size(); ++c) {
      Wide v = rhs[k][c];
      for (std::size_t j = k + 1; j < n; ++j) v -= m[k][j] * rhs[j][c];
      rhs[k][c] = v / m[k][k];
    }
  }
  return rhs;
}

template <class Real>
Real narrow(const Wide& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x.convert_to<double>();
  } else {
    return Real(x);
  }
}

template <class Real>
GaussLegendreTableau<Real> compute(int s) {
  if (s < 1 || s > 40) throw InvalidInput("Gauss-Legendre stage count must be in [1, 40]");
  const Wide pi_w = boost::math::constants::pi<Wide>();
  const Wide tol = pow(Wide(10), -95);
  std::vector<Wide> x(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    Wide r = -cos(pi_w * (Wide(i) + Wide(0.75)) / (Wide(s) + Wide(0.5)));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(s, r);
      const Wide step = p / dp;
      r -= step;
      if (abs(step) < tol) break;
    }
    x[static_cast<std::size_t>(i)] = r;
  }
  std::vector<Wide> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = (x[i] + 1) / 2;

  // V^T w = moments: sum_j w_j c_j^{k-1} = rhs_k
  std::vector<std::vector<Wide>> vt(c.size(), std::vector<Wide>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k) {
    for (std::size_t j = 0; j < c.size(); ++j) vt[k][j] = pow(c[j], static_cast<int>(k));
  }
  // columns: b, then a_{i,.} for each i
  std::vector<std::vector<Wide>> rhs(c.size(), std::vector<Wide>(c.size() + 1));
  for (std::size_t k = 0; k < c.size(); ++k) {
    rhs[k][0] = Wide(1) / Wide(k + 1);
    for (std::size_t i = 0; i < c.size(); ++i) rhs[k][i + 1] = pow(c[i], static_cast<int>(k + 1)) / Wide(k + 1);
  }
  const auto sol = solve(vt, rhs);

  GaussLegendreTableau<Real> out;
  out.stages = s;
  for (std::size_t j = 0; j < c.size(); ++j) {
    out.c.push_back(narrow<Real>(c[j]));
    out.b.push_back(narrow<Real>(sol[j][0]));
  }
  out.a.assign(c.size(), std::vector<Real>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) out.a[i][j] = narrow<Real>(sol[j][i + 1]);
  }
  return out;
}

}  // namespace

template <class Real>
const GaussLegendreTableau<Real>& gauss_legendre(int stages) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendreTableau<Real>>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[stages];
  if (!slot) slot = std::make_unique<GaussLegendreTableau<Real>>(compute<Real>(stages));
  return *slot;
}

template const GaussLegendreTableau<double>& gauss_legendre<double>(int);
template const GaussLegendreTableau<Extended>& gauss_legendre<Extended>(int);

}  // namespace superad
