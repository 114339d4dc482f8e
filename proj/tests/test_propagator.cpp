#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "superad/expansion.hpp"
#include "superad/gauss_legendre.hpp"
#include "superad/propagator.hpp"
#include "superad/superadiabatic.hpp"

using namespace superad;
using Cx = std::complex<double>;

namespace {

// exp(-i theta H) for real symmetric traceless H = [[a, b], [b, -a]]
Vec2<double> expm_apply(const Sym2<double>& h, double theta, const Vec2<double>& v) {
  const double r = std::sqrt(h.a * h.a + h.b * h.b);
  const double c = std::cos(theta * r), s = r > 0 ? std::sin(theta * r) / r : theta;
  const Vec2<double> hv = superad::apply(h, v);
  return {c * v[0] - Cx(0, s) * hv[0], c * v[1] - Cx(0, s) * hv[1]};
}

double vdiff(const Vec2<double>& a, const Vec2<double>& b) {
  return std::sqrt(std::norm(a[0] - b[0]) + std::norm(a[1] - b[1]));
}

}  // namespace

// ------------------------------------------------------------ tableau

TEST(GaussLegendre, QuadratureExactToDegree2sMinus1) {
  for (int s : {2, 6, 10}) {
    const auto& tab = gauss_legendre<double>(s);
    for (int k = 1; k <= 2 * s; ++k) {
      double q = 0;
      for (int j = 0; j < s; ++j) q += tab.b[j] * std::pow(tab.c[j], k - 1);
      EXPECT_NEAR(q, 1.0 / k, 2e-15) << "s=" << s << " k=" << k;
    }
  }
}

TEST(GaussLegendre, CollocationConditions) {
  const auto& tab = gauss_legendre<Extended>(10);
  for (int i = 0; i < 10; ++i) {
    for (int k = 1; k <= 10; ++k) {
      Extended q = 0;
      for (int j = 0; j < 10; ++j) q += tab.a[i][j] * pow(tab.c[j], k - 1);
      EXPECT_LT(to_double(abs(q - pow(tab.c[i], k) / k)), 1e-45);
    }
  }
}

TEST(GaussLegendre, SymmetricNodes) {
  const auto& tab = gauss_legendre<double>(6);
  for (int j = 0; j < 6; ++j) {
    EXPECT_NEAR(tab.c[j] + tab.c[5 - j], 1.0, 1e-16);
    EXPECT_NEAR(tab.b[j], tab.b[5 - j], 1e-16);
  }
  // two-point rule closed form
  const auto& two = gauss_legendre<double>(2);
  EXPECT_NEAR(two.c[0], 0.5 - std::sqrt(3.0) / 6, 1e-16);
  EXPECT_NEAR(two.a[0][1], 0.25 - std::sqrt(3.0) / 6, 1e-16);
}

// ------------------------------------------------------------ hamiltonian

TEST(Hamiltonian, DiagonalAtZeroAndEigenvalues) {
  const HamiltonianSpec spec{2.0, 0.5};
  const auto h0 = hamiltonian(spec, 0.0);
  EXPECT_DOUBLE_EQ(h0.a, 1.0);
  EXPECT_DOUBLE_EQ(h0.b, 0.0);
  EXPECT_DOUBLE_EQ(h0.c, -1.0);
  const auto h1 = hamiltonian(spec, 1.0);
  const double lam = std::sqrt(h1.a * h1.a + h1.b * h1.b);  // traceless
  EXPECT_NEAR(lam, 1.0, 1e-15);
  const auto far = hamiltonian(HamiltonianSpec{}, 1e12);
  EXPECT_NEAR(far.a, 0.0, 1e-12);
  EXPECT_NEAR(far.b, 0.5, 1e-15);
}

TEST(Hamiltonian, EigenvectorsOrthonormalAndExact) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-50, 50);
  const HamiltonianSpec spec{1.7, 0.3};
  for (int i = 0; i < 100; ++i) {
    const double t = dist(rng);
    const auto [p1, p2] = eigenvectors(spec, t);
    EXPECT_NEAR(p1[0] * p1[0] + p1[1] * p1[1], 1.0, 1e-14);
    EXPECT_NEAR(p2[0] * p2[0] + p2[1] * p2[1], 1.0, 1e-14);
    EXPECT_NEAR(p1[0] * p2[0] + p1[1] * p2[1], 0.0, 1e-14);
    const auto h = hamiltonian(spec, t);
    const double half = spec.E / 2;
    EXPECT_LE(std::hypot(h.a * p1[0] + h.b * p1[1] + half * p1[0], h.b * p1[0] + h.c * p1[1] + half * p1[1]), 1e-13);
    EXPECT_LE(std::hypot(h.a * p2[0] + h.b * p2[1] - half * p2[0], h.b * p2[0] + h.c * p2[1] - half * p2[1]), 1e-13);
  }
}

TEST(Hamiltonian, CouplingMatchesDerivative) {
  for (const HamiltonianSpec spec : {HamiltonianSpec{}, HamiltonianSpec{2.0, 0.5}}) {
    for (double t : {0.0, 0.3, -1.2, 4.0}) {
      const double d = 1e-5;
      const auto [a, unused1] = eigenvectors(spec, t + d);
      const auto [b, unused2] = eigenvectors(spec, t - d);
      const auto [unused3, p2] = eigenvectors(spec, t);
      const double fd = (p2[0] * (a[0] - b[0]) + p2[1] * (a[1] - b[1])) / (2 * d);
      EXPECT_NEAR(fd, coupling_value(spec, t), 1e-9);
    }
  }
  EXPECT_DOUBLE_EQ(coupling_value(HamiltonianSpec{}, 0.0), 0.5);
}

// ------------------------------------------------------------ integrator

TEST(Evolve, FrozenHamiltonianGivesPhases) {
  const HamiltonianSpec spec{1.3, 1.0};
  const double eps = 0.2;
  const Sym2<double> h0 = hamiltonian(spec, 0.0);
  const Generator<double> H = [&](const double&) { return h0; };
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(-3 + 0.05 * i);
  const auto [p1, p2] = eigenvectors(spec, 0.0);
  IntegratorOptions io;
  const auto y1 = evolve(H, eps, grid, Vec2<double>{p1[0], p1[1]}, io);
  const auto y2 = evolve(H, eps, grid, Vec2<double>{p2[0], p2[1]}, io);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double dt = grid[k] - grid[0];
    const Cx ph1 = std::exp(Cx(0, spec.E * dt / (2 * eps)));
    const Cx ph2 = std::exp(Cx(0, -spec.E * dt / (2 * eps)));
    EXPECT_LT(vdiff(y1[k], {ph1 * p1[0], ph1 * p1[1]}), 1e-11);
    EXPECT_LT(vdiff(y2[k], {ph2 * p2[0], ph2 * p2[1]}), 1e-11);
  }
}

TEST(Evolve, ConvergenceOrderOfSingleStep) {
  const HamiltonianSpec spec{};
  const Generator<double> H = [&](const double& t) { return hamiltonian(spec, t); };
  const Vec2<Extended> y0e{std::complex<Extended>(1), std::complex<Extended>(0)};
  const Generator<Extended> He = [&](const Extended& t) { return hamiltonian(spec, t); };
  // reference: many fine extended steps
  auto reference = [&](double h) {
    Vec2<Extended> y = y0e;
    const int m = 64;
    for (int i = 0; i < m; ++i) y = collocation_step(He, Extended(0.5), Extended(h) * i / m, y, Extended(h) / m, 10);
    return y;
  };
  double prev = 0;
  for (double h : {0.4, 0.2}) {
    const auto y = collocation_step(H, 0.5, 0.0, Vec2<double>{1.0, 0.0}, h, 3);
    const auto r = reference(h);
    const double e = std::hypot(std::abs(y[0] - to_double(r[0])), std::abs(y[1] - to_double(r[1])));
    if (prev > 0) {
      // local error of the 3-stage method scales like h^7
      EXPECT_GT(prev / e, std::pow(2.0, 6.5));
    }
    prev = e;
  }
}

TEST(Evolve, MatchesTimeSlicedExponential) {
  const HamiltonianSpec spec{};
  const double eps = 5, t0 = -3, t1 = 3;
  PropagationConfig cfg;
  cfg.epsilon = eps;
  cfg.t0 = t0;
  cfg.t1 = t1;
  cfg.initial_vector = std::array<Cx, 2>{Cx(1), Cx(0)};
  cfg.uniform_points = 11;
  cfg.refined_points = 0;
  const auto rec = propagate<double>(spec, cfg);
  EXPECT_TRUE(rec.b2.empty());  // eps' > 1/2: no superadiabatic basis

  const int slices = 10000;
  const double dt = (t1 - t0) / slices;
  Vec2<double> y{Cx(1), Cx(0)};
  std::size_t next = 1;
  for (int i = 0; i < slices; ++i) {
    y = expm_apply(hamiltonian(spec, t0 + (i + 0.5) * dt), dt / eps, y);
    const double t = t0 + (i + 1) * dt;
    if (next < rec.times.size() && std::abs(t - rec.times[next]) < 1e-9) {
      EXPECT_LT(vdiff(y, rec.psi[next]), 1e-8) << "t=" << t;
      ++next;
    }
  }
  EXPECT_EQ(next, rec.times.size());
}

TEST(Evolve, NanGeneratorCollapsesStep) {
  const Generator<double> H = [](const double&) {
    const double q = std::numeric_limits<double>::quiet_NaN();
    return Sym2<double>{q, q, q};
  };
  EXPECT_THROW(evolve(H, 0.1, std::vector<double>{0.0, 1.0}, Vec2<double>{1.0, 0.0}, IntegratorOptions{}),
               StiffnessError);
}

TEST(Evolve, NormGuardTrips) {
  const HamiltonianSpec spec{};
  const Generator<double> H = [&](const double& t) { return hamiltonian(spec, t); };
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(-10 + 0.05 * i);
  IntegratorOptions io;
  io.atol = 1e-40;  // below roundoff: the guard must fire
  io.rtol = 1e-12;
  try {
    evolve(H, 0.1, grid, Vec2<double>{1.0, 0.0}, io);
    FAIL() << "expected AccuracyFailure";
  } catch (const AccuracyFailure& e) {
    EXPECT_TRUE(e.is_assertion());
    EXPECT_GT(e.achieved(), 0);
  }
}

TEST(Evolve, RejectsBadGrid) {
  const Generator<double> H = [](const double& t) { return hamiltonian(HamiltonianSpec{}, t); };
  EXPECT_THROW(evolve(H, 0.1, std::vector<double>{0.0, 1.0, 0.5}, Vec2<double>{1.0, 0.0}, IntegratorOptions{}),
               InvalidInput);
  EXPECT_THROW(evolve(H, 0.1, std::vector<double>{0.0}, Vec2<double>{1.0, 0.0}, IntegratorOptions{}), InvalidInput);
}

// ------------------------------------------------------------ config

TEST(Config, DefaultsAndGrid) {
  PropagationConfig cfg;
  cfg.epsilon = 0.125;
  const auto r = resolve(HamiltonianSpec{}, cfg);
  EXPECT_EQ(r.precision, Precision::double_);
  EXPECT_EQ(r.order, 7);
  EXPECT_DOUBLE_EQ(r.rtol, 1e-12);
  EXPECT_DOUBLE_EQ(r.atol, 1e-14);
  const double T = 10 / std::sqrt(0.125);
  EXPECT_DOUBLE_EQ(r.t0, -T);
  EXPECT_DOUBLE_EQ(r.t1, T);
  EXPECT_DOUBLE_EQ(r.s_grid.front(), -T);
  EXPECT_DOUBLE_EQ(r.s_grid.back(), T);
  for (std::size_t k = 1; k < r.s_grid.size(); ++k) ASSERT_LT(r.s_grid[k - 1], r.s_grid[k]);
  // 2001 uniform + 501 refined, minus coincidences
  EXPECT_GT(r.s_grid.size(), 2400u);
  EXPECT_LE(r.s_grid.size(), 2502u);
  int inside = 0;
  for (double s : r.s_grid) inside += std::abs(s) <= 2.0 ? 1 : 0;
  EXPECT_GE(inside, 501);

  PropagationConfig wide = cfg;
  wide.epsilon = 0.25;
  EXPECT_DOUBLE_EQ(resolve(HamiltonianSpec{}, wide).t1, 25.0);
}

TEST(Config, UnitCovariantGrid) {
  PropagationConfig a;
  a.epsilon = 0.125;
  PropagationConfig b = a;
  const auto ra = resolve(HamiltonianSpec{}, a);
  const auto rb = resolve(HamiltonianSpec{2.0, 0.5}, b);
  EXPECT_EQ(rb.epsilon_rescaled, 0.125);
  ASSERT_EQ(ra.s_grid.size(), rb.s_grid.size());
  for (std::size_t k = 0; k < ra.s_grid.size(); ++k) ASSERT_EQ(ra.s_grid[k], rb.s_grid[k]);
  EXPECT_DOUBLE_EQ(rb.t1, 0.5 * ra.t1);
}

// direct integration in the caller's units against the rescaled run, with
// parameters that do not scale exactly in binary
TEST(Evolve, OriginalUnitsMatchRescaled) {
  const HamiltonianSpec phys{3.0, 0.7};
  PropagationConfig cfg;
  cfg.epsilon = 0.4;
  cfg.uniform_points = 401;
  cfg.refined_points = 101;
  const auto rec = propagate<double>(phys, cfg);
  const ResolvedConfig r = resolve(phys, cfg);
  const auto table = FloatTable<double>::build(std::max(r.order, 2));
  const auto s1 = make_state<double>(r.epsilon_rescaled, 1, table);
  const auto s2 = make_state<double>(r.epsilon_rescaled, 2, table);
  std::vector<double> tgrid;
  for (double s : r.s_grid) tgrid.push_back(phys.delta * s);
  const Generator<double> H = [&](const double& t) { return hamiltonian(phys, t); };
  IntegratorOptions io;
  io.rtol = r.rtol;
  io.atol = r.atol;
  io.time_unit = phys.delta;
  const auto psi = evolve(H, cfg.epsilon, tgrid, evaluate_state(s1, r.s_grid.front()), io);
  for (std::size_t k = 0; k < tgrid.size(); ++k) {
    const double b2 = std::abs(inner(evaluate_state(s2, r.s_grid[k]), psi[k]));
    ASSERT_NEAR(b2, std::abs(rec.b2[k]), 1e-10) << k;
  }
}

TEST(Config, Rejections) {
  const HamiltonianSpec spec{};
  PropagationConfig cfg;
  cfg.epsilon = 0.125;
  cfg.atol = 1e-6;  // e^{-8} ~ 3.4e-4 needs atol <= 3.4e-7
  try {
    resolve(spec, cfg);
    FAIL();
  } catch (const ConfigRejected& e) {
    EXPECT_NE(std::string(e.what()).find("need rtol, atol <="), std::string::npos);
    EXPECT_FALSE(e.is_assertion());
  }
  cfg.atol = 1e-17;  // below the double floor
  EXPECT_THROW(resolve(spec, cfg), ConfigRejected);

  PropagationConfig small;
  small.epsilon = 0.03;
  small.precision = Precision::double_;
  EXPECT_THROW(resolve(spec, small), ConfigRejected);
  small.precision.reset();
  const auto r = resolve(spec, small);
  EXPECT_EQ(r.precision, Precision::extended);
  EXPECT_EQ(r.stages, 10);
  EXPECT_LE(r.atol, 1e-3 * std::exp(-1 / 0.03));
  EXPECT_THROW(propagate<double>(r), ConfigRejected);

  PropagationConfig big;
  big.epsilon = 0.6;
  EXPECT_THROW(resolve(spec, big), TruncationOrderZero);
  big.initial_vector = std::array<Cx, 2>{Cx(1), Cx(0)};
  EXPECT_NO_THROW(resolve(spec, big));

  PropagationConfig win;
  win.epsilon = 0.25;
  win.t0 = 1;
  win.t1 = -1;
  EXPECT_THROW(resolve(spec, win), InvalidInput);
  win.t0.reset();
  win.t1.reset();
  win.initial_level = 3;
  EXPECT_THROW(resolve(spec, win), InvalidInput);
  EXPECT_THROW(resolve(HamiltonianSpec{-1, 1}, PropagationConfig{.epsilon = 0.25}), InvalidInput);
}

// ------------------------------------------------------------ full runs

class QuarterRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    PropagationConfig cfg;
    cfg.epsilon = 0.25;
    record_ = new TransitionRecord<double>(propagate<double>(HamiltonianSpec{}, cfg));
  }
  static void TearDownTestSuite() { delete record_; }
  static TransitionRecord<double>* record_;
};
TransitionRecord<double>* QuarterRun::record_ = nullptr;

TEST_F(QuarterRun, Unitarity) {
  const auto& rec = *record_;
  const double n0 = norm(rec.psi.front());
  double drift = 0;
  for (const auto& p : rec.psi) drift = std::max(drift, std::abs(norm(p) - n0));
  EXPECT_LE(drift, 1e-11);
  EXPECT_EQ(rec.stats.max_norm_drift, drift);
  // the superadiabatic initial state is normalized up to its tail at -T
  EXPECT_NEAR(n0, 1.0, 1e-3);
}

TEST_F(QuarterRun, UnitVectorStaysUnit) {
  PropagationConfig cfg;
  cfg.epsilon = 0.25;
  cfg.initial_vector = std::array<Cx, 2>{Cx(0.6), Cx(0, 0.8)};
  const auto rec = propagate<double>(HamiltonianSpec{}, cfg);
  for (const auto& p : rec.psi) ASSERT_NEAR(norm(p), 1.0, 1e-11);
}

TEST_F(QuarterRun, OverlapsAndPrediction) {
  const auto& rec = *record_;
  ASSERT_EQ(rec.b1.size(), rec.times.size());
  // starts in psi_1, ends with a small psi_2 component of the predicted size
  EXPECT_NEAR(std::abs(rec.b1.front()), std::norm(rec.psi.front()[0]) + std::norm(rec.psi.front()[1]), 1e-12);
  EXPECT_LT(std::abs(rec.b2.front()), 1e-6);
  const double amp = std::sqrt(2.0) * std::exp(-4.0);
  EXPECT_NEAR(rec.prediction.back(), amp, 1e-12 * amp);
  EXPECT_LT(rec.prediction.front(), 1e-30);
  EXPECT_NEAR(std::abs(rec.b2.back()) / amp, 1.0, 0.25);
  EXPECT_EQ(rec.meta["config"]["precision"], "double");
}

TEST_F(QuarterRun, TimeReversal) {
  const auto& rec = *record_;
  std::vector<double> back(rec.times.rbegin(), rec.times.rend());
  const Generator<double> H = [](const double& t) { return hamiltonian(HamiltonianSpec{}, t); };
  IntegratorOptions io;
  io.rtol = 1e-12;
  io.atol = 1e-14;
  const auto y = evolve(H, 0.25, back, rec.psi.back(), io);
  EXPECT_LT(vdiff(y.back(), rec.psi.front()), 20 * 1e-14);
}

TEST_F(QuarterRun, GaugeInvariance) {
  const auto& rec = *record_;
  PropagationConfig cfg;
  cfg.epsilon = 0.25;
  const Cx phase = std::exp(Cx(0, 0.7));
  cfg.initial_vector = std::array<Cx, 2>{phase * rec.psi.front()[0], phase * rec.psi.front()[1]};
  const auto other = propagate<double>(HamiltonianSpec{}, cfg);
  ASSERT_EQ(other.b2.size(), rec.b2.size());
  double worst = 0;
  for (std::size_t k = 0; k < rec.b2.size(); ++k) {
    worst = std::max(worst, std::abs(std::abs(other.b2[k]) - std::abs(rec.b2[k])));
    worst = std::max(worst, std::abs(std::abs(other.b1[k]) - std::abs(rec.b1[k])));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST_F(QuarterRun, CsvLayout) {
  std::ostringstream os;
  write_csv(os, *record_);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("# {", 0), 0u);
  const auto meta = nlohmann::json::parse(line.substr(2));
  EXPECT_EQ(meta["config"]["epsilon"], 0.25);
  std::getline(is, line);
  EXPECT_EQ(line, "t,re_psi1,im_psi1,re_psi2,im_psi2,abs_b1,abs_b2,prediction,abs_b2_minus_prediction");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
  }
  EXPECT_EQ(rows, record_->times.size());
}

TEST(ExtendedRun, AgreesWithDouble) {
  PropagationConfig cfg;
  cfg.epsilon = 0.25;
  cfg.uniform_points = 201;
  cfg.refined_points = 41;
  const auto d = propagate<double>(HamiltonianSpec{}, cfg);
  cfg.precision = Precision::extended;
  cfg.rtol = 1e-20;
  cfg.atol = 1e-22;
  const auto e = propagate<Extended>(HamiltonianSpec{}, cfg);
  ASSERT_EQ(d.b2.size(), e.b2.size());
  double worst = 0;
  for (std::size_t k = 0; k < d.b2.size(); ++k) {
    worst = std::max(worst, std::abs(std::abs(d.b2[k]) - to_double(abs(e.b2[k]))));
  }
  EXPECT_LT(worst, 1e-10);
  const double n0 = to_double(norm(e.psi.front()));
  for (const auto& p : e.psi) ASSERT_NEAR(to_double(norm(p)), n0, 1e-20);
}
