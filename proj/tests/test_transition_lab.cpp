#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "superad/transition_lab.hpp"

using namespace superad;

TEST(Predict, Values) {
  const double amp = std::sqrt(2.0) * std::exp(-5.0);
  EXPECT_NEAR(predict(0.2, 1, 1, 0), 0.5 * amp, 1e-17);
  EXPECT_NEAR(predict(0.2, 1, 1, std::numeric_limits<double>::infinity()), amp, 1e-17);
  EXPECT_NEAR(predict(0.2, 1, 1, 1e6), 9.529e-3, 5e-7);
  EXPECT_EQ(predict(0.2, 1, 1, -std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_LT(predict(0.2, 1, 1, -50), 1e-100);
  // general units: amplitude e^{-E delta/eps}, width sqrt(2 delta eps/E)
  EXPECT_NEAR(predict(0.125, 2, 0.5, 0), 0.5 * std::sqrt(2.0) * std::exp(-8.0), 1e-18);
  const double w = std::sqrt(2 * 0.5 * 0.125 / 2);
  EXPECT_NEAR(predict(0.125, 2, 0.5, w) / predict(0.125, 2, 0.5, 1e9), 0.5 * (std::erf(1.0) + 1), 1e-14);
  EXPECT_THROW(predict(0, 1, 1, 0), InvalidInput);
  EXPECT_THROW(predict(0.1, 1, -1, 0), InvalidInput);
}

TEST(Predict, Monotone) {
  double prev = 0;
  for (int i = -400; i <= 400; ++i) {
    const double v = predict(0.1, 1, 1, i * 0.01);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Predict, AmplitudeIdentity) {
  // sqrt(2) = 2 pi beta*, beta* = 1/(pi sqrt 2)
  const double beta_star = 1 / (M_PI * std::sqrt(2.0));
  for (double eps : {0.25, 0.1}) {
    EXPECT_NEAR(switching_amplitude<double>(eps, 1, 1), 2 * M_PI * beta_star * std::exp(-1 / eps),
                1e-15 * std::exp(-1 / eps));
  }
}

TEST(Helpers, InterpolateAndCrossing) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{0, 2, 2, 5};
  EXPECT_DOUBLE_EQ(interpolate(x, y, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(interpolate(x, y, 2.5), 3.5);
  EXPECT_DOUBLE_EQ(interpolate(x, y, -1), 0);
  EXPECT_DOUBLE_EQ(interpolate(x, y, 9), 5);
  EXPECT_DOUBLE_EQ(first_crossing(x, y, 1), 0.5);
  EXPECT_DOUBLE_EQ(first_crossing(x, y, 2), 1);
  EXPECT_DOUBLE_EQ(first_crossing(x, y, 3.5), 2.5);
  EXPECT_TRUE(std::isnan(first_crossing(x, y, 6)));
}

TEST(RunExperiment, RejectsOrderBelowTwo) {
  ExperimentConfig c;
  c.epsilon = 0.5;
  EXPECT_THROW(run_experiment(c), InvalidInput);
  c.epsilon = 0.4;  // n = 1
  EXPECT_THROW(run_experiment(c), InvalidInput);
  c.epsilon = 0.25;
  c.E = 0.5;  // eps' = 0.5
  EXPECT_THROW(run_experiment(c), InvalidInput);
}

class Experiments : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::vector<ExperimentConfig> cfgs(3);
    cfgs[0].epsilon = 0.25;
    cfgs[1].epsilon = 0.2;
    cfgs[2].epsilon = 0.125;
    reports_ = new std::vector<ComparisonReport>(sweep(cfgs));
  }
  static void TearDownTestSuite() { delete reports_; }
  static const ComparisonReport& at(std::size_t i) { return (*reports_)[i]; }
  static std::vector<ComparisonReport>* reports_;
};
std::vector<ComparisonReport>* Experiments::reports_ = nullptr;

TEST_F(Experiments, FinalAmplitudeAtPointTwo) {
  const auto& r = at(1);
  EXPECT_EQ(r.order, 4);
  EXPECT_NEAR(r.amplitude, std::sqrt(2.0) * std::exp(-5.0), 1e-17);
  EXPECT_LE(r.forward.amplitude_relative_error, 0.5);
}

TEST_F(Experiments, SymmetricExperimentMirrorsForward) {
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& r = at(i);
    EXPECT_NEAR(r.symmetric.final_amplitude, r.forward.final_amplitude, 1e-6 * r.amplitude);
    EXPECT_LT(r.symmetry_defect, 1e-6 * r.amplitude);
  }
}

TEST_F(Experiments, MidpointRatioApproachesHalf) {
  const auto& a = at(0);
  const auto& b = at(2);
  EXPECT_NEAR(a.forward.midpoint_ratio, 0.5, std::pow(0.25, 0.25));
  EXPECT_NEAR(b.forward.midpoint_ratio, 0.5, std::pow(0.125, 0.25));
  EXPECT_LT(std::abs(b.forward.midpoint_ratio - 0.5), std::abs(a.forward.midpoint_ratio - 0.5));
}

TEST_F(Experiments, RelativeErrorImprovesAsEpsilonShrinks) {
  EXPECT_LT(at(2).forward.sup_error_relative, at(0).forward.sup_error_relative);
  EXPECT_LT(at(2).forward.amplitude_relative_error, at(0).forward.amplitude_relative_error);
}

TEST_F(Experiments, ShapeOfSwitch) {
  const auto& r = at(2);
  EXPECT_LE(std::abs(r.forward.half_time), r.switch_scale);
  EXPECT_GE(r.forward.rise_fraction, 0.9);
  EXPECT_LE(r.forward.late_variation, std::sqrt(0.125));
  // erf quartiles: width = 2 erfinv(1/2) w ~ 0.954 w
  EXPECT_NEAR(r.forward.width / r.switch_scale, 0.9539, 0.3);
}

TEST_F(Experiments, BasisQuality) {
  const auto& r = at(2);
  const double bound = 2 * std::exp(-8.0);
  EXPECT_LE(r.basis.norm_defect_1, bound);
  EXPECT_LE(r.basis.norm_defect_2, bound);
  EXPECT_LE(r.basis.overlap, bound);
}

TEST_F(Experiments, ReportIsDeterministicAndTimingIsOptIn) {
  ExperimentConfig c;
  c.epsilon = 0.2;
  const auto again = run_experiment(c);
  EXPECT_EQ(again.to_json().dump(), at(1).to_json().dump());
  EXPECT_FALSE(again.to_json()["forward"].contains("runtime_seconds"));
  c.timing = true;
  const auto timed = run_experiment(c);
  EXPECT_TRUE(timed.to_json()["forward"].contains("runtime_seconds"));
  const auto j = again.to_json();
  for (const char* key : {"sup_error", "sup_error_relative", "final_amplitude", "amplitude_relative_error",
                          "basis_quality", "config", "resolved"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST_F(Experiments, CurveMatchesReport) {
  const auto& r = at(2);
  ASSERT_EQ(r.curve.t.size(), r.curve.measured.size());
  double sup = 0;
  for (std::size_t k = 0; k < r.curve.t.size(); ++k) {
    sup = std::max(sup, std::abs(r.curve.measured[k] - r.curve.predicted[k]));
    EXPECT_DOUBLE_EQ(r.curve.predicted[k], predict(0.125, 1, 1, r.curve.t[k]));
  }
  EXPECT_EQ(sup, r.forward.sup_error);
}

TEST(Crosscheck, ThreeWay) {
  const auto r = beta_star_crosscheck(5000, 0.25);
  EXPECT_NEAR(r.beta_N, 0.2251, 1e-3);
  EXPECT_LE(r.beta_N_error, 1e-3);
  EXPECT_LE(r.implied_relative_error, 0.25);
  EXPECT_LE(r.identity_defect, 4 * std::numeric_limits<double>::epsilon());
  EXPECT_THROW(beta_star_crosscheck(50), InvalidInput);
}

TEST(DeltaSweep, AmplitudeDecreasesWidthScales) {
  const auto r = delta_monotonicity(0.125, 1, {0.5, 1, 2});
  EXPECT_TRUE(r.amplitude_strictly_decreasing);
  EXPECT_GE(r.width_scaling, 0.5);
  EXPECT_LE(r.width_scaling, 2.0);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.amplitudes[i] / (std::sqrt(2.0) * std::exp(-r.deltas[i] / 0.125)), 1.0, 0.5);
  }
}
