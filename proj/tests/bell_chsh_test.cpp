// Copyright 2026 The fockbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fockbell/bell_chsh.hpp"
#include "test_support.hpp"

namespace fockbell {
namespace {

using testing::ref;
constexpr double kPi = std::numbers::pi;

ConditionalOutputEnsemble single_singlet() {
  auto one = PhotonNumberDistribution::custom({0.0, 1.0});
  return build_output_ensemble(one, one);
}

TEST(Outcomes, SingletAtEqualAngles) {
  auto p = outcome_distribution(BranchState::singlet(1, 1), 0.0, 0.0);
  EXPECT_NEAR(p(1, -1), 0.5, 1e-15);
  EXPECT_NEAR(p(-1, 1), 0.5, 1e-15);
  EXPECT_NEAR(p(1, 1) + p(-1, -1) + p(0, 0) + p(0, 1) + p(1, 0), 0.0, 1e-15);
}

TEST(Outcomes, SingletAtPiOverEight) {
  auto p = outcome_distribution(BranchState::singlet(1, 1), 0.0, kPi / 8);
  EXPECT_NEAR(p(1, -1), ref("outcome_pi8"), 1e-15);
  EXPECT_NEAR(p(-1, 1), ref("outcome_pi8"), 1e-15);
}

TEST(Outcomes, VacuumSideNeverClicks) {
  for (double a : {0.0, 0.4, 2.2}) {
    auto p = outcome_distribution(BranchState::singlet(0, 3), a, 1.0 - a);
    EXPECT_NEAR(p.marginal_x(0), 1.0, 1e-15);
  }
}

TEST(Correlation, PureSingletsAtPiOverEight) {
  EXPECT_NEAR(correlation_enumerated(single_singlet(), kPi / 8, 0.0), -std::cos(kPi / 4), 1e-15);
}

TEST(Correlation, EqualAnglesGiveVisibility) {
  auto d = thermal_distribution(2.0, 1e-12);
  auto e = build_output_ensemble(d, d);
  const double p0 = d.vacuum_overlap();
  EXPECT_NEAR(correlation_enumerated(e, 0.3, 0.3), -(1 - p0) * (1 - p0) / (1 - p0 * p0), 1e-11);
}

TEST(Correlation, OneSidedEntriesAreUncorrelated) {
  std::vector<EnsembleEntry> entries{{0, 1, 0.25, BranchState::singlet(0, 1)},
                                     {2, 0, 0.75, BranchState::singlet(2, 0)}};
  ConditionalOutputEnsemble e(entries, 1.0, 0.0, 0.0, 0.0);
  for (double a : {0.0, 0.5, 1.1})
    for (double b : {0.0, 0.3}) EXPECT_EQ(correlation_enumerated(e, a, b), 0.0);
}

TEST(Correlation, AnalyticExamples) {
  EXPECT_DOUBLE_EQ(correlation_analytic(0, 0, 0.2, 0.2), -1.0);
  EXPECT_NEAR(correlation_analytic(0.5, 0.5, 0.0, 0.0), -1.0 / 3.0, 1e-15);
  for (double p : {0.0, 0.3, 0.9}) EXPECT_NEAR(correlation_analytic(p, 0.2, kPi / 4, 0.0), 0.0, 1e-15);
  EXPECT_THROW(correlation_analytic(1.0, 1.0, 0, 0), std::domain_error);
  EXPECT_THROW(correlation_analytic(-0.1, 0.5, 0, 0), std::domain_error);
}

TEST(Correlation, PrefactorIndependentOfHigherWeights) {
  // Same vacuum weight, different excited structure.
  auto a = PhotonNumberDistribution::custom({0.3, 0.7});
  auto b = PhotonNumberDistribution::custom({0.3, 0.1, 0.2, 0.4});
  auto c = thermal_distribution(1.0 / 0.3 - 1.0, 1e-13);
  const double expected = visibility(0.3, 0.3);
  for (const auto* d : {&a, &b, &c}) {
    auto e = build_output_ensemble(*d, *d);
    for (double ta : {0.0, 0.2, 1.3}) {
      for (double tb : {0.1, -0.4}) {
        const double cos2 = std::cos(2 * (ta - tb));
        if (std::abs(cos2) <= 0.1) continue;
        EXPECT_NEAR(-correlation_enumerated(e, ta, tb) / cos2, expected, 1e-9);
      }
    }
  }
}

TEST(BellValue, CanonicalExamples) {
  EXPECT_NEAR(bell_value_analytic(0, 0).bell_value, kTsirelson, 1e-15);
  EXPECT_NEAR(bell_value_analytic(0.5, 0.5).bell_value, ref("bell_max_half"), 1e-15);
  EXPECT_EQ(bell_value([](double, double) { return 0.0; }, canonical_angles()).bell_value, 0.0);
  EXPECT_NEAR(bell_value_enumerated(single_singlet()).bell_value, kTsirelson, 1e-14);
}

TEST(BellValue, CanonicalAnglesAttainMaximum) {
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double p = i / 20.0, r = j / 20.0;
      EXPECT_NEAR(bell_value_analytic(p, r).bell_value, bell_max_analytic(p, r), 1e-12);
    }
}

TEST(BellValue, GridSearchNeverBeatsTsirelson) {
  auto s = search_bell_angles([](double a, double b) { return correlation_analytic(0, 0, a, b); });
  EXPECT_LE(s.bell_value, kTsirelson + 1e-9);
  EXPECT_GT(s.bell_value, kTsirelson - 1e-9);
  auto e = build_output_ensemble(thermal_distribution(0.8, 1e-8), thermal_distribution(3.0, 1e-8));
  auto se = search_bell_angles([&](double a, double b) { return correlation_enumerated(e, a, b); }, 48);
  EXPECT_LE(se.bell_value, bell_max_analytic(e.p0(), e.r0()) + 1e-9);
}

TEST(BellMax, Thresholds) {
  const double p = ref("p0_star");
  EXPECT_NEAR(symmetric_vacuum_threshold(), p, 1e-15);
  EXPECT_NEAR(bell_max_analytic(p, p), 2.0, 1e-14);
  EXPECT_NEAR(thermal_bell_max_from_means(1, 1), 2 * std::numbers::sqrt2 / 3, 1e-15);
}

TEST(BellMax, ThermalBetaForms) {
  const double bs = ref("beta_star");
  EXPECT_NEAR(thermal_bell_max(bs, bs), 2.0, 1e-14);
  EXPECT_NEAR(thermal_bell_max(std::log(2.0), std::log(2.0)), 2 * std::numbers::sqrt2 / 3, 1e-15);
  EXPECT_NEAR(thermal_bell_max(10, 10), ref("bell_max_beta10"), 1e-18);
  EXPECT_LT(thermal_bell_max(10, 10), 2.0);
  for (double a : {0.05, 0.5, 2.0})
    for (double b : {0.1, 1.0})
      EXPECT_NEAR(thermal_bell_max(a, b), thermal_bell_max_from_means(beta_to_mean_n(a), beta_to_mean_n(b)), 1e-12);
  EXPECT_THROW(thermal_bell_max(0.0, 1.0), std::domain_error);
}

TEST(BellMax, Pseudothermal) {
  const double t = ref("mean_star_pseudo");
  EXPECT_NEAR(pseudothermal_bell_max(t, t), 2.0, 1e-12);
  EXPECT_NEAR(pseudothermal_bell_max(1, 1), ref("bell_max_pseudo_mean1"), 1e-14);
  EXPECT_NEAR(pseudothermal_bell_max(60, 60), kTsirelson, 1e-15);
  for (double a : {0.1, 1.0, 3.0})
    EXPECT_NEAR(pseudothermal_bell_max(a, 2.0), bell_max_analytic(std::exp(-a), std::exp(-2.0)), 1e-12);
  EXPECT_THROW(pseudothermal_bell_max(0, 0), std::domain_error);
}

TEST(Thresholds, BisectionAgreesWithClosedForms) {
  auto p = bisect([](double x) { return bell_max_analytic(x, x) - 2.0; }, 0.0, 0.99);
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->root, ref("p0_star"), 1e-9);
  auto th = symmetric_crossing(SourceKind::thermal);
  ASSERT_TRUE(th);
  EXPECT_NEAR(*th, ref("mean_star_thermal"), 1e-8);
  auto ps = symmetric_crossing(SourceKind::pseudothermal);
  ASSERT_TRUE(ps);
  EXPECT_NEAR(*ps, ref("mean_star_pseudo"), 1e-8);
  EXPECT_NEAR(thresholds::pseudothermal_mean(), ref("mean_star_pseudo_log"), 1e-14);
  EXPECT_NEAR(thresholds::thermal_beta(), ref("beta_star"), 1e-15);
}

TEST(Thresholds, BisectNoBracket) {
  EXPECT_FALSE(bisect([](double x) { return x * x + 1; }, -1, 1));
  EXPECT_FALSE(bisect([](double x) { return x; }, 1, -1));
}

TEST(Border, AsymmetricAndOrdering) {
  auto th = violation_border(SourceKind::thermal, {1e6}, 1e-3, 1e3);
  ASSERT_TRUE(th[0].mean_B);
  EXPECT_NEAR(*th[0].mean_B, ref("border_asymptote"), 1e-5);
  std::vector<double> axis{3.0, 5.0, 10.0, 50.0};
  auto t = violation_border(SourceKind::thermal, axis, 1e-3, 1e4);
  auto ps = violation_border(SourceKind::pseudothermal, axis, 1e-3, 1e4);
  for (std::size_t i = 0; i < axis.size(); ++i) {
    ASSERT_TRUE(t[i].mean_B && ps[i].mean_B) << axis[i];
    EXPECT_LT(*ps[i].mean_B, *t[i].mean_B);
  }
  auto none = violation_border(SourceKind::thermal, {0.5}, 1e-3, 1e3);
  EXPECT_FALSE(none[0].mean_B);
  EXPECT_EQ(none[0].status, "no violation in range");
}

TEST(MultiMode, ProductRuleAndMinimalCount) {
  auto one = thermal_distribution(1.0);
  EXPECT_NEAR(multimode_bell_max(MultiModeSource::identical(one, 1), MultiModeSource::identical(one, 1)),
              2 * std::numbers::sqrt2 / 3, 1e-15);
  auto three = MultiModeSource::identical(one, 3);
  EXPECT_NEAR(multimode_bell_max(three, three), ref("bell_max_three_modes"), 1e-14);
  auto nu = minimal_mode_count(0.5, 0.5);
  ASSERT_TRUE(nu);
  EXPECT_EQ(*nu, 3u);
  EXPECT_FALSE(minimal_mode_count(1.0, 1.0, 10));
  double prev = 0.0;
  auto small = thermal_distribution(0.1);
  for (std::size_t k = 1; k <= 200; ++k) {
    auto s = MultiModeSource::identical(small, k);
    double b = multimode_bell_max(s, s);
    EXPECT_GT(b, prev);
    prev = b;
  }
  EXPECT_NEAR(prev, kTsirelson, 1e-3);
}

TEST(RotationSetting, ReducesModTwoPi) {
  EXPECT_NEAR(RotationSetting(-kPi / 2).theta(), 1.5 * kPi, 1e-15);
  EXPECT_NEAR(RotationSetting(5 * kPi).theta(), kPi, 1e-14);
  EXPECT_THROW(RotationSetting(std::nan("")), std::invalid_argument);
}

}  // namespace
}  // namespace fockbell
