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
#include <string>

#include "fockbell/witness.hpp"
#include "test_support.hpp"

namespace fockbell {
namespace {

using testing::ref;

PhotonNumberDistribution half_half() { return PhotonNumberDistribution::custom({0.5, 0.5}); }

TEST(WitnessAnalytic, Examples) {
  auto h = half_half();
  EXPECT_NEAR(witness_value_analytic(h, h, 1, 1), -1.0 / 6.0, 1e-15);
  auto t = thermal_distribution(1.0);
  EXPECT_NEAR(witness_value_analytic(t, t, 1, 1), -1.0 / 24.0, 1e-15);
  EXPECT_NEAR(witness_value_analytic(t, t, 2, 2), -(4.0 / 3.0) * 0.125 * 0.125 / 2, 1e-15);
  EXPECT_EQ(witness_value_analytic(h, h, 2, 1), 0.0);
  EXPECT_THROW(witness_value_analytic(h, h, 0, 1), std::invalid_argument);
  EXPECT_THROW(witness_value_analytic(h, h, 1, 0), std::invalid_argument);
}

TEST(WitnessNumeric, HalfHalfDense) {
  auto e = build_output_ensemble(half_half(), half_half());
  EXPECT_NEAR(witness_value_numeric(e, 1, 1, 1), -1.0 / 6.0, 1e-14);
  EXPECT_THROW(witness_value_numeric(e, 2, 1, 1), std::invalid_argument);
}

TEST(WitnessNumeric, MatchesIndependentDenseOracle) {
  auto t = thermal_distribution(1.0, 1e-12);
  auto e = build_output_ensemble(t, t);
  WitnessWorkspace ws(e, 3);
  const auto& expected = testing::reference().at("witness_thermal1_cutoff3");
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 3; ++n) {
      const double numeric = ws.numeric_value(m, n);
      const double oracle = expected.at(std::to_string(m) + "," + std::to_string(n)).get<double>();
      EXPECT_NEAR(numeric, oracle, 1e-12);
      EXPECT_NEAR(numeric, witness_value_analytic(e, m, n), 1e-10);
      EXPECT_LT(numeric, 0.0);
      EXPECT_LE(ws.min_pt_eigenvalue(), numeric + 1e-12);
    }
  }
  EXPECT_NEAR(ws.min_pt_eigenvalue(), ref("witness_thermal1_cutoff3_min_eig"), 1e-12);
  EXPECT_GT(ws.tail_deficit(), 0.0);
}

TEST(WitnessNumeric, SeparableProductIsPpt) {
  // Diagonal product of the inputs, device bypassed.
  FockSpace s = output_space(1);
  std::vector<double> w(s.dimension(), 0.0);
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) w[s.index({a, 0, b, 0})] = 0.25;
  auto rho = DensityOperator::diagonal(s, w);
  auto pt = partial_transpose(rho, subsystem_b_labels());
  EXPECT_GE(expectation(pt, witness_vector(1, 1, 1)), 0.0);
  EXPECT_GE(min_eigenvalue(pt), -1e-15);
}

TEST(WitnessReport, FlagsEntanglement) {
  auto e = build_output_ensemble(half_half(), half_half());
  auto r = witness_report(e, 1, 1, 1);
  EXPECT_TRUE(r.entangled);
  EXPECT_NEAR(r.analytic_value, r.numeric_value, 1e-14);
  EXPECT_TRUE(certify_entanglement(e, 1));
}

TEST(ConditionalEntropy, PureSingletIsLnTwo) {
  auto one = PhotonNumberDistribution::custom({0.0, 1.0});
  auto c = conditional_entropy(build_output_ensemble(one, one), 1);
  EXPECT_NEAR(c.value, std::numbers::ln2, 1e-12);
  EXPECT_NEAR(c.total_entropy, 0.0, 1e-12);
}

TEST(ConditionalEntropy, ThermalRegressionValues) {
  // Negative in this sign convention: S(rho) exceeds S(rho_A).
  auto small = thermal_distribution(0.2, 1e-12);
  auto c6 = conditional_entropy(build_output_ensemble(small, small), 6, 1e-3);
  EXPECT_NEAR(c6.value, ref("cond_entropy_thermal02_cutoff6"), 1e-9);

  auto one = thermal_distribution(1.0, 1e-12);
  auto c8 = conditional_entropy(build_output_ensemble(one, one), 8, 1e-2);
  EXPECT_NEAR(c8.value, ref("cond_entropy_thermal1_cutoff8"), 1e-9);
  EXPECT_LT(c8.value, 0.0);
}

TEST(ConditionalEntropy, ProductStateIsMinusEntropyOfB) {
  FockSpace a({"A1", "A2"}, {1, 1});
  FockSpace b({"B1", "B2"}, {1, 1});
  auto ra = DensityOperator::diagonal(a, std::vector<double>{0.6, 0.4, 0.0, 0.0});
  auto rb = DensityOperator::diagonal(b, std::vector<double>{0.7, 0.0, 0.3, 0.0});
  auto rho = tensor(std::vector<DensityOperator>{ra, rb});
  const double diff = von_neumann_entropy(partial_trace(rho, subsystem_a_labels())) - von_neumann_entropy(rho);
  EXPECT_NEAR(diff, -von_neumann_entropy(rb), 1e-12);
  EXPECT_LE(diff, 0.0);
}

}  // namespace
}  // namespace fockbell
