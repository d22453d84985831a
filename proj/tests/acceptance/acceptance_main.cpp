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

// Runs acceptance criteria 1-9 and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fockbell/bell_chsh.hpp"
#include "fockbell/device_oracle.hpp"
#include "fockbell/photon_statistics.hpp"
#include "fockbell/sampler.hpp"
#include "fockbell/witness.hpp"

namespace {

using namespace fockbell;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Verdict criterion1() {
  double worst = 0.0;
  for (SourceKind kind : {SourceKind::thermal, SourceKind::pseudothermal}) {
    for (double mean : {0.2, 1.0, 5.0}) {
      const auto d = make_distribution(kind, mean, 1e-12);
      const auto e = build_output_ensemble(d, d);
      for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
          const double a = std::numbers::pi * i / 9.0, b = std::numbers::pi * j / 9.0;
          worst = std::max(worst, std::abs(correlation_enumerated(e, a, b) -
                                           correlation_analytic(d.vacuum_overlap(), d.vacuum_overlap(), a, b)));
        }
      }
    }
  }
  return {worst < 1e-9, fmt("max |C_enum - C_analytic| = %.3e", worst)};
}

Verdict criterion2() {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double p = i / 20.0, r = j / 20.0;
      const double expected = 2 * std::numbers::sqrt2 * (1 - p) * (1 - r) / (1 - p * r);
      worst = std::max(worst, std::abs(bell_value_analytic(p, r).bell_value - expected));
    }
  }
  const double at_zero = bell_value_analytic(0, 0).bell_value;
  const auto search = search_bell_angles([](double a, double b) { return correlation_analytic(0, 0, a, b); });
  const bool ok = worst <= 1e-12 && std::abs(at_zero - kTsirelson) <= 1e-12 && search.bell_value <= kTsirelson + 1e-9;
  return {ok, fmt("grid max delta = %.3e", worst) + fmt(", search max = %.12f", search.bell_value)};
}

Verdict criterion3() {
  const double sqrt2 = std::numbers::sqrt2;
  auto p = bisect([](double x) { return bell_max_analytic(x, x) - 2.0; }, 0.0, 0.99);
  auto b = bisect([](double x) { return thermal_bell_max(x, x) - 2.0; }, 1e-6, 10.0);
  auto t = symmetric_crossing(SourceKind::thermal);
  auto ps = symmetric_crossing(SourceKind::pseudothermal);
  if (!p || !b || !t || !ps) return {false, "bisection failed to bracket"};
  const double dp = std::abs(p->root - (sqrt2 - 1) / (sqrt2 + 1));
  const double db = std::abs(b->root - std::log((sqrt2 + 1) / 2));
  const double dt = std::abs(*t - 2 * (sqrt2 + 1));
  const double dps = std::abs(*ps - std::log((sqrt2 + 1) / (sqrt2 - 1)));
  const bool ok = dp < 1e-9 && db < 1e-9 && dt < 1e-8 && dps < 1e-8 && std::abs(*ps - 1.76) < 0.01;
  return {ok, fmt("p0* = %.10f", p->root) + fmt(", beta* = %.10f", b->root) + fmt(", <n>*_th = %.9f", *t) +
                  fmt(", <n>*_ps = %.9f", *ps)};
}

Verdict criterion4() {
  const auto s = SourceParameters::from_temperature(2.5e15, 3000.0);
  const double p0 = 1.0 / (1.0 + s.mean_n);
  const double t_vis = temperature_from_beta(2.5e15, thresholds::thermal_beta());
  const double t_ir = temperature_from_beta(5e13, thresholds::thermal_beta());
  auto within = [](double x, double target) { return std::abs(x / target - 1.0) <= 0.03; };
  const bool ok = within(s.mean_n, 1.77e-3) && within(p0, 0.9982) && within(t_vis, 101000.0) && within(t_ir, 2021.0) &&
                  thermal_bell_max(s.beta, s.beta) < 2.0;
  return {ok, fmt("<n>(3000 K) = %.4e", s.mean_n) + fmt(", p0 = %.5f", p0) + fmt(", T_min(visible) = %.0f K", t_vis) +
                  fmt(", T_min(IR) = %.1f K", t_ir)};
}

Verdict criterion5() {
  const int cutoff = 3;
  const auto chain = device_chain(cutoff);
  const double defect = chain.total().unitarity_defect();
  double worst_w = 0.0, worst_f = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    for (int m = 0; m <= cutoff; ++m) {
      const auto run = run_device_oracle(chain, n, m);
      const double delta = (n == 0 && m == 0) ? 1.0 : 0.0;
      worst_w = std::max({worst_w, std::abs(run.plus.probability - (1 + delta) / 2),
                          std::abs(run.minus.probability - (1 - delta) / 2)});
      if (n == 0 && m == 0) continue;
      const double f = run.minus.post_state
                           ? fidelity(*run.minus.post_state, BranchState::singlet(n, m).to_state(output_space(cutoff)))
                           : 0.0;
      worst_f = std::max(worst_f, 1.0 - f);
    }
  }
  const bool ok = worst_w <= 1e-12 && worst_f <= 1e-10 && defect <= 1e-10;
  return {ok, fmt("max |w - expected| = %.3e", worst_w) + fmt(", max infidelity = %.3e", worst_f) +
                  fmt(", unitarity defect = %.3e", defect)};
}

Verdict criterion6() {
  double worst = 0.0;
  bool negative = true, bounded = true;
  for (SourceKind kind : {SourceKind::thermal, SourceKind::pseudothermal}) {
    const auto d = make_distribution(kind, 1.0, 1e-12);
    const auto e = build_output_ensemble(d, d);
    WitnessWorkspace ws(e, 3);
    for (int m = 1; m <= 3; ++m) {
      for (int n = 1; n <= 3; ++n) {
        if (e.weight(m, n) == 0.0) continue;
        const double analytic = -e.normalization() * d[static_cast<std::size_t>(m)] * d[static_cast<std::size_t>(n)] / 2;
        const double numeric = ws.numeric_value(m, n);
        worst = std::max(worst, std::abs(analytic - numeric));
        negative = negative && numeric < 0.0;
        bounded = bounded && ws.min_pt_eigenvalue() <= numeric + 1e-12;
      }
    }
  }
  return {worst <= 1e-10 && negative && bounded,
          fmt("max |analytic - dense| = %.3e", worst) + (negative ? ", all negative" : ", NOT all negative") +
              (bounded ? ", bounds min eigenvalue" : ", bound violated")};
}

Verdict criterion7() {
  MultiModeSource mixed({thermal_distribution(0.5), pseudothermal_distribution(1.0), thermal_distribution(2.0)});
  const double product = (1 / 1.5) * std::exp(-1.0) * (1 / 3.0);
  const double dprod = std::abs(mixed.vacuum_overlap() - product);
  auto one = thermal_distribution(1.0);
  auto nu = minimal_mode_count(one.vacuum_overlap(), one.vacuum_overlap());
  bool increasing = true;
  double prev = 0.0;
  for (std::size_t k = 1; k <= 30; ++k) {
    auto s = MultiModeSource::identical(one, k);
    const double b = multimode_bell_max(s, s);
    increasing = increasing && b > prev;
    prev = b;
  }
  const bool ok = dprod <= 1e-12 && nu && *nu == 3 && increasing;
  return {ok, fmt("product delta = %.3e", dprod) + ", minimal nu = " + (nu ? std::to_string(*nu) : "none") +
                  (increasing ? ", strictly increasing" : ", NOT increasing")};
}

Verdict criterion8() {
  struct Scenario {
    const char* name;
    PhotonNumberDistribution d;
  };
  std::vector<Scenario> scenarios{{"p0=r0=0", PhotonNumberDistribution::custom({0.0, 1.0})},
                                  {"thermal <n>=5", thermal_distribution(5.0, 1e-12)},
                                  {"pseudothermal <n>=2", pseudothermal_distribution(2.0, 1e-12)}};
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 20260101;
  for (const auto& s : scenarios) {
    const auto e = build_output_ensemble(s.d, s.d);
    SampleConfig cfg;
    cfg.seed = seed++;
    cfg.shots_per_setting = 1000000;
    const auto r = estimate_bell(e, cfg);
    const auto again = estimate_bell(e, cfg);
    const double exact = bell_max_analytic(e.p0(), e.r0());
    const double z = r.standard_error > 0 ? std::abs(r.bell_estimate - exact) / r.standard_error
                                          : (r.bell_estimate == exact ? 0.0 : INFINITY);
    const bool reproducible = again.bell_estimate == r.bell_estimate && again.standard_error == r.standard_error;
    ok = ok && z < 5.0 && reproducible;
    detail += std::string(detail.empty() ? "" : "; ") + s.name + fmt(": %.5f", r.bell_estimate) +
              fmt(" vs %.5f", exact) + fmt(" (%.2f sigma)", z) + (reproducible ? "" : " NOT reproducible");
  }
  return {ok, detail};
}

Verdict criterion9() {
  const double p0 = 0.25;
  std::vector<PhotonNumberDistribution> same_vacuum{
      thermal_distribution(3.0, 1e-13), PhotonNumberDistribution::custom({0.25, 0.75}),
      PhotonNumberDistribution::custom({0.25, 0.05, 0.3, 0.1, 0.3})};
  double worst = 0.0;
  for (const auto& d : same_vacuum) {
    const auto e = build_output_ensemble(d, same_vacuum[0]);
    const double expected = (1 - p0) * (1 - p0) / (1 - p0 * p0);
    for (int i = 0; i < 24; ++i) {
      for (int j = 0; j < 24; ++j) {
        const double a = std::numbers::pi * i / 24.0, b = std::numbers::pi * j / 24.0;
        const double c2 = std::cos(2 * (a - b));
        if (c2 <= 0.1) continue;
        worst = std::max(worst, std::abs(-correlation_enumerated(e, a, b) / c2 - expected));
      }
    }
  }
  return {worst <= 1e-9, fmt("max prefactor spread = %.3e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"oracle equivalence", criterion1},     {"maximal violation", criterion2},
      {"threshold identities", criterion3},   {"physical examples", criterion4},
      {"device oracle", criterion5},          {"partial-transpose witness", criterion6},
      {"multi-mode", criterion7},             {"Monte Carlo calibration", criterion8},
      {"prefactor separation", criterion9}};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = Clock::now();
    Verdict o{false, ""};
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("criterion %zu %s: %s [%s] (%.2f s)\n", k + 1, o.passed ? "PASS" : "FAIL", criteria[k].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
