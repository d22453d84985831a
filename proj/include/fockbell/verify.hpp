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

#pragma once

/// End-to-end consistency checks: enumeration against closed forms, the
/// dense device model against the compact ensemble, and dense partial
/// transposes against the analytic witness values.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fockbell/bell_chsh.hpp"
#include "fockbell/device_oracle.hpp"
#include "fockbell/entangler.hpp"
#include "fockbell/photon_statistics.hpp"
#include "fockbell/witness.hpp"

namespace fockbell {

struct VerifyOptions {
  /// Signal-mode cutoff of the dense device model.
  int device_cutoff = 3;
  /// Cutoff of the dense output state for the witness grid.
  int witness_cutoff = 3;
  double epsilon_tail = 1e-12;
  /// Kerr phase in units of pi; anything but 1 is a negative control.
  double kerr_phase_over_pi = 1.0;
  /// Replaces every per-check tolerance when set.
  std::optional<double> tolerance_override;
};

struct CheckResult {
  std::string name;
  bool passed;
  /// Worst deviation observed (or margin, for one-sided checks).
  double measured;
  double tolerance;
};

namespace detail {

class CheckList {
 public:
  explicit CheckList(const VerifyOptions& o) : opts_(o) {}

  /// Passes when measured <= tolerance.
  void add(std::string name, double measured, double tolerance) {
    const double t = opts_.tolerance_override.value_or(tolerance);
    results_.push_back({std::move(name), measured <= t && std::isfinite(measured), measured, t});
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  VerifyOptions opts_;
  std::vector<CheckResult> results_;
};

inline double angle_grid(std::size_t i, std::size_t count) {
  return std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
}

}  // namespace detail

inline std::vector<CheckResult> run_verification(const VerifyOptions& opts = {}) {
  detail::CheckList checks(opts);

  // Enumerated correlation vs closed form over a 9x9 angle grid.
  for (SourceKind kind : {SourceKind::thermal, SourceKind::pseudothermal}) {
    for (double mean : {0.2, 1.0, 5.0}) {
      const auto d = make_distribution(kind, mean, opts.epsilon_tail);
      const auto ens = build_output_ensemble(d, d);
      double worst = 0.0;
      for (std::size_t i = 0; i < 9; ++i) {
        for (std::size_t j = 0; j < 9; ++j) {
          const double a = detail::angle_grid(i, 9), b = detail::angle_grid(j, 9);
          worst = std::max(worst, std::abs(correlation_enumerated(ens, a, b) -
                                           correlation_analytic(d.vacuum_overlap(), d.vacuum_overlap(), a, b)));
        }
      }
      checks.add("correlation_oracle/" + std::string(to_string(kind)) + "/mean=" + std::to_string(mean),
                 worst, 1e-9);
    }
  }

  // Canonical angles reach the closed-form maximum over a (p0, r0) grid.
  {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double p0 = i / 20.0, r0 = j / 20.0;
        worst = std::max(worst, std::abs(bell_value_analytic(p0, r0).bell_value - bell_max_analytic(p0, r0)));
      }
    }
    checks.add("canonical_angles_reach_bell_max", worst, 1e-12);
    const auto search = search_bell_angles([](double a, double b) { return correlation_analytic(0.0, 0.0, a, b); });
    checks.add("tsirelson_grid_search_excess", std::max(0.0, search.bell_value - kTsirelson), 1e-9);
  }

  // Threshold identities by bisection.
  {
    auto p_cross = bisect([](double p) { return bell_max_analytic(p, p) - kLocalBound; }, 0.0, 0.99);
    checks.add("vacuum_threshold", p_cross ? std::abs(p_cross->root - symmetric_vacuum_threshold()) : INFINITY,
               1e-9);
    auto beta_cross = bisect([](double b) { return thermal_bell_max(b, b) - kLocalBound; }, 1e-6, 10.0);
    checks.add("thermal_beta_threshold",
               beta_cross ? std::abs(beta_cross->root - thresholds::thermal_beta()) : INFINITY, 1e-9);
    auto t = symmetric_crossing(SourceKind::thermal);
    checks.add("thermal_mean_threshold", t ? std::abs(*t - thresholds::thermal_mean()) : INFINITY, 1e-8);
    auto ps = symmetric_crossing(SourceKind::pseudothermal);
    checks.add("pseudothermal_mean_threshold", ps ? std::abs(*ps - thresholds::pseudothermal_mean()) : INFINITY,
               1e-8);
  }

  // Dense device model against the heralded singlets.
  {
    const double phase = opts.kerr_phase_over_pi * std::numbers::pi;
    const int c = opts.device_cutoff;
    const DeviceChain chain = device_chain(c, phase);
    checks.add("device_chain_unitarity", chain.total().unitarity_defect(), 1e-10);
    double worst_w = 0.0, worst_fid = 0.0;
    for (int n = 0; n <= c; ++n) {
      for (int m = 0; m <= c; ++m) {
        const auto run = run_device_oracle(chain, n, m);
        const double delta = (n == 0 && m == 0) ? 1.0 : 0.0;
        worst_w = std::max(worst_w, std::abs(run.plus.probability - (1.0 + delta) / 2.0));
        worst_w = std::max(worst_w, std::abs(run.minus.probability - (1.0 - delta) / 2.0));
        if (n == 0 && m == 0) continue;
        const double f = run.minus.post_state
                             ? fidelity(*run.minus.post_state, BranchState::singlet(n, m).to_state(output_space(c)))
                             : 0.0;
        worst_fid = std::max(worst_fid, 1.0 - f);
      }
    }
    checks.add("device_detector_probabilities", worst_w, 1e-12);
    checks.add("device_post_state_fidelity", worst_fid, 1e-10);
  }

  // Analytic witness vs dense partial transpose.
  for (SourceKind kind : {SourceKind::thermal, SourceKind::pseudothermal}) {
    for (double mean : {0.5, 1.0}) {
      const auto d = make_distribution(kind, mean, opts.epsilon_tail);
      const auto ens = build_output_ensemble(d, d);
      WitnessWorkspace ws(ens, opts.witness_cutoff);
      double worst = 0.0, worst_sign = -INFINITY, worst_bound = 0.0;
      for (int m = 1; m <= opts.witness_cutoff; ++m) {
        for (int n = 1; n <= opts.witness_cutoff; ++n) {
          const double analytic = witness_value_analytic(d, d, m, n);
          const double numeric = ws.numeric_value(m, n);
          worst = std::max(worst, std::abs(analytic - numeric));
          worst_sign = std::max(worst_sign, numeric);  // must stay negative
          worst_bound = std::max(worst_bound, ws.min_pt_eigenvalue() - numeric);
        }
      }
      const std::string tag = std::string(to_string(kind)) + "/mean=" + std::to_string(mean);
      checks.add("witness_analytic_vs_dense/" + tag, worst, 1e-10);
      checks.add("witness_negative/" + tag, worst_sign < 0.0 ? 0.0 : worst_sign + 1.0, 0.0);
      checks.add("witness_variational_bound/" + tag, std::max(0.0, worst_bound), 1e-12);
    }
  }

  // Multi-mode product rule and the minimal violating mode count.
  {
    const auto one = thermal_distribution(1.0, opts.epsilon_tail);
    const auto three = MultiModeSource::identical(one, 3);
    checks.add("multimode_product_overlap", std::abs(three.vacuum_overlap() - 0.125), 1e-12);
    const auto nu = minimal_mode_count(one.vacuum_overlap(), one.vacuum_overlap());
    checks.add("multimode_minimal_count", nu ? std::abs(static_cast<double>(*nu) - 3.0) : INFINITY, 0.0);
  }

  return checks.take();
}

}  // namespace fockbell
