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

// JSON import/export of distributions, ensembles, witness reports and
// Monte Carlo results.

#include <string>
#include <vector>

#include "json.hpp"

#include "fockbell/bell_chsh.hpp"
#include "fockbell/entangler.hpp"
#include "fockbell/photon_statistics.hpp"
#include "fockbell/sampler.hpp"
#include "fockbell/witness.hpp"

namespace fockbell {

using Json = nlohmann::json;

inline Json to_json(const PhotonNumberDistribution& d) {
  return Json{{"kind", std::string(to_string(d.kind()))},
              {"mean_n", d.declared_mean()},
              {"epsilon_tail", d.epsilon_tail()},
              {"weights", d.weights()},
              {"tail_mass", d.tail_mass()}};
}

/// Rebuilds and revalidates a distribution; all invariants are rechecked.
inline PhotonNumberDistribution distribution_from_json(const Json& j) {
  return PhotonNumberDistribution::from_parts(
      source_kind_from_string(j.at("kind").get<std::string>()), j.at("mean_n").get<double>(),
      j.at("epsilon_tail").get<double>(), j.at("weights").get<std::vector<double>>(),
      j.at("tail_mass").get<double>());
}

inline Json to_json(const ConditionalOutputEnsemble& e) {
  Json entries = Json::array();
  for (const auto& x : e.entries()) entries.push_back({{"n", x.n}, {"m", x.m}, {"weight", x.weight}});
  return Json{{"p0", e.p0()}, {"r0", e.r0()}, {"N", e.normalization()}, {"entries", entries}};
}

/// Branch amplitudes are the heralded singlets and are not stored.
inline ConditionalOutputEnsemble ensemble_from_json(const Json& j) {
  std::vector<EnsembleEntry> entries;
  double total = 0.0;
  for (const auto& x : j.at("entries")) {
    const int n = x.at("n").get<int>(), m = x.at("m").get<int>();
    const double w = x.at("weight").get<double>();
    total += w;
    entries.push_back({n, m, w, BranchState::singlet(n, m)});
  }
  return ConditionalOutputEnsemble(std::move(entries), j.at("N").get<double>(),
                                   j.at("p0").get<double>(), j.at("r0").get<double>(), 1.0 - total);
}

inline Json to_json(const WitnessReport& r) {
  return Json{{"m", r.m},
              {"n", r.n},
              {"analytic_value", r.analytic_value},
              {"numeric_value", r.numeric_value},
              {"min_pt_eigenvalue", r.min_pt_eigenvalue},
              {"entangled", r.entangled},
              {"cutoff", r.cutoff},
              {"tail_deficit", r.tail_deficit}};
}

inline Json to_json(const BellAngles& a) {
  return Json{{"theta_A", a.theta_A},
              {"theta_A_prime", a.theta_A_prime},
              {"theta_B", a.theta_B},
              {"theta_B_prime", a.theta_B_prime}};
}

inline Json to_json(const BellResult& r) {
  return Json{{"bell_value", r.bell_value},
              {"correlations", r.correlations},
              {"method", std::string(to_string(r.method))}};
}

inline Json to_json(const EstimatedBellResult& r, const SampleConfig& config) {
  Json estimates = Json::array(), stderrs = Json::array();
  for (const auto& s : r.per_setting) {
    estimates.push_back(s.correlation);
    stderrs.push_back(s.standard_error);
  }
  return Json{{"seed", r.seed},
              {"generator_id", std::string(kGeneratorId)},
              {"shots", config.shots_per_setting},
              {"angles", to_json(config.angles)},
              {"estimates", estimates},
              {"stderrs", stderrs},
              {"bell_estimate", r.bell_estimate},
              {"bell_stderr", r.standard_error}};
}

}  // namespace fockbell
