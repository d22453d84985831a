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

/// Finite-shot simulation of the CHSH experiment.
///
/// Each shot draws a branch (n, m) from the ensemble weights and then a joint
/// outcome (X, Y) from that branch's exact outcome table. Shots are grouped in
/// fixed-size batches; batch b of setting s draws from its own mt19937_64
/// stream seeded with splitmix64(seed, s, b), so results do not depend on how
/// batches are scheduled across threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <future>
#include <random>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <vector>

#include "fockbell/bell_chsh.hpp"
#include "fockbell/entangler.hpp"

namespace fockbell {

inline constexpr std::string_view kGeneratorId = "mt19937_64+splitmix64-streams/v1";
inline constexpr std::uint64_t kShotBatch = 1u << 16;

struct SampleConfig {
  std::uint64_t seed = 0;
  std::uint64_t shots_per_setting = 1;
  BellAngles angles = canonical_angles();
  /// Worker threads; 0 picks hardware concurrency. Does not affect results.
  unsigned threads = 1;
};

struct Outcome {
  std::int8_t x;
  std::int8_t y;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct SettingEstimate {
  double correlation = 0.0;
  double standard_error = 0.0;
  std::uint64_t shots = 0;
};

struct EstimatedBellResult {
  double bell_estimate = 0.0;
  /// sqrt of the summed per-setting variances.
  double standard_error = 0.0;
  std::array<SettingEstimate, 4> per_setting{};
  std::uint64_t seed = 0;
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t setting, std::uint64_t batch) {
  return splitmix64(splitmix64(splitmix64(seed) ^ setting) ^ batch);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Precomputed branch and outcome CDFs for one pair of angles.
class ShotSampler {
 public:
  ShotSampler(const ConditionalOutputEnsemble& ensemble, double theta_A, double theta_B) {
    const auto& entries = ensemble.entries();
    if (entries.empty()) throw std::invalid_argument("ShotSampler: empty ensemble");
    branch_cdf_.reserve(entries.size());
    outcome_cdf_.reserve(entries.size());
    double acc = 0.0;
    for (const auto& e : entries) {
      acc += e.weight;
      branch_cdf_.push_back(acc);
      const auto table = outcome_distribution(e.state, theta_A, theta_B).table();
      std::array<double, 9> cdf{};
      double c = 0.0;
      for (std::size_t k = 0; k < 9; ++k) {
        c += table[k / 3][k % 3];
        cdf[k] = c;
      }
      for (double& v : cdf) v /= c;
      outcome_cdf_.push_back(cdf);
    }
    for (double& v : branch_cdf_) v /= acc;
  }

  Outcome draw(std::mt19937_64& gen) const {
    const double u = uniform01(gen);
    auto it = std::upper_bound(branch_cdf_.begin(), branch_cdf_.end(), u);
    auto branch = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - branch_cdf_.begin(), static_cast<std::ptrdiff_t>(branch_cdf_.size()) - 1));
    const auto& cdf = outcome_cdf_[branch];
    const double v = uniform01(gen);
    std::size_t k = 0;
    while (k < 8 && v >= cdf[k]) ++k;
    // Rounding can leave v above cdf[7] with an empty last cell.
    while (k > 0 && cdf[k] == cdf[k - 1]) --k;
    return Outcome{static_cast<std::int8_t>(static_cast<int>(k / 3) - 1),
                   static_cast<std::int8_t>(static_cast<int>(k % 3) - 1)};
  }

 private:
  std::vector<double> branch_cdf_;
  std::vector<std::array<double, 9>> outcome_cdf_;
};

namespace detail {

/// Runs `visit(batch_index, generator, shots_in_batch)` for every batch.
template <class Visit>
void for_each_batch(std::uint64_t shots, std::uint64_t seed, std::uint64_t setting, unsigned threads,
                    Visit&& visit) {
  const std::uint64_t batches = (shots + kShotBatch - 1) / kShotBatch;
  auto run = [&](std::uint64_t b) {
    std::mt19937_64 gen(stream_seed(seed, setting, b));
    const std::uint64_t count = std::min(kShotBatch, shots - b * kShotBatch);
    visit(b, gen, count);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || batches <= 1) {
    for (std::uint64_t b = 0; b < batches; ++b) run(b);
    return;
  }
  std::vector<std::future<void>> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.push_back(std::async(std::launch::async, [&, t] {
      for (std::uint64_t b = t; b < batches; b += threads) run(b);
    }));
  }
  for (auto& w : workers) w.get();
}

}  // namespace detail

/// Outcome sequence for one setting; `setting` selects the stream family.
inline std::vector<Outcome> sample_shots(const ConditionalOutputEnsemble& ensemble, double theta_A,
                                         double theta_B, const SampleConfig& config,
                                         std::uint64_t setting = 0) {
  if (config.shots_per_setting == 0) throw std::invalid_argument("sample_shots: shots must be >= 1");
  const ShotSampler sampler(ensemble, theta_A, theta_B);
  std::vector<Outcome> out(config.shots_per_setting);
  detail::for_each_batch(config.shots_per_setting, config.seed, setting, config.threads,
                         [&](std::uint64_t b, std::mt19937_64& gen, std::uint64_t count) {
                           Outcome* dst = out.data() + b * kShotBatch;
                           for (std::uint64_t i = 0; i < count; ++i) dst[i] = sampler.draw(gen);
                         });
  return out;
}

/// Empirical (X, Y) frequencies, indexed [X + 1][Y + 1].
inline OutcomeDistribution::Table empirical_table(const std::vector<Outcome>& shots) {
  OutcomeDistribution::Table t{};
  if (shots.empty()) return t;
  for (const auto& s : shots) t[static_cast<std::size_t>(s.x + 1)][static_cast<std::size_t>(s.y + 1)] += 1.0;
  for (auto& row : t) {
    for (double& v : row) v /= static_cast<double>(shots.size());
  }
  return t;
}

inline double total_variation(const OutcomeDistribution::Table& a, const OutcomeDistribution::Table& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) d += std::abs(a[i][j] - b[i][j]);
  }
  return 0.5 * d;
}

/// Mean of X*Y with the plug-in standard error sqrt((E[(XY)^2] - mean^2)/shots).
inline SettingEstimate estimate_setting(const ConditionalOutputEnsemble& ensemble, double theta_A,
                                        double theta_B, const SampleConfig& config,
                                        std::uint64_t setting) {
  if (config.shots_per_setting == 0) throw std::invalid_argument("estimate: shots must be >= 1");
  const ShotSampler sampler(ensemble, theta_A, theta_B);
  const std::uint64_t batches = (config.shots_per_setting + kShotBatch - 1) / kShotBatch;
  // Integer counts per batch keep the merge exact and order-independent.
  std::vector<std::int64_t> sum(batches, 0), sum_sq(batches, 0);
  detail::for_each_batch(config.shots_per_setting, config.seed, setting, config.threads,
                         [&](std::uint64_t b, std::mt19937_64& gen, std::uint64_t count) {
                           std::int64_t s = 0, s2 = 0;
                           for (std::uint64_t i = 0; i < count; ++i) {
                             const Outcome o = sampler.draw(gen);
                             const int xy = o.x * o.y;
                             s += xy;
                             s2 += xy * xy;
                           }
                           sum[b] = s;
                           sum_sq[b] = s2;
                         });
  std::int64_t s = 0, s2 = 0;
  for (std::uint64_t b = 0; b < batches; ++b) {
    s += sum[b];
    s2 += sum_sq[b];
  }
  const auto n = static_cast<double>(config.shots_per_setting);
  const double mean = static_cast<double>(s) / n;
  const double var = std::max(0.0, static_cast<double>(s2) / n - mean * mean);
  return SettingEstimate{mean, std::sqrt(var / n), config.shots_per_setting};
}

inline EstimatedBellResult estimate_bell(const ConditionalOutputEnsemble& ensemble,
                                         const SampleConfig& config) {
  EstimatedBellResult r;
  r.seed = config.seed;
  const auto settings = bell_settings(config.angles);
  double var = 0.0;
  std::array<double, 4> c{};
  for (std::size_t k = 0; k < 4; ++k) {
    r.per_setting[k] = estimate_setting(ensemble, settings[k][0], settings[k][1], config, k);
    c[k] = r.per_setting[k].correlation;
    var += r.per_setting[k].standard_error * r.per_setting[k].standard_error;
  }
  r.bell_estimate = chsh_combination(c);
  r.standard_error = std::sqrt(var);
  return r;
}

}  // namespace fockbell
