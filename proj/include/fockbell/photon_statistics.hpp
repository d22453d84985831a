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

/// Diagonal photon-number distributions of the input sources.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fockbell {

namespace constants {
/// CODATA 2018 reduced Planck constant, J s.
inline constexpr double kHbar = 1.054571817e-34;
/// Boltzmann constant (exact SI), J/K.
inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kDefaultTailEpsilon = 1e-10;
}  // namespace constants

enum class SourceKind { thermal, pseudothermal, custom };

inline std::string_view to_string(SourceKind k) {
  switch (k) {
    case SourceKind::thermal: return "thermal";
    case SourceKind::pseudothermal: return "pseudothermal";
    case SourceKind::custom: return "custom";
  }
  return "custom";
}

inline SourceKind source_kind_from_string(std::string_view s) {
  if (s == "thermal") return SourceKind::thermal;
  if (s == "pseudothermal" || s == "pseudo-thermal" || s == "poisson") return SourceKind::pseudothermal;
  if (s == "custom") return SourceKind::custom;
  throw std::invalid_argument("unknown source kind: " + std::string(s));
}

/// <n> = 1/(e^beta - 1) of a thermal mode with beta = hbar omega / (k_B T).
inline double beta_to_mean_n(double beta) {
  if (!(beta > 0.0)) throw std::domain_error("beta_to_mean_n: beta must be positive");
  if (beta > 700.0) return std::exp(-beta);
  return 1.0 / std::expm1(beta);
}

inline double mean_n_to_beta(double mean_n) {
  if (!(mean_n > 0.0)) throw std::domain_error("mean_n_to_beta: mean photon number must be positive");
  return std::log1p(1.0 / mean_n);
}

inline double beta_from_temperature(double omega, double temperature) {
  if (!(omega > 0.0) || !(temperature > 0.0)) {
    throw std::domain_error("beta_from_temperature: omega and temperature must be positive");
  }
  return constants::kHbar * omega / (constants::kBoltzmann * temperature);
}

/// Temperature at which a mode of angular frequency `omega` has the given beta.
inline double temperature_from_beta(double omega, double beta) {
  if (!(omega > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("temperature_from_beta: omega and beta must be positive");
  }
  return constants::kHbar * omega / (constants::kBoltzmann * beta);
}

/// A thermal source described by any consistent subset of (omega, T), beta, <n>.
struct SourceParameters {
  double beta = 0.0;
  double mean_n = 0.0;
  double omega = 0.0;        // rad/s, 0 when not given
  double temperature = 0.0;  // K, 0 when not given

  static SourceParameters from_beta(double beta) {
    return SourceParameters{beta, beta_to_mean_n(beta), 0.0, 0.0};
  }

  static SourceParameters from_mean_n(double mean_n) {
    return SourceParameters{mean_n_to_beta(mean_n), mean_n, 0.0, 0.0};
  }

  /// `omega` is an angular frequency.
  static SourceParameters from_temperature(double omega, double temperature) {
    double beta = beta_from_temperature(omega, temperature);
    return SourceParameters{beta, beta_to_mean_n(beta), omega, temperature};
  }

  bool consistent(double rel_tol = 1e-9) const {
    auto close = [rel_tol](double a, double b) {
      return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
    };
    if (!close(mean_n, beta_to_mean_n(beta))) return false;
    if (omega > 0.0 && temperature > 0.0 && !close(beta, beta_from_temperature(omega, temperature))) {
      return false;
    }
    return true;
  }
};

class PhotonNumberDistribution {
 public:
  /// Bose-Einstein weights <n>^n / (1+<n>)^(1+n), cut where the geometric
  /// tail drops below `epsilon_tail`.
  static PhotonNumberDistribution thermal(double mean_n,
                                          double epsilon_tail = constants::kDefaultTailEpsilon) {
    check_inputs(mean_n, epsilon_tail, "thermal_distribution");
    if (mean_n == 0.0) return PhotonNumberDistribution(SourceKind::thermal, 0.0, epsilon_tail, {1.0}, 0.0);
    const double ratio = mean_n / (1.0 + mean_n);
    std::vector<double> w{1.0 / (1.0 + mean_n)};
    // Tail beyond n_max is ratio^(n_max+1).
    double tail = ratio;
    while (tail >= epsilon_tail) {
      w.push_back(w.back() * ratio);
      tail *= ratio;
    }
    return PhotonNumberDistribution(SourceKind::thermal, mean_n, epsilon_tail, std::move(w), tail);
  }

  /// Poisson weights <n>^n e^(-<n>) / n!.
  static PhotonNumberDistribution pseudothermal(double mean_n,
                                                double epsilon_tail = constants::kDefaultTailEpsilon) {
    check_inputs(mean_n, epsilon_tail, "pseudothermal_distribution");
    if (mean_n == 0.0) {
      return PhotonNumberDistribution(SourceKind::pseudothermal, 0.0, epsilon_tail, {1.0}, 0.0);
    }
    if (mean_n > 600.0) {
      throw std::domain_error("pseudothermal_distribution: mean photon number too large to tabulate");
    }
    std::vector<double> w{std::exp(-mean_n)};
    auto term = [&](std::size_t n) { return w[n - 1] * mean_n / static_cast<double>(n); };
    // Extend until past the mode and the forward tail sum is below epsilon.
    for (;;) {
      std::size_t n = w.size();
      if (static_cast<double>(n) > mean_n) {
        double t = 0.0, p = w.back();
        for (std::size_t k = n; ; ++k) {
          p *= mean_n / static_cast<double>(k);
          t += p;
          if (p < 1e-18 * t || p == 0.0) break;
        }
        if (t < epsilon_tail) {
          return PhotonNumberDistribution(SourceKind::pseudothermal, mean_n, epsilon_tail,
                                          std::move(w), t);
        }
      }
      w.push_back(term(n));
    }
  }

  /// Raw weights; a deficit up to `epsilon_tail` is renormalized away,
  /// anything larger is rejected.
  static PhotonNumberDistribution custom(std::vector<double> weights,
                                         double epsilon_tail = constants::kDefaultTailEpsilon) {
    if (weights.empty()) throw std::invalid_argument("custom distribution: no weights");
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("custom distribution: weights must be finite and nonnegative");
      }
    }
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double deficit = 1.0 - total;
    if (deficit < -1e-12) throw std::invalid_argument("custom distribution: weights sum above 1");
    if (deficit > epsilon_tail) {
      throw std::invalid_argument("custom distribution: weights sum to " + std::to_string(total) +
                                  ", deficit exceeds the tail tolerance");
    }
    for (double& w : weights) w /= total;
    double mean = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) mean += static_cast<double>(n) * weights[n];
    return PhotonNumberDistribution(SourceKind::custom, mean, epsilon_tail, std::move(weights), 0.0);
  }

  /// Validating constructor used by deserialization.
  static PhotonNumberDistribution from_parts(SourceKind kind, double mean_n, double epsilon_tail,
                                             std::vector<double> weights, double tail_mass) {
    return PhotonNumberDistribution(kind, mean_n, epsilon_tail, std::move(weights), tail_mass);
  }

  SourceKind kind() const { return kind_; }
  double declared_mean() const { return mean_n_; }
  double epsilon_tail() const { return epsilon_tail_; }
  double tail_mass() const { return tail_mass_; }
  const std::vector<double>& weights() const { return weights_; }
  int cutoff() const { return static_cast<int>(weights_.size()) - 1; }
  double vacuum_overlap() const { return weights_.front(); }

  /// p_n, zero beyond the stored cutoff.
  double operator[](std::size_t n) const { return n < weights_.size() ? weights_[n] : 0.0; }

 private:
  PhotonNumberDistribution(SourceKind kind, double mean_n, double epsilon_tail,
                           std::vector<double> weights, double tail_mass)
      : kind_(kind), mean_n_(mean_n), epsilon_tail_(epsilon_tail), tail_mass_(tail_mass),
        weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("distribution: no weights");
    for (double w : weights_) {
      if (!(w >= 0.0)) throw std::invalid_argument("distribution: negative weight");
    }
    if (!(tail_mass_ >= 0.0) || tail_mass_ > epsilon_tail_) {
      throw std::invalid_argument("distribution: tail mass outside [0, epsilon_tail]");
    }
    double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::abs(total + tail_mass_ - 1.0) > 1e-12) {
      throw std::invalid_argument("distribution: weights plus tail mass differ from 1");
    }
    double expected_p0 = -1.0;
    if (kind_ == SourceKind::thermal) expected_p0 = 1.0 / (1.0 + mean_n_);
    if (kind_ == SourceKind::pseudothermal) expected_p0 = std::exp(-mean_n_);
    if (expected_p0 >= 0.0 && std::abs(weights_.front() - expected_p0) > 1e-12) {
      throw std::invalid_argument("distribution: vacuum weight disagrees with its closed form");
    }
  }

  static void check_inputs(double mean_n, double epsilon_tail, const char* what) {
    if (!(mean_n >= 0.0) || !std::isfinite(mean_n)) {
      throw std::domain_error(std::string(what) + ": mean photon number must be >= 0");
    }
    if (!(epsilon_tail > 0.0 && epsilon_tail < 1.0)) {
      throw std::invalid_argument(std::string(what) + ": epsilon_tail must lie in (0, 1)");
    }
  }

  SourceKind kind_;
  double mean_n_;
  double epsilon_tail_;
  double tail_mass_;
  std::vector<double> weights_;
};

inline PhotonNumberDistribution thermal_distribution(double mean_n,
                                                     double epsilon_tail = constants::kDefaultTailEpsilon) {
  return PhotonNumberDistribution::thermal(mean_n, epsilon_tail);
}

inline PhotonNumberDistribution pseudothermal_distribution(
    double mean_n, double epsilon_tail = constants::kDefaultTailEpsilon) {
  return PhotonNumberDistribution::pseudothermal(mean_n, epsilon_tail);
}

inline PhotonNumberDistribution make_distribution(SourceKind kind, double mean_n,
                                                  double epsilon_tail = constants::kDefaultTailEpsilon) {
  switch (kind) {
    case SourceKind::thermal: return thermal_distribution(mean_n, epsilon_tail);
    case SourceKind::pseudothermal: return pseudothermal_distribution(mean_n, epsilon_tail);
    case SourceKind::custom: break;
  }
  throw std::invalid_argument("make_distribution: custom sources need explicit weights");
}

/// Closed-form vacuum weight for a kind, without tabulating the distribution.
inline double closed_form_vacuum(SourceKind kind, double mean_n) {
  if (!(mean_n >= 0.0)) throw std::domain_error("closed_form_vacuum: mean photon number must be >= 0");
  switch (kind) {
    case SourceKind::thermal: return 1.0 / (1.0 + mean_n);
    case SourceKind::pseudothermal: return std::exp(-mean_n);
    case SourceKind::custom: break;
  }
  throw std::invalid_argument("closed_form_vacuum: custom sources have no closed form");
}

/// Independent modes mu of one source; the detector only distinguishes the
/// joint vacuum, so the overlap is the product of per-mode vacuum weights.
class MultiModeSource {
 public:
  explicit MultiModeSource(std::vector<PhotonNumberDistribution> per_mode)
      : per_mode_(std::move(per_mode)) {
    if (per_mode_.empty()) throw std::invalid_argument("MultiModeSource: no modes");
    vacuum_overlap_ = 1.0;
    for (const auto& d : per_mode_) vacuum_overlap_ *= d.vacuum_overlap();
  }

  static MultiModeSource identical(const PhotonNumberDistribution& mode, std::size_t count) {
    if (count == 0) throw std::invalid_argument("MultiModeSource: mode count must be >= 1");
    return MultiModeSource(std::vector<PhotonNumberDistribution>(count, mode));
  }

  const std::vector<PhotonNumberDistribution>& per_mode() const { return per_mode_; }
  std::size_t mode_count() const { return per_mode_.size(); }
  double vacuum_overlap() const { return vacuum_overlap_; }

  /// Two-class distribution {joint vacuum, any excitation}. The excited class
  /// is stored at index 1; every excitation pattern is treated alike by the
  /// rotations and yes/no detectors.
  PhotonNumberDistribution excitation_classes() const {
    return PhotonNumberDistribution::custom({vacuum_overlap_, 1.0 - vacuum_overlap_});
  }

 private:
  std::vector<PhotonNumberDistribution> per_mode_;
  double vacuum_overlap_ = 1.0;
};

inline double vacuum_overlap(const PhotonNumberDistribution& d) { return d.vacuum_overlap(); }
inline double vacuum_overlap(const MultiModeSource& s) { return s.vacuum_overlap(); }

}  // namespace fockbell
