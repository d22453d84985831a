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

/// CHSH test on the heralded ensemble: local rotations, yes/no detection,
/// correlation functions by enumeration and in closed form, and the
/// violation thresholds for thermal, pseudo-thermal and multi-mode sources.
///
/// Outcome alphabet: each observer reports z1 - z2 with z = 1 on a click.
/// A side holding no photons gives 0; a double click would also give 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fockbell/entangler.hpp"
#include "fockbell/photon_statistics.hpp"

namespace fockbell {

inline constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
inline constexpr double kLocalBound = 2.0;

/// Angle reduced to [0, 2 pi).
class RotationSetting {
 public:
  explicit RotationSetting(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("RotationSetting: angle must be finite");
    const double two_pi = 2.0 * std::numbers::pi;
    theta_ = std::fmod(theta, two_pi);
    if (theta_ < 0.0) theta_ += two_pi;
    if (theta_ >= two_pi) theta_ = 0.0;
  }

  double theta() const { return theta_; }

  /// [[cos, -sin], [sin, cos]] on the (|k,0>, |0,k>) coordinates.
  std::array<std::array<double, 2>, 2> matrix() const {
    const double c = std::cos(theta_), s = std::sin(theta_);
    return {{{c, -s}, {s, c}}};
  }

 private:
  double theta_ = 0.0;
};

struct BellAngles {
  double theta_A = 0.0;
  double theta_A_prime = 0.0;
  double theta_B = 0.0;
  double theta_B_prime = 0.0;
};

/// (0, pi/4, pi/8, -pi/8).
inline BellAngles canonical_angles() {
  return BellAngles{0.0, std::numbers::pi / 4.0, std::numbers::pi / 8.0, -std::numbers::pi / 8.0};
}

inline BranchState rotate_branch(const BranchState& state, Side side, RotationSetting theta) {
  return state.rotated(side, theta.theta());
}

/// p(X, Y) over {-1, 0, +1}^2, indexed [X + 1][Y + 1].
class OutcomeDistribution {
 public:
  using Table = std::array<std::array<double, 3>, 3>;

  OutcomeDistribution() = default;
  explicit OutcomeDistribution(const Table& p) : p_(p) {
    double total = 0.0;
    for (const auto& row : p_) {
      for (double v : row) {
        if (!(v >= -tol::kConstruction)) throw std::invalid_argument("OutcomeDistribution: negative probability");
        total += v;
      }
    }
    if (std::abs(total - 1.0) > tol::kConstruction) {
      throw std::invalid_argument("OutcomeDistribution: probabilities do not sum to 1");
    }
  }

  double operator()(int x, int y) const { return p_.at(static_cast<std::size_t>(x + 1)).at(static_cast<std::size_t>(y + 1)); }
  const Table& table() const { return p_; }

  /// sum X Y p(X, Y).
  double correlation() const {
    double c = 0.0;
    for (int x = -1; x <= 1; ++x) {
      for (int y = -1; y <= 1; ++y) c += x * y * (*this)(x, y);
    }
    return c;
  }

  double marginal_x(int x) const {
    double s = 0.0;
    for (int y = -1; y <= 1; ++y) s += (*this)(x, y);
    return s;
  }

 private:
  Table p_{};
};

namespace detail {

/// Joint outcome table of one branch after both rotations.
inline OutcomeDistribution::Table branch_outcomes(const BranchState& state, double theta_A,
                                                  double theta_B) {
  const BranchState r = state.rotated(Side::A, theta_A).rotated(Side::B, theta_B);
  OutcomeDistribution::Table t{};
  const auto& g = r.amplitudes();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double p = std::norm(g[a][b]);
      if (p == 0.0) continue;
      // Row 0 puts the photons in mode 1 (X = +1), row 1 in mode 2 (X = -1).
      const int x = r.n() == 0 ? 0 : (a == 0 ? 1 : -1);
      const int y = r.m() == 0 ? 0 : (b == 0 ? 1 : -1);
      t[static_cast<std::size_t>(x + 1)][static_cast<std::size_t>(y + 1)] += p;
    }
  }
  return t;
}

}  // namespace detail

inline OutcomeDistribution outcome_distribution(const BranchState& state, double theta_A,
                                                double theta_B) {
  return OutcomeDistribution(detail::branch_outcomes(state, theta_A, theta_B));
}

/// Ensemble mixture of per-branch outcome tables, renormalized over the
/// represented weight (the truncation deficit is at most epsilon_tail-sized).
inline OutcomeDistribution outcome_distribution(const ConditionalOutputEnsemble& ensemble,
                                                double theta_A, double theta_B) {
  OutcomeDistribution::Table t{};
  double total = 0.0;
  for (const auto& e : ensemble.entries()) {
    const auto b = detail::branch_outcomes(e.state, theta_A, theta_B);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) t[i][j] += e.weight * b[i][j];
    }
    total += e.weight;
  }
  if (!(total > 0.0)) throw std::invalid_argument("outcome_distribution: empty ensemble");
  for (auto& row : t) {
    for (double& v : row) v /= total;
  }
  return OutcomeDistribution(t);
}

/// C(theta_A, theta_B) = sum X Y p(X, Y), by enumeration over the ensemble.
inline double correlation_enumerated(const ConditionalOutputEnsemble& ensemble, double theta_A,
                                     double theta_B) {
  return outcome_distribution(ensemble, theta_A, theta_B).correlation();
}

namespace detail {
inline void check_overlaps(double p0, double r0, const char* what) {
  if (!(p0 >= 0.0 && p0 <= 1.0 && r0 >= 0.0 && r0 <= 1.0)) {
    throw std::domain_error(std::string(what) + ": vacuum overlaps must lie in [0, 1]");
  }
  if (p0 * r0 >= 1.0) throw std::domain_error(std::string(what) + ": p0 = r0 = 1 leaves nothing to herald");
}
}  // namespace detail

/// (1 - p0)(1 - r0) / (1 - p0 r0): weight of branches excited on both sides.
inline double visibility(double p0, double r0) {
  detail::check_overlaps(p0, r0, "visibility");
  return (1.0 - p0) * (1.0 - r0) / (1.0 - p0 * r0);
}

inline double correlation_analytic(double p0, double r0, double theta_A, double theta_B) {
  return -std::cos(2.0 * (theta_A - theta_B)) * visibility(p0, r0);
}

enum class BellMethod { enumeration, analytic, montecarlo };

inline std::string_view to_string(BellMethod m) {
  switch (m) {
    case BellMethod::enumeration: return "enumeration";
    case BellMethod::analytic: return "analytic";
    case BellMethod::montecarlo: return "montecarlo";
  }
  return "analytic";
}

struct BellResult {
  double bell_value = 0.0;
  /// C(a, b), C(a, b'), C(a', b), C(a', b').
  std::array<double, 4> correlations{};
  BellMethod method = BellMethod::analytic;
};

/// The four (theta_A, theta_B) settings in BellResult order.
inline std::array<std::array<double, 2>, 4> bell_settings(const BellAngles& a) {
  return {{{a.theta_A, a.theta_B},
           {a.theta_A, a.theta_B_prime},
           {a.theta_A_prime, a.theta_B},
           {a.theta_A_prime, a.theta_B_prime}}};
}

inline double chsh_combination(const std::array<double, 4>& c) {
  return std::abs(c[0] + c[1] + c[2] - c[3]);
}

template <class CorrelationFn>
BellResult bell_value(CorrelationFn&& correlation, const BellAngles& angles,
                      BellMethod method = BellMethod::analytic) {
  BellResult r;
  r.method = method;
  const auto settings = bell_settings(angles);
  for (std::size_t k = 0; k < 4; ++k) r.correlations[k] = correlation(settings[k][0], settings[k][1]);
  r.bell_value = chsh_combination(r.correlations);
  return r;
}

inline BellResult bell_value_enumerated(const ConditionalOutputEnsemble& ensemble,
                                        const BellAngles& angles = canonical_angles()) {
  return bell_value([&](double a, double b) { return correlation_enumerated(ensemble, a, b); },
                    angles, BellMethod::enumeration);
}

inline BellResult bell_value_analytic(double p0, double r0,
                                      const BellAngles& angles = canonical_angles()) {
  return bell_value([&](double a, double b) { return correlation_analytic(p0, r0, a, b); }, angles,
                    BellMethod::analytic);
}

/// 2 sqrt 2 (1 - p0)(1 - r0) / (1 - p0 r0).
inline double bell_max_analytic(double p0, double r0) { return kTsirelson * visibility(p0, r0); }

/// Equal-overlap violation threshold: p0 < (sqrt 2 - 1)/(sqrt 2 + 1).
inline double symmetric_vacuum_threshold() {
  return (std::numbers::sqrt2 - 1.0) / (std::numbers::sqrt2 + 1.0);
}

/// 2 sqrt 2 / (e^beta_A + e^beta_B - 1).
inline double thermal_bell_max(double beta_A, double beta_B) {
  if (!(beta_A > 0.0) || !(beta_B > 0.0)) throw std::domain_error("thermal_bell_max: beta must be positive");
  return kTsirelson / (std::exp(beta_A) + std::exp(beta_B) - 1.0);
}

/// 2 sqrt 2 / (1 + 1/<n>_A + 1/<n>_B).
inline double thermal_bell_max_from_means(double mean_A, double mean_B) {
  if (!(mean_A > 0.0) || !(mean_B > 0.0)) {
    throw std::domain_error("thermal_bell_max_from_means: means must be positive");
  }
  return kTsirelson / (1.0 + 1.0 / mean_A + 1.0 / mean_B);
}

inline double pseudothermal_bell_max(double mean_A, double mean_B) {
  if (!(mean_A >= 0.0) || !(mean_B >= 0.0)) {
    throw std::domain_error("pseudothermal_bell_max: means must be nonnegative");
  }
  if (mean_A == 0.0 && mean_B == 0.0) {
    throw std::domain_error("pseudothermal_bell_max: both sources are vacuum");
  }
  const double a = -std::expm1(-mean_A), b = -std::expm1(-mean_B);
  return kTsirelson * a * b / -std::expm1(-(mean_A + mean_B));
}

inline double bell_max_for_means(SourceKind kind, double mean_A, double mean_B) {
  switch (kind) {
    case SourceKind::thermal: return thermal_bell_max_from_means(mean_A, mean_B);
    case SourceKind::pseudothermal: return pseudothermal_bell_max(mean_A, mean_B);
    case SourceKind::custom: break;
  }
  throw std::invalid_argument("bell_max_for_means: custom sources have no closed form");
}

inline double multimode_bell_max(const MultiModeSource& source_A, const MultiModeSource& source_B) {
  return bell_max_analytic(source_A.vacuum_overlap(), source_B.vacuum_overlap());
}

/// Smallest number of identical modes per side with bell_max > 2, given the
/// per-mode vacuum weights; empty if no count up to `max_modes` suffices.
inline std::optional<std::size_t> minimal_mode_count(double per_mode_p0, double per_mode_r0,
                                                     std::size_t max_modes = 1u << 20) {
  double p = 1.0, r = 1.0;
  for (std::size_t nu = 1; nu <= max_modes; ++nu) {
    p *= per_mode_p0;
    r *= per_mode_r0;
    if (p * r < 1.0 && bell_max_analytic(p, r) > kLocalBound) return nu;
    if (per_mode_p0 == 1.0 && per_mode_r0 == 1.0) break;
  }
  return std::nullopt;
}

// --- root finding ----------------------------------------------------------

struct BisectionResult {
  double root;
  int iterations;
};

/// Root of a function with a sign change on [lo, hi], to `tolerance` in x.
inline std::optional<BisectionResult> bisect(const std::function<double(double)>& f, double lo,
                                             double hi, double tolerance = 1e-9,
                                             int max_iterations = 400) {
  if (!(lo < hi)) return std::nullopt;
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return BisectionResult{lo, 0};
  if (fhi == 0.0) return BisectionResult{hi, 0};
  if ((flo < 0.0) == (fhi < 0.0)) return std::nullopt;
  int it = 0;
  while (hi - lo > tolerance && it < max_iterations) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return BisectionResult{mid, it + 1};
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    ++it;
  }
  return BisectionResult{0.5 * (lo + hi), it};
}

/// Closed forms of the symmetric thresholds.
namespace thresholds {
inline double thermal_beta() { return std::log((std::numbers::sqrt2 + 1.0) / 2.0); }
inline double thermal_mean() { return 2.0 * (std::numbers::sqrt2 + 1.0); }
inline double pseudothermal_mean() {
  return std::log((std::numbers::sqrt2 + 1.0) / (std::numbers::sqrt2 - 1.0));
}
/// Border value of <n>_B as <n>_A -> infinity for thermal light.
inline double thermal_asymptote() { return 1.0 / (std::numbers::sqrt2 - 1.0); }
}  // namespace thresholds

/// Identical-source <n> with bell_max = 2, by bisection.
inline std::optional<double> symmetric_crossing(SourceKind kind, double lo = 1e-6, double hi = 1e3,
                                                double tolerance = 1e-9) {
  auto r = bisect([kind](double x) { return bell_max_for_means(kind, x, x) - kLocalBound; }, lo, hi,
                  tolerance);
  if (!r) return std::nullopt;
  return r->root;
}

struct BorderPoint {
  double mean_A;
  std::optional<double> mean_B;  // empty: no crossing inside the B range
  std::string status;
};

/// For each <n>_A, the <n>_B at which bell_max crosses 2. Bracketing
/// failures are reported per point.
inline std::vector<BorderPoint> violation_border(SourceKind kind, const std::vector<double>& axis_A,
                                                 double mean_B_lo, double mean_B_hi,
                                                 double tolerance = 1e-9) {
  if (!(mean_B_lo > 0.0) || !(mean_B_hi > mean_B_lo)) {
    throw std::invalid_argument("violation_border: B range must be positive and nonempty");
  }
  std::vector<BorderPoint> out;
  out.reserve(axis_A.size());
  for (double a : axis_A) {
    if (!(a > 0.0)) throw std::invalid_argument("violation_border: A axis must be positive");
    auto f = [&](double b) { return bell_max_for_means(kind, a, b) - kLocalBound; };
    auto r = bisect(f, mean_B_lo, mean_B_hi, tolerance);
    if (r) {
      out.push_back({a, r->root, "ok"});
    } else if (f(mean_B_hi) < 0.0) {
      out.push_back({a, std::nullopt, "no violation in range"});
    } else {
      out.push_back({a, std::nullopt, "violated across whole range"});
    }
  }
  return out;
}

// --- angle search ----------------------------------------------------------

struct AngleSearchResult {
  double bell_value;
  BellAngles angles;
};

/// Exhaustive search of |C(a,b) + C(a,b') + C(a',b) - C(a',b')| over a grid
/// of `steps` angles in [0, pi) per setting, followed by a shrinking-step
/// pattern search. Correlations have period pi in each angle.
template <class CorrelationFn>
AngleSearchResult search_bell_angles(CorrelationFn&& correlation, int steps = 180,
                                     bool refine = true) {
  if (steps < 2) throw std::invalid_argument("search_bell_angles: need at least 2 grid steps");
  const double h = std::numbers::pi / steps;
  const auto n = static_cast<std::size_t>(steps);
  std::vector<double> table(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = correlation(h * i, h * j);
  }
  // For fixed (a, a') the objective splits as |f(b) + g(b')|.
  double best = -1.0;
  std::array<std::size_t, 4> arg{};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t ap = 0; ap < n; ++ap) {
      std::size_t fmax = 0, fmin = 0, gmax = 0, gmin = 0;
      double fM = -1e300, fm = 1e300, gM = -1e300, gm = 1e300;
      for (std::size_t b = 0; b < n; ++b) {
        const double f = table[a * n + b] + table[ap * n + b];
        const double g = table[a * n + b] - table[ap * n + b];
        if (f > fM) { fM = f; fmax = b; }
        if (f < fm) { fm = f; fmin = b; }
        if (g > gM) { gM = g; gmax = b; }
        if (g < gm) { gm = g; gmin = b; }
      }
      if (fM + gM > best) { best = fM + gM; arg = {a, ap, fmax, gmax}; }
      if (-(fm + gm) > best) { best = -(fm + gm); arg = {a, ap, fmin, gmin}; }
    }
  }
  std::array<double, 4> x{h * arg[0], h * arg[1], h * arg[2], h * arg[3]};
  auto objective = [&](const std::array<double, 4>& t) {
    return bell_value(correlation, BellAngles{t[0], t[1], t[2], t[3]}).bell_value;
  };
  double fx = objective(x);
  if (refine) {
    for (double step = h; step > 1e-12; step *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t k = 0; k < 4; ++k) {
          for (double dir : {1.0, -1.0}) {
            auto y = x;
            y[k] += dir * step;
            const double fy = objective(y);
            if (fy > fx) {
              x = y;
              fx = fy;
              improved = true;
            }
          }
        }
      }
    }
  }
  return AngleSearchResult{fx, BellAngles{x[0], x[1], x[2], x[3]}};
}

}  // namespace fockbell
