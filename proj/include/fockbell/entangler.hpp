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

/// Post-selected output of the conditional entangler, in compact form.
///
/// For inputs with n photons in A1 and m photons in B1, the heralded state
/// lives in the span of |n,0>_A|0,m>_B ("unflipped") and |0,n>_A|m,0>_B
/// ("flipped"). Local rotations mix |n,0> with |0,n> on each side, so the
/// general reachable state is a 2x2 grid of amplitudes:
///
///     row a    : 0 -> |n,0>_{A1 A2},  1 -> |0,n>_{A1 A2}
///     column b : 0 -> |m,0>_{B1 B2},  1 -> |0,m>_{B1 B2}
///
/// unflipped = (0, 1), flipped = (1, 0). When n == 0 (or m == 0) both rows
/// (columns) are the same vacuum ket and are folded into row (column) 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockbell/fock_space.hpp"
#include "fockbell/photon_statistics.hpp"

namespace fockbell {

enum class Side { A, B };

/// Labels of the four output modes, in basis order.
inline const std::vector<std::string>& output_mode_labels() {
  static const std::vector<std::string> labels{"A1", "A2", "B1", "B2"};
  return labels;
}

inline FockSpace output_space(int cutoff) { return FockSpace::uniform(output_mode_labels(), cutoff); }

class BranchState {
 public:
  using Grid = std::array<std::array<Complex, 2>, 2>;

  BranchState(int n, int m, Grid amplitudes) : n_(n), m_(m), amp_(amplitudes) {
    if (n < 0 || m < 0) throw std::invalid_argument("BranchState: negative photon number");
    fold();
    double norm2 = 0.0;
    for (const auto& row : amp_) {
      for (const auto& c : row) norm2 += std::norm(c);
    }
    if (std::abs(norm2 - 1.0) > tol::kConstruction) {
      throw std::invalid_argument("BranchState: amplitudes are not normalized");
    }
  }

  /// c_unflipped |n,0,0,m> + c_flipped |0,n,m,0>.
  static BranchState from_pair(int n, int m, Complex c_unflipped, Complex c_flipped) {
    Grid g{};
    g[0][1] = c_unflipped;
    g[1][0] = c_flipped;
    return BranchState(n, m, g);
  }

  /// (|n,0,0,m> - |0,n,m,0>) / sqrt 2, the heralded singlet analogue.
  static BranchState singlet(int n, int m) {
    if (n == 0 && m == 0) throw std::invalid_argument("BranchState: singlet undefined for n = m = 0");
    const double h = 1.0 / std::numbers::sqrt2;
    return from_pair(n, m, h, -h);
  }

  int n() const { return n_; }
  int m() const { return m_; }
  const Grid& amplitudes() const { return amp_; }
  Complex c_unflipped() const { return amp_[0][1]; }
  Complex c_flipped() const { return amp_[1][0]; }

  int excitation(Side side) const { return side == Side::A ? n_ : m_; }

  /// Local rotation on one side: |k,0> -> cos|k,0> + sin|0,k>,
  /// |0,k> -> -sin|k,0> + cos|0,k>, vacuum unchanged.
  BranchState rotated(Side side, double theta) const {
    if (excitation(side) == 0) return *this;
    const double c = std::cos(theta), s = std::sin(theta);
    Grid g{};
    for (int k = 0; k < 2; ++k) {
      if (side == Side::A) {
        g[0][k] = c * amp_[0][k] - s * amp_[1][k];
        g[1][k] = s * amp_[0][k] + c * amp_[1][k];
      } else {
        g[k][0] = c * amp_[k][0] - s * amp_[k][1];
        g[k][1] = s * amp_[k][0] + c * amp_[k][1];
      }
    }
    return BranchState(n_, m_, g);
  }

  /// Dense vector on a space containing modes A1, A2, B1, B2 (others vacuum).
  PureState to_state(const FockSpace& space) const {
    const std::size_t a1 = space.mode_index("A1"), a2 = space.mode_index("A2");
    const std::size_t b1 = space.mode_index("B1"), b2 = space.mode_index("B2");
    for (auto mode : {a1, a2}) {
      if (space.cutoffs()[mode] < n_) throw std::invalid_argument("BranchState: cutoff below n");
    }
    for (auto mode : {b1, b2}) {
      if (space.cutoffs()[mode] < m_) throw std::invalid_argument("BranchState: cutoff below m");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    std::vector<int> occ(space.num_modes(), 0);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        if (amp_[a][b] == Complex(0.0)) continue;
        std::fill(occ.begin(), occ.end(), 0);
        occ[a == 0 ? a1 : a2] = n_;
        occ[b == 0 ? b1 : b2] = m_;
        v(static_cast<Eigen::Index>(space.index(occ))) += amp_[a][b];
      }
    }
    return PureState(space, std::move(v));
  }

 private:
  void fold() {
    if (n_ == 0) {
      for (int b = 0; b < 2; ++b) {
        amp_[0][b] += amp_[1][b];
        amp_[1][b] = 0.0;
      }
    }
    if (m_ == 0) {
      for (int a = 0; a < 2; ++a) {
        amp_[a][0] += amp_[a][1];
        amp_[a][1] = 0.0;
      }
    }
  }

  int n_;
  int m_;
  Grid amp_;
};

struct EnsembleEntry {
  int n;
  int m;
  double weight;
  BranchState state;
};

/// rho_out = N sum_{(n,m) != (0,0)} p_n r_m |psi_nm><psi_nm|, N = 1/(1 - p0 r0).
class ConditionalOutputEnsemble {
 public:
  ConditionalOutputEnsemble(std::vector<EnsembleEntry> entries, double normalization, double p0,
                            double r0, double tail_deficit)
      : entries_(std::move(entries)), normalization_(normalization), p0_(p0), r0_(r0),
        tail_deficit_(tail_deficit) {
    double total = 0.0;
    for (const auto& e : entries_) {
      if (e.n == 0 && e.m == 0) throw std::invalid_argument("ensemble: (0,0) entry is not heralded");
      if (!(e.weight >= 0.0)) throw std::invalid_argument("ensemble: negative weight");
      total += e.weight;
    }
    if (std::abs(total + tail_deficit_ - 1.0) > tol::kPhysical) {
      throw std::invalid_argument("ensemble: weights and tail deficit do not sum to 1");
    }
    if (std::abs(normalization_ * (1.0 - p0_ * r0_) - 1.0) > tol::kConstruction) {
      throw std::invalid_argument("ensemble: normalization differs from 1/(1 - p0 r0)");
    }
  }

  const std::vector<EnsembleEntry>& entries() const { return entries_; }
  double normalization() const { return normalization_; }
  double p0() const { return p0_; }
  double r0() const { return r0_; }
  /// Heralded weight lost to the truncation of the input distributions.
  double tail_deficit() const { return tail_deficit_; }

  int max_n() const {
    int k = 0;
    for (const auto& e : entries_) k = std::max(k, e.n);
    return k;
  }
  int max_m() const {
    int k = 0;
    for (const auto& e : entries_) k = std::max(k, e.m);
    return k;
  }

  /// Weight of the (n, m) entry, 0 if absent.
  double weight(int n, int m) const {
    for (const auto& e : entries_) {
      if (e.n == n && e.m == m) return e.weight;
    }
    return 0.0;
  }

 private:
  std::vector<EnsembleEntry> entries_;
  double normalization_;
  double p0_;
  double r0_;
  double tail_deficit_;
};

inline ConditionalOutputEnsemble build_output_ensemble(const PhotonNumberDistribution& pA,
                                                       const PhotonNumberDistribution& rB) {
  const double p0 = pA.vacuum_overlap(), r0 = rB.vacuum_overlap();
  if (p0 * r0 >= 1.0) {
    throw std::domain_error("build_output_ensemble: both inputs are vacuum, heralding never succeeds");
  }
  const double norm = 1.0 / (1.0 - p0 * r0);
  std::vector<EnsembleEntry> entries;
  double total = 0.0;
  const auto& p = pA.weights();
  const auto& r = rB.weights();
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t m = 0; m < r.size(); ++m) {
      if (n == 0 && m == 0) continue;
      const double w = norm * p[n] * r[m];
      if (w <= 0.0) continue;
      total += w;
      entries.push_back({static_cast<int>(n), static_cast<int>(m), w,
                         BranchState::singlet(static_cast<int>(n), static_cast<int>(m))});
    }
  }
  const double deficit = std::max(0.0, 1.0 - total);
  const double bound = norm * (pA.tail_mass() + rB.tail_mass()) + tol::kPhysical;
  if (deficit > bound) {
    throw std::logic_error("build_output_ensemble: deficit exceeds the input tail bound");
  }
  return ConditionalOutputEnsemble(std::move(entries), norm, p0, r0, 1.0 - total);
}

struct TruncatedDensity {
  DensityOperator rho;
  /// 1 - Tr(rho): ensemble weight lying above the cutoff plus input tails.
  double deficit;
};

/// Dense rho_out on (A1, A2, B1, B2). Entries above `cutoff` are dropped; the
/// dropped weight must not exceed `max_deficit`.
inline TruncatedDensity ensemble_to_density(const ConditionalOutputEnsemble& ensemble, int cutoff,
                                            double max_deficit = constants::kDefaultTailEpsilon) {
  if (cutoff < 0) throw std::invalid_argument("ensemble_to_density: negative cutoff");
  FockSpace space = output_space(cutoff);
  auto d = static_cast<Eigen::Index>(space.dimension());
  Matrix m = Matrix::Zero(d, d);
  double included = 0.0;
  for (const auto& e : ensemble.entries()) {
    if (e.n > cutoff || e.m > cutoff) continue;
    included += e.weight;
    // At most four nonzero amplitudes; accumulate the outer product directly.
    std::array<std::pair<Eigen::Index, Complex>, 4> nz{};
    int count = 0;
    const auto& g = e.state.amplitudes();
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        if (g[a][b] == Complex(0.0)) continue;
        int occ[4] = {a == 0 ? e.n : 0, a == 0 ? 0 : e.n, b == 0 ? e.m : 0, b == 0 ? 0 : e.m};
        nz[count++] = {static_cast<Eigen::Index>(space.index(std::span<const int>(occ, 4))), g[a][b]};
      }
    }
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) {
        m(nz[i].first, nz[j].first) += e.weight * nz[i].second * std::conj(nz[j].second);
      }
    }
  }
  const double deficit = 1.0 - included;
  if (deficit > max_deficit) {
    throw std::domain_error("ensemble_to_density: cutoff " + std::to_string(cutoff) +
                            " drops weight " + std::to_string(deficit) + " above the allowed deficit");
  }
  return TruncatedDensity{DensityOperator(std::move(space), std::move(m)), deficit};
}

}  // namespace fockbell
