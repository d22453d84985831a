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

/// Partial-transposition certificates for the heralded state.
///
/// The bipartition is A = (A1, A2) versus B = (B1, B2); transposition acts on B.
/// Entropies are in nats.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fockbell/entangler.hpp"
#include "fockbell/fock_space.hpp"
#include "fockbell/photon_statistics.hpp"

namespace fockbell {

inline const std::vector<std::string>& subsystem_a_labels() {
  static const std::vector<std::string> l{"A1", "A2"};
  return l;
}

inline const std::vector<std::string>& subsystem_b_labels() {
  static const std::vector<std::string> l{"B1", "B2"};
  return l;
}

struct WitnessReport {
  int m = 0;
  int n = 0;
  double analytic_value = 0.0;
  double numeric_value = 0.0;
  double min_pt_eigenvalue = 0.0;
  bool entangled = false;
  int cutoff = 0;
  double tail_deficit = 0.0;
};

namespace detail {
inline void check_witness_indices(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("witness: m and n must both be >= 1");
}
}  // namespace detail

/// -N p_m r_n / 2, read off the ensemble (whose (m, n) weight is N p_m r_n).
inline double witness_value_analytic(const ConditionalOutputEnsemble& ensemble, int m, int n) {
  detail::check_witness_indices(m, n);
  return -ensemble.weight(m, n) / 2.0;
}

/// Same value from the input distributions, with N = 1/(1 - p0 r0).
inline double witness_value_analytic(const PhotonNumberDistribution& pA,
                                     const PhotonNumberDistribution& rB, int m, int n) {
  detail::check_witness_indices(m, n);
  const double norm = 1.0 / (1.0 - pA.vacuum_overlap() * rB.vacuum_overlap());
  return -norm * pA[static_cast<std::size_t>(m)] * rB[static_cast<std::size_t>(n)] / 2.0;
}

/// (|0,m,0,n> + |m,0,n,0>)/sqrt 2 on (A1, A2, B1, B2).
inline PureState witness_vector(int m, int n, int cutoff) {
  detail::check_witness_indices(m, n);
  if (m > cutoff || n > cutoff) throw std::invalid_argument("witness_vector: cutoff below m or n");
  FockSpace space = output_space(cutoff);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
  const double h = 1.0 / std::numbers::sqrt2;
  v(static_cast<Eigen::Index>(space.index({0, m, 0, n}))) = h;
  v(static_cast<Eigen::Index>(space.index({m, 0, n, 0}))) = h;
  return PureState(std::move(space), std::move(v));
}

/// Dense rho_out and its partial transpose at one cutoff. Truncation is
/// allowed here: the witness expectation only involves entries with indices
/// <= cutoff, and the dropped weight is reported.
class WitnessWorkspace {
 public:
  WitnessWorkspace(const ConditionalOutputEnsemble& ensemble, int cutoff)
      : cutoff_(cutoff),
        density_(ensemble_to_density(ensemble, cutoff, 1.0)),
        transposed_(partial_transpose(density_.rho, subsystem_b_labels())) {}

  int cutoff() const { return cutoff_; }
  double tail_deficit() const { return density_.deficit; }
  const DensityOperator& density() const { return density_.rho; }
  const DensityOperator& transposed() const { return transposed_; }

  double numeric_value(int m, int n) const {
    detail::check_witness_indices(m, n);
    if (m > cutoff_ || n > cutoff_) {
      throw std::invalid_argument("witness_value_numeric: cutoff " + std::to_string(cutoff_) +
                                  " cannot represent (m, n)");
    }
    return expectation(transposed_, witness_vector(m, n, cutoff_));
  }

  double min_pt_eigenvalue() const {
    if (!min_eig_computed_) {
      min_eig_ = min_eigenvalue(transposed_);
      min_eig_computed_ = true;
    }
    return min_eig_;
  }

 private:
  int cutoff_;
  TruncatedDensity density_;
  DensityOperator transposed_;
  mutable bool min_eig_computed_ = false;
  mutable double min_eig_ = 0.0;
};

inline double witness_value_numeric(const ConditionalOutputEnsemble& ensemble, int m, int n,
                                    int cutoff) {
  detail::check_witness_indices(m, n);
  if (m > cutoff || n > cutoff) {
    throw std::invalid_argument("witness_value_numeric: cutoff insufficient for (m, n)");
  }
  return WitnessWorkspace(ensemble, cutoff).numeric_value(m, n);
}

inline WitnessReport witness_report(const WitnessWorkspace& ws,
                                    const ConditionalOutputEnsemble& ensemble, int m, int n) {
  WitnessReport r;
  r.m = m;
  r.n = n;
  r.analytic_value = witness_value_analytic(ensemble, m, n);
  r.numeric_value = ws.numeric_value(m, n);
  r.min_pt_eigenvalue = ws.min_pt_eigenvalue();
  r.entangled = r.numeric_value < 0.0 || r.min_pt_eigenvalue < -tol::kPhysical;
  r.cutoff = ws.cutoff();
  r.tail_deficit = ws.tail_deficit();
  return r;
}

inline WitnessReport witness_report(const ConditionalOutputEnsemble& ensemble, int m, int n,
                                    int cutoff) {
  return witness_report(WitnessWorkspace(ensemble, cutoff), ensemble, m, n);
}

/// True when some (m, n) in [1, cutoff]^2 gives a negative witness value.
inline bool certify_entanglement(const ConditionalOutputEnsemble& ensemble, int cutoff) {
  WitnessWorkspace ws(ensemble, cutoff);
  for (int m = 1; m <= cutoff; ++m) {
    for (int n = 1; n <= cutoff; ++n) {
      if (ws.numeric_value(m, n) < 0.0) return true;
    }
  }
  return false;
}

struct ConditionalEntropy {
  /// S(rho'_A) - S(rho_out), nats.
  double value;
  double reduced_entropy;
  double total_entropy;
  /// Weight dropped by the cutoff before renormalization.
  double tail_deficit;
};

/// Entropy difference of the truncated, renormalized output state and its
/// reduction to system A.
inline ConditionalEntropy conditional_entropy(const ConditionalOutputEnsemble& ensemble, int cutoff,
                                              double max_deficit = constants::kDefaultTailEpsilon) {
  auto truncated = ensemble_to_density(ensemble, cutoff, max_deficit);
  const double trace = truncated.rho.trace();
  DensityOperator rho = DensityOperator::physical(truncated.rho.space(), truncated.rho.matrix() / trace);
  truncated.rho = DensityOperator(output_space(0), Matrix::Identity(1, 1));  // release memory
  const double s_total = von_neumann_entropy(rho);
  const double s_a = von_neumann_entropy(partial_trace(rho, subsystem_a_labels()));
  return ConditionalEntropy{s_a - s_total, s_a, s_total, truncated.deficit};
}

}  // namespace fockbell
