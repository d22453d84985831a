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

/// Dense unitary model of the entangling device.
///
/// Six modes: the two arms CL, CR of the central single-photon interferometer
/// (cutoff 1) and the signal modes A1, A2, B1, B2. A photon in CL flips
/// A1 <-> A2, a photon in CR flips B1 <-> B2, each through
/// BS^dagger * Kerr(pi) * BS. The central interferometer uses balanced
/// splitters with amplitude reflectivity i/sqrt(2) at both ends; the photon
/// enters through CR, D+ sits behind CL and D- behind CR.
///
/// This backend is a cross-check for the compact ensemble and is kept to
/// small cutoffs: the dimension is 4 (cutoff+1)^4.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockbell/entangler.hpp"
#include "fockbell/fock_space.hpp"

namespace fockbell {

inline constexpr int kMaxOracleCutoff = 4;

namespace detail {

inline void require_pair(const FockSpace& space, const std::string& m1, const std::string& m2,
                         const char* what) {
  if (m1 == m2) throw std::invalid_argument(std::string(what) + ": modes must be distinct");
  if (space.cutoff(m1) != space.cutoff(m2)) {
    throw std::invalid_argument(std::string(what) + ": modes " + m1 + " and " + m2 +
                                " have unequal cutoffs");
  }
}

/// Embedding preserves unitarity, so only the local block is checked.
inline Matrix checked_local_unitary(Matrix local, const char* what) {
  const auto d = local.rows();
  if ((local.adjoint() * local - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::kConstruction) {
    throw std::logic_error(std::string(what) + ": local block is not unitary");
  }
  return local;
}

/// Local two-mode ladder operators, mode 1 slow, mode 2 fast.
inline std::pair<Matrix, Matrix> two_mode_ladders(int cutoff) {
  Matrix a = annihilation(cutoff);
  Matrix id = Matrix::Identity(cutoff + 1, cutoff + 1);
  return {kron(a, id), kron(id, a)};
}

}  // namespace detail

/// exp[(pi/4)(a2^dag a1 - a1^dag a2)]: a1^dag -> (a1^dag + a2^dag)/sqrt 2.
inline LinearOperator beamsplitter_unitary(const FockSpace& space, const std::string& mode1,
                                           const std::string& mode2) {
  detail::require_pair(space, mode1, mode2, "beamsplitter_unitary");
  auto [a1, a2] = detail::two_mode_ladders(space.cutoff(mode1));
  Matrix generator = a2.adjoint() * a1 - a1.adjoint() * a2;  // anti-Hermitian
  // exp((pi/4) G) = exp(i (pi/4) H) with H = -i G.
  Matrix local = detail::checked_local_unitary(
      exp_i_hermitian(Complex(0.0, -1.0) * generator, std::numbers::pi / 4.0), "beamsplitter_unitary");
  return LinearOperator(space, embed(space, {mode1, mode2}, local));
}

/// Balanced splitter with transmission 1/sqrt 2 and reflection i/sqrt 2:
/// exp[i(pi/4)(a1^dag a2 + a2^dag a1)].
inline LinearOperator symmetric_beamsplitter_unitary(const FockSpace& space,
                                                     const std::string& mode1,
                                                     const std::string& mode2) {
  detail::require_pair(space, mode1, mode2, "symmetric_beamsplitter_unitary");
  auto [a1, a2] = detail::two_mode_ladders(space.cutoff(mode1));
  Matrix h = a1.adjoint() * a2 + a2.adjoint() * a1;
  Matrix local = detail::checked_local_unitary(exp_i_hermitian(h, std::numbers::pi / 4.0),
                                               "symmetric_beamsplitter_unitary");
  return LinearOperator(space, embed(space, {mode1, mode2}, local));
}

/// Cross-Kerr phase exp(i phase n_c n_t); phase = pi is the flip setting.
inline LinearOperator kerr_unitary(const FockSpace& space, const std::string& control,
                                   const std::string& target, double phase = std::numbers::pi) {
  if (control == target) throw std::invalid_argument("kerr_unitary: modes must be distinct");
  auto c = space.mode_index(control), t = space.mode_index(target);
  auto d = static_cast<Eigen::Index>(space.dimension());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    auto idx = static_cast<std::size_t>(i);
    double nc = space.occupation_of(idx, c), nt = space.occupation_of(idx, t);
    m(i, i) = std::polar(1.0, phase * nc * nt);
  }
  return LinearOperator(space, std::move(m));
}

/// BS^dagger Kerr(arm, i1) BS on (i1, i2): with one photon in `arm_mode`
/// |n,0> -> |0,n>, with none the pair is untouched.
inline LinearOperator device_unitary(const FockSpace& space, const std::string& arm_mode,
                                     const std::string& i1_mode, const std::string& i2_mode,
                                     double kerr_phase = std::numbers::pi) {
  if (arm_mode == i1_mode || arm_mode == i2_mode) {
    throw std::invalid_argument("device_unitary: arm mode must differ from the signal modes");
  }
  if (space.cutoff(arm_mode) < 1) throw std::invalid_argument("device_unitary: arm cutoff must be >= 1");
  auto bs = beamsplitter_unitary(space, i1_mode, i2_mode);
  const Vector kerr = kerr_unitary(space, arm_mode, i1_mode, kerr_phase).matrix().diagonal();
  Matrix m = bs.matrix().adjoint() * (kerr.asDiagonal() * bs.matrix());
  return LinearOperator(space, std::move(m));
}

/// Six-mode space of the device at a given signal cutoff.
inline FockSpace device_space(int cutoff) {
  if (cutoff < 0 || cutoff > kMaxOracleCutoff) {
    throw std::invalid_argument("device oracle: cutoff must lie in [0, " +
                                std::to_string(kMaxOracleCutoff) + "]");
  }
  return FockSpace({"CL", "CR", "A1", "A2", "B1", "B2"}, {1, 1, cutoff, cutoff, cutoff, cutoff});
}

/// The stages of the device in application order.
struct DeviceChain {
  LinearOperator input_splitter;
  LinearOperator flip_a;
  LinearOperator flip_b;
  LinearOperator output_splitter;

  LinearOperator total() const { return output_splitter * flip_b * flip_a * input_splitter; }
};

inline DeviceChain device_chain(int cutoff, double kerr_phase = std::numbers::pi) {
  FockSpace space = device_space(cutoff);
  return DeviceChain{symmetric_beamsplitter_unitary(space, "CL", "CR"),
                     device_unitary(space, "CL", "A1", "A2", kerr_phase),
                     device_unitary(space, "CR", "B1", "B2", kerr_phase),
                     symmetric_beamsplitter_unitary(space, "CL", "CR")};
}

enum class Detector { plus, minus };

inline std::string_view to_string(Detector d) { return d == Detector::plus ? "D_plus" : "D_minus"; }

struct DeviceRunRecord {
  Detector detector;
  double probability;
  /// Conditional state of (A1, A2, B1, B2); empty when the detector never fires.
  std::optional<PureState> post_state;
  int input_n;
  int input_m;
};

struct DeviceOracleRun {
  /// State after both flip stages, before the output splitter.
  PureState intermediate;
  DeviceRunRecord plus;
  DeviceRunRecord minus;
};

/// |<a|b>|^2, insensitive to global phase.
inline double fidelity(const PureState& a, const PureState& b) {
  if (!(a.space() == b.space())) throw std::invalid_argument("fidelity: space mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Feeds |n>_{A1}|0>_{A2}|m>_{B1}|0>_{B2} and one photon in CR through the
/// device and conditions on each detector.
/// Reuses a prebuilt chain; building one dominates the cost.
inline DeviceOracleRun run_device_oracle(const DeviceChain& chain, int n, int m) {
  const FockSpace& space = chain.input_splitter.space();
  const int cutoff = space.cutoff("A1");
  if (n < 0 || m < 0 || n > cutoff || m > cutoff) {
    throw std::invalid_argument("run_device_oracle: photon numbers must lie in [0, cutoff]");
  }

  Vector psi = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
  psi(static_cast<Eigen::Index>(space.index({0, 1, n, 0, m, 0}))) = 1.0;
  psi = chain.input_splitter.apply_raw(psi);
  psi = chain.flip_a.apply_raw(psi);
  psi = chain.flip_b.apply_raw(psi);
  PureState intermediate = PureState::normalized(space, psi);
  psi = chain.output_splitter.apply_raw(psi);

  const FockSpace out = output_space(cutoff);
  auto condition = [&](Detector det, int cl, int cr) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(out.dimension()));
    for (std::size_t k = 0; k < out.dimension(); ++k) {
      auto occ = out.occupation(k);
      std::size_t full = space.index({cl, cr, occ[0], occ[1], occ[2], occ[3]});
      v(static_cast<Eigen::Index>(k)) = psi(static_cast<Eigen::Index>(full));
    }
    const double w = v.squaredNorm();
    std::optional<PureState> post;
    if (w > tol::kConstruction) post = PureState::normalized(out, v);
    return DeviceRunRecord{det, w, std::move(post), n, m};
  };
  return DeviceOracleRun{std::move(intermediate), condition(Detector::plus, 1, 0),
                         condition(Detector::minus, 0, 1)};
}

inline DeviceOracleRun run_device_oracle(int n, int m, int cutoff,
                                         double kerr_phase = std::numbers::pi) {
  if (n < 0 || m < 0 || n > cutoff || m > cutoff) {
    throw std::invalid_argument("run_device_oracle: photon numbers must lie in [0, cutoff]");
  }
  return run_device_oracle(device_chain(cutoff, kerr_phase), n, m);
}

/// Reference state after the flip stages:
/// (|0,1>|n,0,0,m> + i|1,0>|0,n,m,0>)/sqrt 2 on the six-mode space.
inline PureState expected_intermediate(int n, int m, int cutoff) {
  FockSpace space = device_space(cutoff);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
  const double h = 1.0 / std::numbers::sqrt2;
  v(static_cast<Eigen::Index>(space.index({0, 1, n, 0, 0, m}))) += h;
  v(static_cast<Eigen::Index>(space.index({1, 0, 0, n, m, 0}))) += Complex(0.0, h);
  return PureState::normalized(std::move(space), std::move(v));
}

}  // namespace fockbell
