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

/// Dense linear algebra over labeled, truncated multi-mode Fock spaces.
///
/// Basis convention: a basis ket is an occupation tuple (n_0, ..., n_{k-1})
/// over the modes in label order, and its linear index is row-major with the
/// LAST mode varying fastest:
///
///     index = sum_k n_k * stride_k,   stride_{k-1} = 1,
///     stride_k = stride_{k+1} * (cutoff_{k+1} + 1).
///
/// Every routine here (tensor, partial trace, partial transpose, operator
/// embedding) relies on this layout.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fockbell {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace tol {
inline constexpr double kConstruction = 1e-12;
inline constexpr double kPhysical = 1e-10;
inline constexpr double kEntropyClamp = 1e-10;
inline constexpr double kEntropyReject = 1e-8;
}  // namespace tol

class FockSpace {
 public:
  FockSpace() = default;

  FockSpace(std::vector<std::string> labels, std::vector<int> cutoffs)
      : labels_(std::move(labels)), cutoffs_(std::move(cutoffs)) {
    if (labels_.size() != cutoffs_.size()) {
      throw std::invalid_argument("FockSpace: label/cutoff count mismatch");
    }
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      if (cutoffs_[k] < 0) {
        throw std::invalid_argument("FockSpace: negative cutoff for mode " + labels_[k]);
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (labels_[j] == labels_[k]) {
          throw std::invalid_argument("FockSpace: duplicate mode label " + labels_[k]);
        }
      }
    }
    strides_.assign(labels_.size(), 1);
    dimension_ = 1;
    for (std::size_t k = labels_.size(); k-- > 0;) {
      strides_[k] = dimension_;
      dimension_ *= static_cast<std::size_t>(cutoffs_[k]) + 1;
    }
  }

  /// All modes share one cutoff.
  static FockSpace uniform(std::vector<std::string> labels, int cutoff) {
    std::vector<int> cutoffs(labels.size(), cutoff);
    return FockSpace(std::move(labels), std::move(cutoffs));
  }

  std::size_t num_modes() const { return labels_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  std::size_t stride(std::size_t mode) const { return strides_.at(mode); }

  bool contains(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

  std::size_t mode_index(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
      throw std::invalid_argument("FockSpace: unknown mode label " + label);
    }
    return static_cast<std::size_t>(it - labels_.begin());
  }

  int cutoff(const std::string& label) const { return cutoffs_[mode_index(label)]; }

  std::size_t index(std::span<const int> occupation) const {
    if (occupation.size() != labels_.size()) {
      throw std::invalid_argument("FockSpace: occupation tuple has wrong length");
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < occupation.size(); ++k) {
      if (occupation[k] < 0 || occupation[k] > cutoffs_[k]) {
        throw std::out_of_range("FockSpace: occupation of mode " + labels_[k] +
                                " outside [0, cutoff]");
      }
      idx += static_cast<std::size_t>(occupation[k]) * strides_[k];
    }
    return idx;
  }

  std::size_t index(std::initializer_list<int> occupation) const {
    return index(std::span<const int>(occupation.begin(), occupation.size()));
  }

  std::vector<int> occupation(std::size_t idx) const {
    std::vector<int> occ(labels_.size());
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      occ[k] = static_cast<int>(idx / strides_[k]);
      idx %= strides_[k];
    }
    return occ;
  }

  /// Photon number of one mode in basis state `idx`.
  int occupation_of(std::size_t idx, std::size_t mode) const {
    return static_cast<int>((idx / strides_[mode]) % (static_cast<std::size_t>(cutoffs_[mode]) + 1));
  }

  /// Split every basis index into the part carried by `modes` and the rest.
  /// Since the index is linear in the occupations, index = inside + outside.
  void split_indices(const std::vector<std::size_t>& modes, std::vector<std::size_t>& inside,
                     std::vector<std::size_t>& outside) const {
    inside.assign(dimension_, 0);
    outside.assign(dimension_, 0);
    std::vector<bool> in_set(labels_.size(), false);
    for (auto m : modes) in_set[m] = true;
    for (std::size_t i = 0; i < dimension_; ++i) {
      std::size_t in = 0;
      for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (in_set[k]) in += static_cast<std::size_t>(occupation_of(i, k)) * strides_[k];
      }
      inside[i] = in;
      outside[i] = i - in;
    }
  }

  std::vector<std::size_t> mode_indices(const std::vector<std::string>& labels) const {
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (const auto& l : labels) {
      auto m = mode_index(l);
      if (std::find(out.begin(), out.end(), m) != out.end()) {
        throw std::invalid_argument("FockSpace: mode label listed twice: " + l);
      }
      out.push_back(m);
    }
    return out;
  }

  /// Sub-space over `labels`, kept in this space's mode order.
  FockSpace subspace(const std::vector<std::string>& labels) const {
    auto idx = mode_indices(labels);
    std::sort(idx.begin(), idx.end());
    std::vector<std::string> l;
    std::vector<int> c;
    for (auto m : idx) {
      l.push_back(labels_[m]);
      c.push_back(cutoffs_[m]);
    }
    return FockSpace(std::move(l), std::move(c));
  }

  friend bool operator==(const FockSpace& a, const FockSpace& b) {
    return a.labels_ == b.labels_ && a.cutoffs_ == b.cutoffs_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

/// Concatenates mode lists; rejects a label appearing in both.
inline FockSpace concat(const FockSpace& a, const FockSpace& b) {
  for (const auto& l : b.labels()) {
    if (a.contains(l)) throw std::invalid_argument("tensor: duplicate mode label " + l);
  }
  auto labels = a.labels();
  auto cutoffs = a.cutoffs();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  cutoffs.insert(cutoffs.end(), b.cutoffs().begin(), b.cutoffs().end());
  return FockSpace(std::move(labels), std::move(cutoffs));
}

namespace detail {

inline double max_hermitian_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline void require_dim(const FockSpace& space, Eigen::Index rows, Eigen::Index cols,
                        const char* what) {
  auto d = static_cast<Eigen::Index>(space.dimension());
  if (rows != d || cols != d) {
    throw std::invalid_argument(std::string(what) + ": matrix shape does not match space dimension");
  }
}

}  // namespace detail

class PureState {
 public:
  PureState(FockSpace space, Vector amplitudes)
      : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != space_.dimension()) {
      throw std::invalid_argument("PureState: amplitude count does not match space dimension");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > tol::kConstruction) {
      throw std::invalid_argument("PureState: amplitudes are not normalized");
    }
  }

  static PureState normalized(FockSpace space, Vector amplitudes) {
    double n = amplitudes.norm();
    if (n == 0.0) throw std::invalid_argument("PureState: cannot normalize the zero vector");
    amplitudes /= n;
    return PureState(std::move(space), std::move(amplitudes));
  }

  static PureState basis(FockSpace space, std::initializer_list<int> occupation) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    v(static_cast<Eigen::Index>(space.index(occupation))) = 1.0;
    return PureState(std::move(space), std::move(v));
  }

  static PureState vacuum(FockSpace space) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    v(0) = 1.0;
    return PureState(std::move(space), std::move(v));
  }

  const FockSpace& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  FockSpace space_;
  Vector amplitudes_;
};

/// Hermitian unit-trace-or-less operator. Partial transposes are also stored
/// here: they keep Hermiticity and trace but may lose positivity.
class DensityOperator {
 public:
  DensityOperator(FockSpace space, Matrix matrix)
      : space_(std::move(space)), matrix_(std::move(matrix)) {
    detail::require_dim(space_, matrix_.rows(), matrix_.cols(), "DensityOperator");
    if (detail::max_hermitian_defect(matrix_) > tol::kConstruction) {
      throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
    }
  }

  /// Also requires unit trace.
  static DensityOperator physical(FockSpace space, Matrix matrix) {
    DensityOperator rho(std::move(space), std::move(matrix));
    if (std::abs(rho.trace() - 1.0) > tol::kPhysical) {
      throw std::invalid_argument("DensityOperator: trace differs from 1");
    }
    return rho;
  }

  static DensityOperator from_pure(const PureState& psi) {
    const Vector& v = psi.amplitudes();
    return DensityOperator(psi.space(), v * v.adjoint());
  }

  static DensityOperator diagonal(FockSpace space, std::span<const double> weights) {
    if (weights.size() != space.dimension()) {
      throw std::invalid_argument("DensityOperator: weight count does not match dimension");
    }
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(weights.size()),
                            static_cast<Eigen::Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = weights[i];
    return DensityOperator(std::move(space), std::move(m));
  }

  const FockSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  double trace() const { return matrix_.trace().real(); }

 private:
  FockSpace space_;
  Matrix matrix_;
};

class LinearOperator {
 public:
  LinearOperator(FockSpace space, Matrix matrix)
      : space_(std::move(space)), matrix_(std::move(matrix)) {
    detail::require_dim(space_, matrix_.rows(), matrix_.cols(), "LinearOperator");
  }

  /// Checks U^dagger U = 1 within `tolerance`.
  static LinearOperator unitary(FockSpace space, Matrix matrix,
                                double tolerance = tol::kConstruction) {
    LinearOperator op(std::move(space), std::move(matrix));
    if (op.unitarity_defect() > tolerance) {
      throw std::invalid_argument("LinearOperator: matrix is not unitary");
    }
    return op;
  }

  static LinearOperator identity(FockSpace space) {
    auto d = static_cast<Eigen::Index>(space.dimension());
    return LinearOperator(std::move(space), Matrix::Identity(d, d));
  }

  const FockSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }

  double unitarity_defect() const {
    auto d = matrix_.rows();
    return (matrix_.adjoint() * matrix_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  }

  LinearOperator adjoint() const { return LinearOperator(space_, matrix_.adjoint()); }

  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
    if (!(a.space_ == b.space_)) throw std::invalid_argument("LinearOperator: space mismatch");
    return LinearOperator(a.space_, a.matrix_ * b.matrix_);
  }

  PureState apply(const PureState& psi) const {
    if (!(psi.space() == space_)) throw std::invalid_argument("LinearOperator: space mismatch");
    return PureState::normalized(space_, matrix_ * psi.amplitudes());
  }

  /// Unnormalized image, for projections and conditioning.
  Vector apply_raw(const Vector& v) const { return matrix_ * v; }

 private:
  FockSpace space_;
  Matrix matrix_;
};

template <class T>
concept SpaceMatrix = requires(const T& t) {
  { t.space() } -> std::convertible_to<const FockSpace&>;
  { t.matrix() } -> std::convertible_to<const Matrix&>;
};

inline PureState tensor(const std::vector<PureState>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor: empty operand list");
  FockSpace space = parts.front().space();
  Vector v = parts.front().amplitudes();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    space = concat(space, parts[k].space());
    v = detail::kron(v, parts[k].amplitudes());
  }
  return PureState::normalized(std::move(space), std::move(v));
}

inline DensityOperator tensor(const std::vector<DensityOperator>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor: empty operand list");
  FockSpace space = parts.front().space();
  Matrix m = parts.front().matrix();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    space = concat(space, parts[k].space());
    m = detail::kron(m, parts[k].matrix());
  }
  return DensityOperator(std::move(space), std::move(m));
}

inline LinearOperator tensor(const std::vector<LinearOperator>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor: empty operand list");
  FockSpace space = parts.front().space();
  Matrix m = parts.front().matrix();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    space = concat(space, parts[k].space());
    m = detail::kron(m, parts[k].matrix());
  }
  return LinearOperator(std::move(space), std::move(m));
}

/// Reduced state on `keep`; the result lists modes in the original order.
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<std::string>& keep) {
  const FockSpace& space = rho.space();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  auto keep_modes = space.mode_indices(keep);
  FockSpace reduced = space.subspace(keep);

  std::vector<std::size_t> inside, outside;
  space.split_indices(keep_modes, inside, outside);

  // Map the kept part of each full index onto the reduced basis.
  std::vector<std::size_t> reduced_index(space.dimension());
  std::vector<std::size_t> kept_sorted = keep_modes;
  std::sort(kept_sorted.begin(), kept_sorted.end());
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    std::size_t r = 0;
    for (std::size_t k = 0; k < kept_sorted.size(); ++k) {
      r += static_cast<std::size_t>(space.occupation_of(i, kept_sorted[k])) * reduced.stride(k);
    }
    reduced_index[i] = r;
  }

  // Group full indices by their traced-out part.
  std::vector<std::vector<std::size_t>> groups;
  {
    std::vector<std::size_t> order(space.dimension());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return outside[a] < outside[b]; });
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k == 0 || outside[order[k]] != outside[order[k - 1]]) groups.emplace_back();
      groups.back().push_back(order[k]);
    }
  }

  auto d = static_cast<Eigen::Index>(reduced.dimension());
  Matrix out = Matrix::Zero(d, d);
  const Matrix& m = rho.matrix();
  for (const auto& g : groups) {
    for (auto i : g) {
      for (auto j : g) {
        out(static_cast<Eigen::Index>(reduced_index[i]), static_cast<Eigen::Index>(reduced_index[j])) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityOperator(std::move(reduced), std::move(out));
}

/// Transposes the indices of `subsystem` only:
/// <a_k a_s| rho^T |b_k b_s> = <a_k b_s| rho |b_k a_s>.
inline DensityOperator partial_transpose(const DensityOperator& rho,
                                         const std::vector<std::string>& subsystem) {
  const FockSpace& space = rho.space();
  if (subsystem.empty() || subsystem.size() >= space.num_modes()) {
    throw std::invalid_argument("partial_transpose: subsystem must be a nonempty proper subset");
  }
  auto modes = space.mode_indices(subsystem);
  std::vector<std::size_t> inside, outside;
  space.split_indices(modes, inside, outside);

  const Matrix& m = rho.matrix();
  auto d = m.rows();
  Matrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      out(static_cast<Eigen::Index>(outside[ui] + inside[uj]),
          static_cast<Eigen::Index>(outside[uj] + inside[ui])) = m(i, j);
    }
  }
  return DensityOperator(space, std::move(out));
}

namespace detail {

/// Indices whose row is not identically zero. Zero rows of a Hermitian
/// matrix contribute exact zero eigenvalues and can be dropped.
inline std::vector<Eigen::Index> support(const Matrix& m) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m.row(i).cwiseAbs().maxCoeff() > 0.0) idx.push_back(i);
  }
  return idx;
}

}  // namespace detail

/// Ascending spectrum of a Hermitian matrix (symmetrized before solving).
inline std::vector<double> eigenvalues(const Matrix& m, double hermitian_tolerance = tol::kPhysical) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
  if (detail::max_hermitian_defect(m) > hermitian_tolerance) {
    throw std::invalid_argument("eigenvalues: operator is not Hermitian");
  }
  auto sup = detail::support(m);
  std::vector<double> out(static_cast<std::size_t>(m.rows()) - sup.size(), 0.0);
  if (!sup.empty()) {
    auto k = static_cast<Eigen::Index>(sup.size());
    Matrix r(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) r(a, b) = m(sup[a], sup[b]);
    }
    r = 0.5 * (r + r.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(r, Eigen::EigenvaluesOnly);
    for (Eigen::Index a = 0; a < k; ++a) out.push_back(solver.eigenvalues()(a));
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <SpaceMatrix Op>
std::vector<double> eigenvalues(const Op& op) {
  return eigenvalues(op.matrix());
}

inline double min_eigenvalue(const Matrix& m) { return eigenvalues(m).front(); }

template <SpaceMatrix Op>
double min_eigenvalue(const Op& op) {
  return min_eigenvalue(op.matrix());
}

namespace detail {
inline double real_checked(Complex z, const char* what) {
  if (std::abs(z.imag()) > tol::kConstruction) {
    throw std::domain_error(std::string(what) + ": expectation has a non-negligible imaginary part");
  }
  return z.real();
}
}  // namespace detail

/// <psi|M|psi>.
template <SpaceMatrix Op>
double expectation(const Op& op, const PureState& psi) {
  if (!(op.space() == psi.space())) throw std::invalid_argument("expectation: space mismatch");
  const Vector& v = psi.amplitudes();
  return detail::real_checked(v.dot(op.matrix() * v), "expectation");
}

/// Tr(M rho).
template <SpaceMatrix Op>
double expectation(const Op& op, const DensityOperator& rho) {
  if (!(op.space() == rho.space())) throw std::invalid_argument("expectation: space mismatch");
  Complex t = op.matrix().cwiseProduct(rho.matrix().transpose()).sum();
  return detail::real_checked(t, "expectation");
}

/// -sum lambda ln lambda, in nats.
inline double von_neumann_entropy(const DensityOperator& rho) {
  double s = 0.0;
  for (double lambda : eigenvalues(rho.matrix())) {
    if (lambda < -tol::kEntropyReject) {
      throw std::domain_error("von_neumann_entropy: negative eigenvalue, state is unphysical");
    }
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return std::max(s, 0.0);
}

/// Diagonal operator n_k on one mode.
inline LinearOperator number_operator(const FockSpace& space, const std::string& label) {
  auto mode = space.mode_index(label);
  auto d = static_cast<Eigen::Index>(space.dimension());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = space.occupation_of(static_cast<std::size_t>(i), mode);
  return LinearOperator(space, std::move(m));
}

/// Single-mode annihilation operator truncated at `cutoff`.
inline Matrix annihilation(int cutoff) {
  Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// exp(i t H) for Hermitian H, through its eigendecomposition.
inline Matrix exp_i_hermitian(const Matrix& h, double t) {
  if (detail::max_hermitian_defect(h) > tol::kConstruction) {
    throw std::invalid_argument("exp_i_hermitian: generator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()));
  const auto& lambda = solver.eigenvalues();
  Vector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) phases(k) = std::polar(1.0, t * lambda(k));
  const Matrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

/// Lifts an operator acting on `modes` (local basis in the listed order,
/// last fastest) to the full space, identity elsewhere.
inline Matrix embed(const FockSpace& space, const std::vector<std::string>& modes,
                    const Matrix& local) {
  auto idx = space.mode_indices(modes);
  std::size_t local_dim = 1;
  for (auto m : idx) local_dim *= static_cast<std::size_t>(space.cutoffs()[m]) + 1;
  if (static_cast<std::size_t>(local.rows()) != local_dim ||
      static_cast<std::size_t>(local.cols()) != local_dim) {
    throw std::invalid_argument("embed: local operator shape does not match the listed modes");
  }
  // Offset in the full index of each local basis state.
  std::vector<std::size_t> offset(local_dim, 0);
  std::vector<std::size_t> local_of_full(space.dimension(), 0);
  for (std::size_t l = 0; l < local_dim; ++l) {
    std::size_t rem = l, off = 0;
    for (std::size_t k = idx.size(); k-- > 0;) {
      auto c = static_cast<std::size_t>(space.cutoffs()[idx[k]]) + 1;
      off += (rem % c) * space.stride(idx[k]);
      rem /= c;
    }
    offset[l] = off;
  }
  std::vector<std::size_t> inside, outside;
  space.split_indices(idx, inside, outside);
  for (std::size_t l = 0; l < local_dim; ++l) {
    // inside[] of offset[l] is offset[l] itself.
    local_of_full[offset[l]] = l;
  }
  auto d = static_cast<Eigen::Index>(space.dimension());
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    std::size_t li = local_of_full[inside[i]];
    for (std::size_t lj = 0; lj < local_dim; ++lj) {
      Complex v = local(static_cast<Eigen::Index>(li), static_cast<Eigen::Index>(lj));
      if (v != Complex(0.0)) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(outside[i] + offset[lj])) = v;
      }
    }
  }
  return out;
}

}  // namespace fockbell
