// Copyright 2026 The dqdbus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex linear algebra over composite Hilbert spaces.
//
// Layout convention: subsystem 0 is the fastest-varying index of a composite
// basis state, so |q0 q1 ... q_{k-1}> has flat index q0 + d0*q1 + d0*d1*q2 ...
// For two qubits this orders the basis as {|00>, |10>, |01>, |11>}. In matrix
// terms the tensor product A0 (x) A1 (x) ... is kron(..., A1, A0).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dqdbus {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

namespace tolerance {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kNorm = 1e-9;
inline constexpr double kTrace = 1e-9;
inline constexpr double kPositivity = 1e-9;
}  // namespace tolerance

/// Largest entry modulus.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max |A - A^dagger|.
inline double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermiticity_error: matrix is not square");
  }
  return max_abs(m - m.adjoint());
}

/// max |U^dagger U - I|.
inline double unitarity_error(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) {
    throw std::invalid_argument("unitarity_error: matrix is not square");
  }
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

/// Max absolute row sum. Upper bound on the spectral norm of a Hermitian matrix.
inline double norm_bound(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Smallest eigenvalue of the Hermitian part of `m`.
inline double min_eigenvalue(const ComplexMatrix& m) {
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Hilbert space bookkeeping

class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<std::size_t> subsystem_dims)
      : dims_(std::move(subsystem_dims)) {
    if (dims_.empty()) {
      throw std::invalid_argument("HilbertSpace: at least one subsystem required");
    }
    for (std::size_t d : dims_) {
      if (d == 0) throw std::invalid_argument("HilbertSpace: subsystem dimension must be >= 1");
    }
  }

  /// n qubits followed by a cavity truncated at `photon_cutoff` photons.
  static HilbertSpace qubits_and_cavity(std::size_t n_qubits, std::size_t photon_cutoff) {
    std::vector<std::size_t> dims(n_qubits, 2);
    dims.push_back(photon_cutoff + 1);
    return HilbertSpace(std::move(dims));
  }

  static HilbertSpace qubits(std::size_t n_qubits) {
    return HilbertSpace(std::vector<std::size_t>(n_qubits, 2));
  }

  std::size_t subsystem_count() const { return dims_.size(); }
  std::size_t subsystem_dim(std::size_t i) const { return dims_.at(i); }
  std::span<const std::size_t> dims() const { return dims_; }

  std::size_t dimension() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>{});
  }

  /// Index stride of subsystem i in the flat basis.
  std::size_t stride(std::size_t i) const {
    std::size_t s = 1;
    for (std::size_t k = 0; k < i; ++k) s *= dims_.at(k);
    return s;
  }

  bool operator==(const HilbertSpace&) const = default;

 private:
  std::vector<std::size_t> dims_;
};

// ---------------------------------------------------------------------------
// Standard operators

namespace ops {

inline ComplexMatrix identity(std::size_t d) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

/// sigma^+ = |1><0|
inline ComplexMatrix sigma_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

/// sigma^- = |0><1|
inline ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

inline ComplexMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline ComplexMatrix sigma_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

/// diag(1, -1) in the {|0>, |1>} basis.
inline ComplexMatrix sigma_z() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

/// |1><1|
inline ComplexMatrix excited_projector() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

/// Truncated bosonic annihilation operator on {|0>, ..., |cutoff>}.
inline ComplexMatrix annihilation(std::size_t photon_cutoff) {
  const auto d = static_cast<Eigen::Index>(photon_cutoff + 1);
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline ComplexMatrix number(std::size_t photon_cutoff) {
  const auto d = static_cast<Eigen::Index>(photon_cutoff + 1);
  ComplexMatrix n = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

}  // namespace ops

// ---------------------------------------------------------------------------
// Tensor products

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Tensor product of per-subsystem factors, factors[0] acting on subsystem 0.
inline ComplexMatrix tensor(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: no factors");
  ComplexMatrix out = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(factors[k], out);
  return out;
}

inline ComplexMatrix tensor(std::initializer_list<ComplexMatrix> factors) {
  return tensor(std::span<const ComplexMatrix>(factors.begin(), factors.size()));
}

/// `op` on subsystem `at`, identity elsewhere.
inline ComplexMatrix embed(const ComplexMatrix& op, std::size_t at, const HilbertSpace& space) {
  if (at >= space.subsystem_count()) {
    throw std::invalid_argument("embed: subsystem index " + std::to_string(at) +
                                " out of range");
  }
  const auto d = static_cast<Eigen::Index>(space.subsystem_dim(at));
  if (op.rows() != d || op.cols() != d) {
    throw std::invalid_argument("embed: operator is " + std::to_string(op.rows()) + "x" +
                                std::to_string(op.cols()) + ", subsystem " +
                                std::to_string(at) + " has dimension " + std::to_string(d));
  }
  const std::size_t low = space.stride(at);
  const std::size_t high = space.dimension() / (low * space.subsystem_dim(at));
  return kron(ops::identity(high), kron(op, ops::identity(low)));
}

// ---------------------------------------------------------------------------
// Propagator

/// U(t) = exp(-i t H) for Hermitian H, via eigendecomposition.
inline ComplexMatrix expm_propagator(const ComplexMatrix& h, double t) {
  if (h.rows() != h.cols()) throw std::invalid_argument("expm_propagator: matrix is not square");
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_error(h) > tolerance::kHermitian * scale) {
    throw std::invalid_argument("expm_propagator: generator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const ComplexMatrix& v = solver.eigenvectors();
  ComplexVector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    phases(k) = std::exp(-kI * (solver.eigenvalues()(k) * t));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

// ---------------------------------------------------------------------------
// States

class PureState {
 public:
  PureState(HilbertSpace space, ComplexVector amplitudes)
      : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != space_.dimension()) {
      throw std::invalid_argument("PureState: amplitude count does not match space dimension");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > tolerance::kNorm) {
      throw std::invalid_argument("PureState: amplitudes are not normalized");
    }
  }

  static PureState basis(HilbertSpace space, std::size_t index) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(space.dimension()));
    if (index >= space.dimension()) throw std::invalid_argument("PureState::basis: index out of range");
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(space), std::move(v));
  }

  /// Product basis state with per-subsystem levels.
  static PureState product(HilbertSpace space, std::span<const std::size_t> levels) {
    if (levels.size() != space.subsystem_count()) {
      throw std::invalid_argument("PureState::product: one level per subsystem required");
    }
    std::size_t index = 0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (levels[k] >= space.subsystem_dim(k)) {
        throw std::invalid_argument("PureState::product: level out of range");
      }
      index += levels[k] * space.stride(k);
    }
    return basis(std::move(space), index);
  }

  const HilbertSpace& space() const { return space_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  HilbertSpace space_;
  ComplexVector amplitudes_;
};

class DensityMatrix {
 public:
  DensityMatrix(HilbertSpace space, ComplexMatrix matrix)
      : space_(std::move(space)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(space_.dimension());
    if (matrix_.rows() != d || matrix_.cols() != d) {
      throw std::invalid_argument("DensityMatrix: matrix does not match space dimension");
    }
    if (hermiticity_error(matrix_) > tolerance::kHermitian) {
      throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - 1.0) > tolerance::kTrace) {
      throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
    if (min_eigenvalue(matrix_) < -tolerance::kPositivity) {
      throw std::invalid_argument("DensityMatrix: matrix has a negative eigenvalue");
    }
  }

  explicit DensityMatrix(const PureState& psi)
      : space_(psi.space()), matrix_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

  const HilbertSpace& space() const { return space_; }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  HilbertSpace space_;
  ComplexMatrix matrix_;
};

// ---------------------------------------------------------------------------
// Partial trace

/// Reduced operator on the subsystems in `keep` (kept in ascending order).
/// Works on any square operator over `space`, not only valid states.
inline ComplexMatrix partial_trace(const ComplexMatrix& op, const HilbertSpace& space,
                                   std::vector<std::size_t> keep) {
  const std::size_t n_sub = space.subsystem_count();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw std::invalid_argument("partial_trace: duplicate subsystem index");
  }
  if (keep.back() >= n_sub) throw std::invalid_argument("partial_trace: subsystem index out of range");
  const auto full = static_cast<Eigen::Index>(space.dimension());
  if (op.rows() != full || op.cols() != full) {
    throw std::invalid_argument("partial_trace: operator does not match space dimension");
  }

  std::vector<bool> kept(n_sub, false);
  for (std::size_t k : keep) kept[k] = true;

  // Map each flat index to (kept index, traced index).
  std::vector<std::size_t> kept_idx(static_cast<std::size_t>(full));
  std::vector<std::size_t> traced_idx(static_cast<std::size_t>(full));
  std::size_t reduced_dim = 1;
  for (std::size_t k : keep) reduced_dim *= space.subsystem_dim(k);
  for (std::size_t flat = 0; flat < static_cast<std::size_t>(full); ++flat) {
    std::size_t rest = flat, ki = 0, ti = 0, kstride = 1, tstride = 1;
    for (std::size_t s = 0; s < n_sub; ++s) {
      const std::size_t d = space.subsystem_dim(s);
      const std::size_t digit = rest % d;
      rest /= d;
      if (kept[s]) {
        ki += digit * kstride;
        kstride *= d;
      } else {
        ti += digit * tstride;
        tstride *= d;
      }
    }
    kept_idx[flat] = ki;
    traced_idx[flat] = ti;
  }

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(reduced_dim),
                                          static_cast<Eigen::Index>(reduced_dim));
  for (Eigen::Index r = 0; r < full; ++r) {
    for (Eigen::Index c = 0; c < full; ++c) {
      if (traced_idx[static_cast<std::size_t>(r)] == traced_idx[static_cast<std::size_t>(c)]) {
        out(static_cast<Eigen::Index>(kept_idx[static_cast<std::size_t>(r)]),
            static_cast<Eigen::Index>(kept_idx[static_cast<std::size_t>(c)])) += op(r, c);
      }
    }
  }
  return out;
}

inline HilbertSpace subspace(const HilbertSpace& space, std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  std::vector<std::size_t> dims;
  for (std::size_t k : keep) dims.push_back(space.subsystem_dim(k));
  return HilbertSpace(std::move(dims));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
  ComplexMatrix reduced = partial_trace(rho.matrix(), rho.space(), keep);
  return DensityMatrix(subspace(rho.space(), std::move(keep)), std::move(reduced));
}

// ---------------------------------------------------------------------------
// Figures of merit

/// <target| rho |target>, for raw matrices and vectors.
inline double overlap_expectation(const ComplexMatrix& rho, const ComplexVector& target) {
  if (rho.rows() != target.size() || rho.cols() != target.size()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return (target.adjoint() * rho * target)(0, 0).real();
}

inline double fidelity(const PureState& state, const PureState& target) {
  if (!(state.space() == target.space())) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::clamp(std::norm(target.amplitudes().dot(state.amplitudes())), 0.0, 1.0);
}

inline double fidelity(const DensityMatrix& state, const PureState& target) {
  if (!(state.space() == target.space())) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::clamp(overlap_expectation(state.matrix(), target.amplitudes()), 0.0, 1.0);
}

/// Wootters concurrence of a two-qubit state.
inline double concurrence(const DensityMatrix& rho) {
  if (!(rho.space() == HilbertSpace::qubits(2))) {
    throw std::invalid_argument("concurrence: two-qubit density matrix required");
  }
  // With rho = W W^dag (columns sqrt(p_k) v_k), the square roots of the eigenvalues of
  // rho (sy sy) rho* (sy sy) are the singular values of W^T (sy sy) W. Taking them
  // directly avoids the square root of eigenvalues near zero.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> rho_eig(rho.matrix());
  ComplexMatrix w = rho_eig.eigenvectors();
  for (Eigen::Index k = 0; k < 4; ++k) {
    double p = rho_eig.eigenvalues()(k);
    if (p < 0.0) {
      if (p < -tolerance::kPositivity) throw std::invalid_argument("concurrence: invalid density matrix");
      p = 0.0;
    }
    w.col(k) *= std::sqrt(p);
  }
  const ComplexMatrix yy = kron(ops::sigma_y(), ops::sigma_y());
  const ComplexMatrix tau = w.transpose() * yy * w;
  const Eigen::VectorXd lambdas = Eigen::JacobiSVD<ComplexMatrix>(tau).singularValues();  // descending
  return std::clamp(lambdas(0) - lambdas(1) - lambdas(2) - lambdas(3), 0.0, 1.0);
}

}  // namespace dqdbus
