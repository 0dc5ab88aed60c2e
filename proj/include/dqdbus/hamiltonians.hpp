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

// Hamiltonian builders. Subsystem order is [qubit 0, ..., qubit n-1, cavity];
// all energies are angular frequencies (hbar = 1).

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqdbus/algebra.hpp"
#include "dqdbus/device.hpp"

namespace dqdbus {

inline constexpr std::size_t kDefaultPhotonCutoff = 5;
inline constexpr double kDefaultDispersiveThreshold = 5.0;

struct ModelParams {
  std::size_t n_qubits = 2;
  std::vector<double> couplings_g;    // rad/s
  std::vector<double> detunings_tau;  // rad/s
  std::size_t photon_cutoff = kDefaultPhotonCutoff;
  double dispersive_threshold = kDefaultDispersiveThreshold;

  static ModelParams identical(std::size_t n, double g, double tau,
                               std::size_t photon_cutoff = kDefaultPhotonCutoff) {
    ModelParams p;
    p.n_qubits = n;
    p.couplings_g.assign(n, g);
    p.detunings_tau.assign(n, tau);
    p.photon_cutoff = photon_cutoff;
    return p;
  }

  void validate() const {
    if (n_qubits == 0) throw std::invalid_argument("ModelParams: n_qubits must be >= 1");
    if (couplings_g.size() != n_qubits || detunings_tau.size() != n_qubits) {
      throw std::invalid_argument("ModelParams: coupling and detuning lists must have n_qubits entries");
    }
    if (photon_cutoff < 1) throw std::invalid_argument("ModelParams: photon_cutoff must be >= 1");
    for (std::size_t j = 0; j < n_qubits; ++j) {
      if (!(couplings_g[j] >= 0.0) || !std::isfinite(couplings_g[j])) {
        throw std::invalid_argument("ModelParams: coupling g[" + std::to_string(j) + "] must be >= 0");
      }
      if (!(std::abs(detunings_tau[j]) > 0.0)) {
        throw std::invalid_argument("ModelParams: detuning tau[" + std::to_string(j) + "] must be nonzero");
      }
    }
  }

  /// min_j |tau_j| / g_j >= threshold. Uncoupled qubits (g = 0) impose no constraint.
  bool is_dispersive() const {
    for (std::size_t j = 0; j < n_qubits; ++j) {
      if (couplings_g[j] > 0.0 && std::abs(detunings_tau[j]) / couplings_g[j] < dispersive_threshold) {
        return false;
      }
    }
    return true;
  }

  /// lambda = g^2 / tau when all couplings and detunings coincide.
  std::optional<double> lambda() const {
    if (couplings_g.empty() || detunings_tau.empty()) return std::nullopt;
    for (std::size_t j = 1; j < n_qubits; ++j) {
      if (couplings_g[j] != couplings_g[0] || detunings_tau[j] != detunings_tau[0]) return std::nullopt;
    }
    return couplings_g[0] * couplings_g[0] / detunings_tau[0];
  }

  HilbertSpace space() const { return HilbertSpace::qubits_and_cavity(n_qubits, photon_cutoff); }

  bool operator==(const ModelParams&) const = default;
};

/// diag(0, omega, ..., N omega)
inline ComplexMatrix h_cavity(double omega, std::size_t photon_cutoff) {
  if (photon_cutoff < 1) throw std::invalid_argument("h_cavity: photon cutoff must be >= 1");
  return omega * ops::number(photon_cutoff);
}

/// Three-level double-dot Hamiltonian in the basis {(1,1)T0, (1,1)S, (0,2)S}.
/// Entries carry the energy unit of `dot`.
inline ComplexMatrix h_double_dot(const DotParams& dot) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = dot.triplet_energy_ET;
  h(1, 1) = dot.singlet_energy_ES;
  h(2, 2) = -dot.bias_epsilon;
  h(1, 2) = dot.tunneling_Tc;
  h(2, 1) = dot.tunneling_Tc;
  return h;
}

/// Interaction-picture Hamiltonian of n qubits coupled to one cavity mode:
///   H(t) = sum_j g_j (e^{-i tau_j t} a^dag sigma_j^- + e^{i tau_j t} a sigma_j^+).
/// Keeps the embedded operators so repeated evaluation only rescales phases.
class InteractionHamiltonian {
 public:
  explicit InteractionHamiltonian(const ModelParams& p) : taus_(p.detunings_tau) {
    p.validate();
    const HilbertSpace space = p.space();
    const ComplexMatrix a_dag = embed(ops::annihilation(p.photon_cutoff), p.n_qubits, space).adjoint();
    for (std::size_t j = 0; j < p.n_qubits; ++j) {
      lowering_terms_.push_back(p.couplings_g[j] * a_dag * embed(ops::sigma_minus(), j, space));
    }
    dim_ = static_cast<Eigen::Index>(space.dimension());
  }

  ComplexMatrix operator()(double t) const {
    ComplexMatrix half = ComplexMatrix::Zero(dim_, dim_);
    for (std::size_t j = 0; j < lowering_terms_.size(); ++j) {
      half += std::exp(-kI * (taus_[j] * t)) * lowering_terms_[j];
    }
    return half + half.adjoint();
  }

 private:
  std::vector<double> taus_;
  std::vector<ComplexMatrix> lowering_terms_;
  Eigen::Index dim_ = 0;
};

inline ComplexMatrix h_interaction(double t, const ModelParams& p) {
  return InteractionHamiltonian(p)(t);
}

/// Dispersive effective Hamiltonian
///   lambda * sum_{i,j} (sigma_j^+ sigma_i^- a a^dag - sigma_j^- sigma_i^+ a^dag a),
/// including the i = j Stark-shift terms.
inline ComplexMatrix h_effective(const ModelParams& p) {
  p.validate();
  const auto lam = p.lambda();
  if (!lam) throw std::invalid_argument("h_effective: identical couplings and detunings required");
  if (!p.is_dispersive()) {
    throw std::invalid_argument("h_effective: parameters are outside the dispersive regime (tau/g < " +
                                std::to_string(p.dispersive_threshold) + ")");
  }
  const HilbertSpace space = p.space();
  const ComplexMatrix a = embed(ops::annihilation(p.photon_cutoff), p.n_qubits, space);
  const ComplexMatrix a_adag = a * a.adjoint();
  const ComplexMatrix adag_a = a.adjoint() * a;

  std::vector<ComplexMatrix> plus, minus;
  for (std::size_t j = 0; j < p.n_qubits; ++j) {
    plus.push_back(embed(ops::sigma_plus(), j, space));
    minus.push_back(embed(ops::sigma_minus(), j, space));
  }
  const auto d = static_cast<Eigen::Index>(space.dimension());
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < p.n_qubits; ++i) {
    for (std::size_t j = 0; j < p.n_qubits; ++j) {
      h += plus[j] * minus[i] * a_adag - minus[j] * plus[i] * adag_a;
    }
  }
  return *lam * h;
}

/// lambda [ sum_j |1><1|_j + sigma_1^+ sigma_2^- + sigma_1^- sigma_2^+ ] on two qubits,
/// basis {|00>, |10>, |01>, |11>}.
inline ComplexMatrix h_reduced_two_qubit(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("h_reduced_two_qubit: lambda must be finite and >= 0");
  }
  const HilbertSpace space = HilbertSpace::qubits(2);
  const ComplexMatrix stark = embed(ops::excited_projector(), 0, space) + embed(ops::excited_projector(), 1, space);
  const ComplexMatrix exchange =
      embed(ops::sigma_plus(), 0, space) * embed(ops::sigma_minus(), 1, space) +
      embed(ops::sigma_minus(), 0, space) * embed(ops::sigma_plus(), 1, space);
  return lambda * (stark + exchange);
}

/// Closed form of exp(-i t h_reduced_two_qubit(lambda)).
inline ComplexMatrix analytic_u(double lambda, double t) {
  const Complex half_sum = 0.5 * (std::exp(-2.0 * kI * (lambda * t)) + 1.0);
  const Complex half_diff = 0.5 * (std::exp(-2.0 * kI * (lambda * t)) - 1.0);
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = half_sum;
  u(2, 2) = half_sum;
  u(1, 2) = half_diff;
  u(2, 1) = half_diff;
  // Exponentiating the 2-lambda diagonal entry gives a unit-modulus phase.
  u(3, 3) = std::exp(-2.0 * kI * (lambda * t));
  return u;
}

/// sum_j sigma_j^+ sigma_j^- + a^dag a
inline ComplexMatrix excitation_number(const ModelParams& p) {
  const HilbertSpace space = p.space();
  ComplexMatrix n = embed(ops::number(p.photon_cutoff), p.n_qubits, space);
  for (std::size_t j = 0; j < p.n_qubits; ++j) n += embed(ops::excited_projector(), j, space);
  return n;
}

/// Block of an operator on [qubits..., cavity] between cavity vacuum states.
/// The cavity is the slowest index, so this is the leading 2^n x 2^n block.
inline ComplexMatrix cavity_vacuum_block(const ComplexMatrix& op, std::size_t n_qubits) {
  const auto q = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  return op.topLeftCorner(q, q);
}

}  // namespace dqdbus
