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

// Fixed-step RK4 integrators for the Schrodinger and Lindblad equations.
// Neither integrator renormalizes; drift is measured and reported.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqdbus/algebra.hpp"

namespace dqdbus {

/// Largest allowed dt * (generator norm bound).
inline constexpr double kStabilityLimit = 0.1;
/// Steps per unit of (t_span * rate) used when the caller does not choose a step count.
inline constexpr double kStepsPerRadian = 40.0;

inline constexpr double kMaxNormDrift = 1e-6;
inline constexpr double kMaxTraceDrift = 1e-8;
inline constexpr double kMaxHermiticityError = 1e-10;
inline constexpr double kMinEigenvalueFloor = -1e-8;

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t steps = 1;

  void validate() const {
    if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
    if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
  }
  double dt() const { return (t_end - t_start) / static_cast<double>(steps); }
  double time(std::size_t k) const { return t_start + static_cast<double>(k) * dt(); }
};

/// ceil(40 * span * max(rates)), at least 1.
inline std::size_t default_steps(double span, double rate_scale) {
  const double n = std::ceil(kStepsPerRadian * span * rate_scale);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

/// Per-qubit relaxation (gamma) and pure-dephasing (gamma_phi) rates, rad/s.
struct NoiseSpec {
  std::vector<double> relaxation_gamma;
  std::vector<double> dephasing_gamma_phi;

  static NoiseSpec none(std::size_t n_qubits) { return uniform(n_qubits, 0.0, 0.0); }
  static NoiseSpec uniform(std::size_t n_qubits, double gamma, double gamma_phi) {
    return {std::vector<double>(n_qubits, gamma), std::vector<double>(n_qubits, gamma_phi)};
  }

  std::size_t qubit_count() const { return relaxation_gamma.size(); }

  void validate(std::size_t n_qubits) const {
    if (relaxation_gamma.size() != n_qubits || dephasing_gamma_phi.size() != n_qubits) {
      throw std::invalid_argument("NoiseSpec: rate lists must have one entry per qubit");
    }
    for (std::size_t j = 0; j < n_qubits; ++j) {
      if (!(relaxation_gamma[j] >= 0.0) || !(dephasing_gamma_phi[j] >= 0.0)) {
        throw std::invalid_argument("NoiseSpec: rates must be >= 0");
      }
    }
  }

  double rate_sum() const {
    double s = 0.0;
    for (double g : relaxation_gamma) s += g;
    for (double g : dephasing_gamma_phi) s += g;
    return s;
  }

  bool operator==(const NoiseSpec&) const = default;
};

struct StateDiagnostics {
  double norm_drift = 0.0;
};

struct DensityDiagnostics {
  double trace_drift = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

/// Snapshots of one trajectory. `passed` is false when a diagnostic exceeded its bound;
/// `failure` then names the first offending check.
template <class State, class Diagnostics>
struct SimResult {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<Diagnostics> diagnostics;
  bool passed = true;
  std::string failure;

  const State& final_state() const { return states.back(); }
};

using SchrodingerResult = SimResult<ComplexVector, StateDiagnostics>;
using LindbladResult = SimResult<ComplexMatrix, DensityDiagnostics>;

/// Thrown when dt is too coarse for the generator; `required_steps` is a step count that passes.
class StabilityError : public std::invalid_argument {
 public:
  StabilityError(const std::string& what, std::size_t required_steps)
      : std::invalid_argument(what + " (use at least " + std::to_string(required_steps) + " steps)"),
        required_steps_(required_steps) {}
  std::size_t required_steps() const { return required_steps_; }

 private:
  std::size_t required_steps_;
};

namespace detail {
inline void check_stability(double dt, double rate, const TimeGrid& grid) {
  if (dt * rate >= kStabilityLimit) {
    const auto required =
        static_cast<std::size_t>(std::floor((grid.t_end - grid.t_start) * rate / kStabilityLimit)) + 1;
    throw StabilityError("integrator step too large: dt * |H| = " + std::to_string(dt * rate), required);
  }
}
}  // namespace detail

struct PropagationOptions {
  /// Keep every k-th step (the initial and final states are always kept).
  std::size_t snapshot_stride = 1;
  /// Called after every step with (t, state), independent of the snapshot stride.
  std::function<void(double, const ComplexVector&)> observer;
};

/// RK4 on d psi/dt = -i H(t) psi. `h_of_t` maps a time to a Hermitian matrix.
template <class HamiltonianFn>
SchrodingerResult propagate_schrodinger(const HamiltonianFn& h_of_t, const PureState& psi0,
                                        const TimeGrid& grid, const PropagationOptions& options = {}) {
  grid.validate();
  const double dt = grid.dt();
  const std::size_t stride = std::max<std::size_t>(1, options.snapshot_stride);

  SchrodingerResult result;
  auto record = [&](double t, const ComplexVector& psi) {
    result.times.push_back(t);
    result.states.push_back(psi);
    result.diagnostics.push_back({std::abs(psi.norm() - 1.0)});
  };

  ComplexVector psi = psi0.amplitudes();
  record(grid.t_start, psi);
  if (options.observer) options.observer(grid.t_start, psi);

  auto apply = [&](double t, const ComplexVector& v) -> ComplexVector {
    const ComplexMatrix h = h_of_t(t);
    if (h.rows() != v.size() || h.cols() != v.size()) {
      throw std::invalid_argument("propagate_schrodinger: Hamiltonian does not match state dimension");
    }
    detail::check_stability(dt, norm_bound(h), grid);
    return -kI * (h * v);
  };

  double max_drift = 0.0;
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double t = grid.time(k);
    const ComplexVector k1 = apply(t, psi);
    const ComplexVector k2 = apply(t + 0.5 * dt, psi + (0.5 * dt) * k1);
    const ComplexVector k3 = apply(t + 0.5 * dt, psi + (0.5 * dt) * k2);
    const ComplexVector k4 = apply(t + dt, psi + dt * k3);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = grid.time(k + 1);
    if (options.observer) options.observer(t_next, psi);
    const bool last = (k + 1 == grid.steps);
    if (last || (k + 1) % stride == 0) record(t_next, psi);
    max_drift = std::max(max_drift, std::abs(psi.norm() - 1.0));
  }
  if (max_drift >= kMaxNormDrift) {
    result.passed = false;
    result.failure = "norm drift " + std::to_string(max_drift) + " exceeds " + std::to_string(kMaxNormDrift);
  }
  return result;
}

/// Lindblad generator for n qubits with the dissipators
///   (gamma_phi_j / 2) [sz_j rho sz_j - rho]
///   (gamma_j / 4) [s_j rho s_j^dag - 1/2 s_j^dag s_j rho - 1/2 rho s_j^dag s_j],  s_j = sigma_j^-.
class LindbladGenerator {
 public:
  LindbladGenerator(ComplexMatrix h, NoiseSpec noise) : h_(std::move(h)), noise_(std::move(noise)) {
    const std::size_t n = noise_.qubit_count();
    noise_.validate(n);
    const HilbertSpace space = HilbertSpace::qubits(n);
    const auto d = static_cast<Eigen::Index>(space.dimension());
    if (h_.rows() != d || h_.cols() != d) {
      throw std::invalid_argument("lindblad: Hamiltonian dimension " + std::to_string(h_.rows()) +
                                  " does not match " + std::to_string(n) + "-qubit noise model");
    }
    for (std::size_t j = 0; j < n; ++j) {
      sz_.push_back(embed(ops::sigma_z(), j, space));
      lower_.push_back(embed(ops::sigma_minus(), j, space));
      excited_.push_back(lower_.back().adjoint() * lower_.back());
    }
  }

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    if (rho.rows() != h_.rows() || rho.cols() != h_.cols()) {
      throw std::invalid_argument("lindblad: density matrix dimension mismatch");
    }
    ComplexMatrix d = -kI * (h_ * rho - rho * h_);
    for (std::size_t j = 0; j < sz_.size(); ++j) {
      const double gphi = noise_.dephasing_gamma_phi[j];
      const double gam = noise_.relaxation_gamma[j];
      if (gphi != 0.0) d += (0.5 * gphi) * (sz_[j] * rho * sz_[j] - rho);
      if (gam != 0.0) {
        d += (0.25 * gam) * (lower_[j] * rho * lower_[j].adjoint() - 0.5 * (excited_[j] * rho) -
                             0.5 * (rho * excited_[j]));
      }
    }
    return d;
  }

  const ComplexMatrix& hamiltonian() const { return h_; }
  const NoiseSpec& noise() const { return noise_; }

  /// Norm bound on the generator used by the stability guard.
  double rate_scale() const { return norm_bound(h_) + noise_.rate_sum(); }

 private:
  ComplexMatrix h_;
  NoiseSpec noise_;
  std::vector<ComplexMatrix> sz_, lower_, excited_;
};

inline ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h_eff, const NoiseSpec& noise) {
  return LindbladGenerator(h_eff, noise)(rho);
}

struct LindbladOptions {
  std::size_t snapshot_stride = 1;
};

inline DensityDiagnostics density_diagnostics(const ComplexMatrix& rho) {
  return {std::abs(rho.trace() - 1.0), hermiticity_error(rho), min_eigenvalue(rho)};
}

/// RK4 on the Lindblad equation. Every snapshot is checked against the trace,
/// Hermiticity and positivity bounds; a breach marks the run failed.
inline LindbladResult integrate_lindblad(const ComplexMatrix& h_eff, const DensityMatrix& rho0,
                                         const NoiseSpec& noise, const TimeGrid& grid,
                                         const LindbladOptions& options = {}) {
  grid.validate();
  const LindbladGenerator rhs(h_eff, noise);
  if (rho0.matrix().rows() != h_eff.rows()) {
    throw std::invalid_argument("integrate_lindblad: initial state dimension mismatch");
  }
  const double dt = grid.dt();
  detail::check_stability(dt, rhs.rate_scale(), grid);
  const std::size_t stride = std::max<std::size_t>(1, options.snapshot_stride);

  LindbladResult result;
  auto record = [&](double t, const ComplexMatrix& rho) {
    const DensityDiagnostics diag = density_diagnostics(rho);
    result.times.push_back(t);
    result.states.push_back(rho);
    result.diagnostics.push_back(diag);
    if (!result.passed) return;
    if (diag.trace_drift >= kMaxTraceDrift) {
      result.passed = false;
      result.failure = "trace drift " + std::to_string(diag.trace_drift) + " at t = " + std::to_string(t);
    } else if (diag.hermiticity_error >= kMaxHermiticityError) {
      result.passed = false;
      result.failure = "hermiticity error " + std::to_string(diag.hermiticity_error) + " at t = " + std::to_string(t);
    } else if (diag.min_eigenvalue <= kMinEigenvalueFloor) {
      result.passed = false;
      result.failure = "negative eigenvalue " + std::to_string(diag.min_eigenvalue) + " at t = " + std::to_string(t);
    }
  };

  ComplexMatrix rho = rho0.matrix();
  record(grid.t_start, rho);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const ComplexMatrix k1 = rhs(rho);
    const ComplexMatrix k2 = rhs(rho + (0.5 * dt) * k1);
    const ComplexMatrix k3 = rhs(rho + (0.5 * dt) * k2);
    const ComplexMatrix k4 = rhs(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (k + 1 == grid.steps || (k + 1) % stride == 0) record(grid.time(k + 1), rho);
  }
  return result;
}

/// D = 1 - <target| rho |target>.
inline double error_probability(const DensityMatrix& rho_final, const PureState& target) {
  return 1.0 - fidelity(rho_final, target);
}

}  // namespace dqdbus
