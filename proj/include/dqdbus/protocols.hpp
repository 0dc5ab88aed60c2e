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

// Experiments built from the lower layers: two-qubit entangling evolution
// through the dispersive bus, its noise sweep, and checks of the dispersive
// approximation against the full qubit-cavity model.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dqdbus/algebra.hpp"
#include "dqdbus/dynamics.hpp"
#include "dqdbus/hamiltonians.hpp"

namespace dqdbus {

/// A numerical run breached its diagnostics.
class DiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// t0 = pi / (4 lambda), the time at which |10> becomes maximally entangled.
inline double gate_time_t0(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gate_time_t0: lambda must be > 0");
  return std::numbers::pi / (4.0 * lambda);
}

/// (|10> - i|01>) / sqrt(2) on two qubits.
inline PureState epr_target() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = 1.0 / std::numbers::sqrt2;
  v(2) = -kI / std::numbers::sqrt2;
  return PureState(HilbertSpace::qubits(2), std::move(v));
}

/// |1>_1 |0>_2
inline PureState epr_initial_state() { return PureState::basis(HilbertSpace::qubits(2), 1); }

// ---------------------------------------------------------------------------
// Entangling evolution

struct EprOptions {
  std::size_t steps = 0;  // 0 selects default_steps
  std::size_t snapshot_stride = 1;
};

struct EprReport {
  double t0 = 0.0;
  double fidelity = 0.0;
  double error_D = 1.0;
  double concurrence = 0.0;
  std::size_t steps = 0;
  LindbladResult run;
};

namespace detail {
inline double require_two_qubit_lambda(const ModelParams& p, const char* who) {
  p.validate();
  if (p.n_qubits != 2) throw std::invalid_argument(std::string(who) + ": exactly two target qubits required");
  const auto lam = p.lambda();
  if (!lam) throw std::invalid_argument(std::string(who) + ": identical couplings and detunings required");
  if (!p.is_dispersive()) throw std::invalid_argument(std::string(who) + ": parameters are not dispersive");
  return *lam;
}
}  // namespace detail

/// Evolves |10> under the reduced two-qubit Hamiltonian plus noise for t0.
inline EprReport epr_generation(const ModelParams& p, const NoiseSpec& noise, const EprOptions& options = {}) {
  const double lam = detail::require_two_qubit_lambda(p, "epr_generation");
  noise.validate(2);

  EprReport report;
  report.t0 = gate_time_t0(lam);
  const ComplexMatrix h = h_reduced_two_qubit(lam);
  report.steps = options.steps != 0
                     ? options.steps
                     : default_steps(report.t0, std::max(norm_bound(h), noise.rate_sum()));
  const TimeGrid grid{0.0, report.t0, report.steps};
  report.run = integrate_lindblad(h, DensityMatrix(epr_initial_state()), noise, grid,
                                  LindbladOptions{options.snapshot_stride});
  if (!report.run.passed) throw DiagnosticsError("epr_generation: " + report.run.failure);

  const DensityMatrix rho(HilbertSpace::qubits(2), report.run.final_state());
  report.fidelity = fidelity(rho, epr_target());
  report.error_D = 1.0 - report.fidelity;
  report.concurrence = concurrence(rho);
  return report;
}

/// Same run as epr_generation. The evolution is an excitation-swap entangler
/// rather than a controlled phase, hence the neutral name.
inline EprReport entangling_evolution(const ModelParams& p, const NoiseSpec& noise, const EprOptions& options = {}) {
  return epr_generation(p, noise, options);
}

// ---------------------------------------------------------------------------
// Noise sweep

struct SweepResult {
  std::vector<double> gamma_axis;      // rad/s
  std::vector<double> gamma_phi_axis;  // rad/s
  std::vector<std::vector<double>> D_grid;  // [gamma index][gamma_phi index]
  ModelParams params;
};

/// `points` evenly spaced values from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) throw std::invalid_argument("linspace: at least one point required");
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

/// D over a (gamma, gamma_phi) grid with both qubits sharing the rates.
/// Points are evaluated on `threads` workers (0 = hardware concurrency); the
/// result does not depend on the thread count.
inline SweepResult decoherence_sweep(const ModelParams& p, const std::vector<double>& gamma_axis,
                                     const std::vector<double>& gamma_phi_axis, unsigned threads = 0) {
  detail::require_two_qubit_lambda(p, "decoherence_sweep");
  if (gamma_axis.empty() || gamma_phi_axis.empty()) {
    throw std::invalid_argument("decoherence_sweep: axes must be nonempty");
  }
  for (double r : gamma_axis) {
    if (!(r >= 0.0)) throw std::invalid_argument("decoherence_sweep: rates must be >= 0");
  }
  for (double r : gamma_phi_axis) {
    if (!(r >= 0.0)) throw std::invalid_argument("decoherence_sweep: rates must be >= 0");
  }

  const std::size_t cols = gamma_phi_axis.size();
  const std::size_t total = gamma_axis.size() * cols;
  std::vector<double> flat(total, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      try {
        const NoiseSpec noise = NoiseSpec::uniform(2, gamma_axis[idx / cols], gamma_phi_axis[idx % cols]);
        flat[idx] = epr_generation(p, noise).error_D;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result{gamma_axis, gamma_phi_axis, {}, p};
  result.D_grid.resize(gamma_axis.size());
  for (std::size_t i = 0; i < gamma_axis.size(); ++i) {
    result.D_grid[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * cols),
                            flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
  }
  return result;
}

/// CSV with rates as f = omega / 2 pi in MHz, gamma outer, gamma_phi inner.
inline void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  constexpr double kToMHz = 1.0 / (2.0 * std::numbers::pi * 1e6);
  out << "gamma_over_2pi_MHz,gamma_phi_over_2pi_MHz,error_D\n";
  char line[128];
  for (std::size_t i = 0; i < sweep.gamma_axis.size(); ++i) {
    for (std::size_t j = 0; j < sweep.gamma_phi_axis.size(); ++j) {
      std::snprintf(line, sizeof line, "%.10e,%.10e,%.10e\n", sweep.gamma_axis[i] * kToMHz,
                    sweep.gamma_phi_axis[j] * kToMHz, sweep.D_grid[i][j]);
      out << line;
    }
  }
}

// ---------------------------------------------------------------------------
// Dispersive approximation vs full model

struct DispersiveValidityOptions {
  std::size_t steps = 0;  // 0 selects default_steps
  bool check_cutoff_convergence = true;
};

struct DispersiveValidityReport {
  double t0 = 0.0;
  double coupling_ratio = 0.0;  // g / tau
  /// Qubit-state fidelity between the full and effective models at t0.
  double fidelity = 0.0;
  /// 1 - fidelity averaged over the last detuning period 2 pi / tau before t0.
  /// Removes the fast micromotion at frequency tau that the effective model averages out.
  double averaged_infidelity = 0.0;
  double max_photon_number = 0.0;
  /// 4 (g / tau)^2
  double photon_bound = 0.0;
  double norm_drift = 0.0;
  std::size_t steps = 0;
  /// max change of fidelity / averaged infidelity when the cutoff is raised by one.
  double cutoff_change = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

/// Population of the cavity Fock blocks of a state on [qubits..., cavity].
inline double mean_photon_number(const ComplexVector& psi, Eigen::Index qubit_dim) {
  double n = 0.0;
  const Eigen::Index blocks = psi.size() / qubit_dim;
  for (Eigen::Index k = 1; k < blocks; ++k) {
    n += static_cast<double>(k) * psi.segment(k * qubit_dim, qubit_dim).squaredNorm();
  }
  return n;
}

/// <phi| Tr_cavity |psi><psi| |phi> for a qubit-space vector phi.
inline double reduced_overlap(const ComplexVector& psi, const ComplexVector& phi) {
  const Eigen::Index q = phi.size();
  double f = 0.0;
  for (Eigen::Index k = 0; k < psi.size() / q; ++k) f += std::norm(phi.dot(psi.segment(k * q, q)));
  return f;
}

inline DispersiveValidityReport run_dispersive_comparison(const ModelParams& p, std::size_t steps) {
  const double lam = require_two_qubit_lambda(p, "dispersive_validity");
  const double g = p.couplings_g[0];
  const double tau = std::abs(p.detunings_tau[0]);

  DispersiveValidityReport report;
  report.t0 = gate_time_t0(lam);
  report.coupling_ratio = g / tau;
  report.photon_bound = 4.0 * report.coupling_ratio * report.coupling_ratio;

  const HilbertSpace space = p.space();
  const std::array<std::size_t, 3> levels{1, 0, 0};
  const PureState psi0 = PureState::product(space, levels);
  const auto q = static_cast<Eigen::Index>(4);

  const InteractionHamiltonian h_full(p);
  report.steps = steps != 0 ? steps : default_steps(report.t0, std::max(norm_bound(h_full(0.0)), tau));

  // Effective model, exactly: psi_eff(t) = V exp(-i D t) V^dag psi0.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eff(h_effective(p));
  const ComplexVector eff_coeffs = eff.eigenvectors().adjoint() * psi0.amplitudes();
  auto effective_qubit_state = [&](double t) -> ComplexVector {
    ComplexVector c = eff_coeffs;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-kI * (eff.eigenvalues()(k) * t));
    return (eff.eigenvectors() * c).head(q);
  };

  const double window_start = std::max(0.0, report.t0 - 2.0 * std::numbers::pi / tau);
  double infidelity_sum = 0.0;
  std::size_t samples = 0;
  PropagationOptions options;
  options.snapshot_stride = report.steps;
  options.observer = [&](double t, const ComplexVector& psi) {
    report.max_photon_number = std::max(report.max_photon_number, mean_photon_number(psi, q));
    if (t >= window_start) {
      infidelity_sum += 1.0 - reduced_overlap(psi, effective_qubit_state(t));
      ++samples;
    }
  };
  const SchrodingerResult run =
      propagate_schrodinger(h_full, psi0, TimeGrid{0.0, report.t0, report.steps}, options);
  if (!run.passed) throw DiagnosticsError("dispersive_validity: " + run.failure);

  report.norm_drift = run.diagnostics.back().norm_drift;
  report.fidelity = reduced_overlap(run.final_state(), effective_qubit_state(report.t0));
  report.averaged_infidelity = infidelity_sum / static_cast<double>(samples);
  return report;
}

}  // namespace detail

/// Propagates |10>|0_cav> under the full time-dependent coupling and under the
/// dispersive effective Hamiltonian for t0, and compares the qubit states.
inline DispersiveValidityReport dispersive_validity(const ModelParams& p,
                                                   const DispersiveValidityOptions& options = {}) {
  DispersiveValidityReport report = detail::run_dispersive_comparison(p, options.steps);
  if (options.check_cutoff_convergence) {
    ModelParams finer = p;
    finer.photon_cutoff += 1;
    const DispersiveValidityReport check = detail::run_dispersive_comparison(finer, report.steps);
    report.cutoff_change = std::max(std::abs(check.fidelity - report.fidelity),
                                    std::abs(check.averaged_infidelity - report.averaged_infidelity));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Selective coupling

struct SelectiveCouplingOptions {
  /// Spectator detuning as a multiple of the active detuning. Infinity decouples spectators (g = 0).
  double detuning_ratio = 10.0;
  std::size_t steps = 0;
};

struct SelectiveCouplingReport {
  double detuning_ratio = 0.0;
  double t0 = 0.0;
  /// Largest spectator excited-state population over [0, t0], worst spectator.
  double spectator_max_deviation = 0.0;
  /// Spectator excited-state population at t0, worst spectator.
  double spectator_final_deviation = 0.0;
  /// Fidelity of the active pair's reduced state with the entangled target at t0.
  double active_fidelity = 0.0;
  std::size_t steps = 0;
};

/// Full-model run with two active qubits at the model detuning and every other
/// qubit pushed to detuning_ratio times that value.
inline SelectiveCouplingReport selective_coupling_check(const ModelParams& p, std::array<std::size_t, 2> active,
                                                        const SelectiveCouplingOptions& options = {}) {
  p.validate();
  if (p.n_qubits < 3) throw std::invalid_argument("selective_coupling_check: at least three qubits required");
  if (active[0] == active[1] || active[0] >= p.n_qubits || active[1] >= p.n_qubits) {
    throw std::invalid_argument("selective_coupling_check: two distinct active qubit indices required");
  }
  if (!(options.detuning_ratio >= 1.0)) {
    throw std::invalid_argument("selective_coupling_check: detuning ratio must be >= 1");
  }
  const double g = p.couplings_g[active[0]];
  const double tau = p.detunings_tau[active[0]];
  if (p.couplings_g[active[1]] != g || p.detunings_tau[active[1]] != tau) {
    throw std::invalid_argument("selective_coupling_check: active qubits must share coupling and detuning");
  }
  if (!(g > 0.0) || std::abs(tau) / g < p.dispersive_threshold) {
    throw std::invalid_argument("selective_coupling_check: active pair is not dispersive");
  }

  ModelParams model = p;
  std::vector<std::size_t> spectators;
  for (std::size_t j = 0; j < p.n_qubits; ++j) {
    if (j == active[0] || j == active[1]) continue;
    spectators.push_back(j);
    if (std::isinf(options.detuning_ratio)) {
      model.couplings_g[j] = 0.0;
      model.detunings_tau[j] = tau;
    } else {
      model.detunings_tau[j] = options.detuning_ratio * tau;
    }
  }

  SelectiveCouplingReport report;
  report.detuning_ratio = options.detuning_ratio;
  report.t0 = gate_time_t0(g * g / std::abs(tau));

  const HilbertSpace space = model.space();
  std::vector<std::size_t> levels(model.n_qubits + 1, 0);
  levels[active[0]] = 1;
  const PureState psi0 = PureState::product(space, levels);

  const InteractionHamiltonian h(model);
  double fastest = 0.0;
  for (std::size_t j = 0; j < model.n_qubits; ++j) {
    if (model.couplings_g[j] > 0.0) fastest = std::max(fastest, std::abs(model.detunings_tau[j]));
  }
  report.steps = options.steps != 0 ? options.steps
                                    : default_steps(report.t0, std::max(norm_bound(h(0.0)), fastest));

  auto spectator_population = [&](const ComplexVector& psi) {
    double worst = 0.0;
    for (std::size_t s : spectators) {
      const std::size_t stride = space.stride(s);
      double pop = 0.0;
      for (Eigen::Index i = 0; i < psi.size(); ++i) {
        if ((static_cast<std::size_t>(i) / stride) % 2 == 1) pop += std::norm(psi(i));
      }
      worst = std::max(worst, pop);
    }
    return worst;
  };

  PropagationOptions prop;
  prop.snapshot_stride = report.steps;
  prop.observer = [&](double, const ComplexVector& psi) {
    report.spectator_max_deviation = std::max(report.spectator_max_deviation, spectator_population(psi));
  };
  const SchrodingerResult run = propagate_schrodinger(h, psi0, TimeGrid{0.0, report.t0, report.steps}, prop);
  if (!run.passed) throw DiagnosticsError("selective_coupling_check: " + run.failure);

  const ComplexVector& psi = run.final_state();
  report.spectator_final_deviation = spectator_population(psi);

  const ComplexMatrix rho_pair =
      partial_trace(ComplexMatrix(psi * psi.adjoint()), space, {active[0], active[1]});
  // partial_trace orders the pair ascending; the initially excited qubit carries the real amplitude.
  ComplexVector target = ComplexVector::Zero(4);
  const bool first_is_low = active[0] < active[1];
  target(first_is_low ? 1 : 2) = 1.0 / std::numbers::sqrt2;
  target(first_is_low ? 2 : 1) = -kI / std::numbers::sqrt2;
  report.active_fidelity = overlap_expectation(rho_pair, target);
  return report;
}

}  // namespace dqdbus
