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

// Subcommands of the dqdbus tool. Each writes a human-readable report to
// `report`, optional files to `out`, and returns a process exit code.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dqdbus/config.hpp"
#include "dqdbus/device.hpp"
#include "dqdbus/dynamics.hpp"
#include "dqdbus/hamiltonians.hpp"
#include "dqdbus/protocols.hpp"

namespace dqdbus {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitConfigError = 2,
  kExitDiagnosticFailure = 3,
  kExitIoError = 4,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandContext {
  RunConfig config;
  std::optional<std::filesystem::path> out;
  unsigned threads = 0;
};

/// Operating point quoted for the entangling protocol: gamma/2pi = 0.2 MHz,
/// gamma_phi/2pi = 0.5 MHz, where D below 1% is claimed.
inline constexpr double kReferenceGammaHz = 0.2e6;
inline constexpr double kReferenceGammaPhiHz = 0.5e6;
inline constexpr double kReferenceClaimD = 0.01;

namespace cli_detail {

inline std::string fmt(const char* format, double value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

/// "f = 10.000000 GHz (omega = 6.283185e+10 rad/s)"
inline std::string frequency(double omega) {
  const double f = omega / constants::kTwoPi;
  std::string scaled;
  if (std::abs(f) >= 1e9) {
    scaled = fmt("%.6f GHz", f / 1e9);
  } else if (std::abs(f) >= 1e6) {
    scaled = fmt("%.6f MHz", f / 1e6);
  } else if (std::abs(f) >= 1e3) {
    scaled = fmt("%.6f kHz", f / 1e3);
  } else {
    scaled = fmt("%.6f Hz", f);
  }
  return scaled + " (" + fmt("%.6e", omega) + " rad/s)";
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

inline void write_resolved(const RunConfig& config, const std::filesystem::path& out) {
  std::filesystem::path dump_path = out;
  dump_path += ".resolved.json";
  auto file = open_output(dump_path);
  file << dump(config).dump(2) << '\n';
  if (!file) throw IoError("failed writing '" + dump_path.string() + "'");
}

inline void finish(std::ofstream& file, const std::filesystem::path& path) {
  file.flush();
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

inline std::optional<std::filesystem::path> output_path(const CommandContext& ctx) {
  if (ctx.out) return ctx.out;
  if (!ctx.config.output.path.empty()) return std::filesystem::path(ctx.config.output.path);
  return std::nullopt;
}

inline NoiseSpec configured_noise(const RunConfig& c) {
  return NoiseSpec::uniform(2, constants::kTwoPi * c.noise.gamma_hz, constants::kTwoPi * c.noise.gamma_phi_hz);
}

inline std::string claim_comparison(double d) {
  return std::string("reference claim D < 1% at gamma/2pi = 0.2 MHz, gamma_phi/2pi = 0.5 MHz: ") +
         (d < kReferenceClaimD ? "reproduced" : "not reproduced") + " (D = " + fmt("%.4f", 100.0 * d) + "%)";
}

}  // namespace cli_detail

/// Device-derived quantities and the resulting model scales.
inline int cmd_device(const CommandContext& ctx, std::ostream& report) {
  using namespace cli_detail;
  const RunConfig& c = ctx.config;
  std::ostringstream r;
  const double g_device = coupling_g(c.tlr, c.dot, c.coupler);
  const ModelParams p = resolved_model(c);
  const double lam = *p.lambda();

  r << "bare mode           omega0/2pi: " << frequency(bare_frequency(c.tlr)) << '\n';
  r << "renormalized mode   omega/2pi:  " << frequency(renormalized_frequency(c.tlr)) << '\n';
  r << "wiring ratio        eps0:       " << fmt("%.6e", wiring_ratio(c.tlr)) << '\n';
  r << "phase shift         delta:      " << fmt("%.6e", phase_shift(c.tlr)) << " rad\n";
  r << "cavity decay        kappa/2pi:  " << frequency(decay_kappa(c.tlr)) << '\n';
  r << "mixing angle        theta:      " << fmt("%.6f", mixing_angle(c.dot)) << " rad ("
    << fmt("%.4f", mixing_angle(c.dot) / (std::numbers::pi / 4.0)) << " x pi/4)\n";
  r << "singlet splitting:              " << fmt("%.6e", singlet_splitting(c.dot)) << " J, "
    << frequency(singlet_splitting(c.dot) / constants::kHbar) << '\n';
  r << "device coupling     g(x)/2pi:   " << frequency(g_device) << '\n';
  r << "model coupling      g/2pi:      " << frequency(p.couplings_g[0])
    << (c.model.g_hz ? " [configured]" : " [from device]") << '\n';
  r << "detuning            tau/2pi:    " << frequency(p.detunings_tau[0]) << " (tau/g = "
    << fmt("%.3f", c.model.tau_over_g) << ")\n";
  r << "effective coupling  lambda/2pi: " << frequency(lam) << '\n';
  r << "entangling time     t0:         " << fmt("%.6f", gate_time_t0(lam) * 1e9) << " ns\n";

  report << r.str();
  if (const auto path = output_path(ctx)) {
    auto file = open_output(*path);
    file << r.str();
    finish(file, *path);
    write_resolved(c, *path);
  }
  return kExitSuccess;
}

/// Noisy entangling evolution at the configured rates.
inline int cmd_epr(const CommandContext& ctx, std::ostream& report) {
  using namespace cli_detail;
  const RunConfig& c = ctx.config;
  const ModelParams p = resolved_model(c);
  EprReport epr;
  try {
    epr = epr_generation(p, configured_noise(c), EprOptions{c.output.steps, 1});
  } catch (const DiagnosticsError& e) {
    report << "FAIL diagnostics: " << e.what() << '\n';
    return kExitDiagnosticFailure;
  }

  report << "gamma/2pi = " << fmt("%.6f", c.noise.gamma_hz / 1e6) << " MHz, gamma_phi/2pi = "
         << fmt("%.6f", c.noise.gamma_phi_hz / 1e6) << " MHz\n";
  report << "t0          = " << fmt("%.6f", epr.t0 * 1e9) << " ns (" << epr.steps << " RK4 steps)\n";
  report << "fidelity    = " << fmt("%.12f", epr.fidelity) << '\n';
  report << "error D     = " << fmt("%.6e", epr.error_D) << '\n';
  report << "concurrence = " << fmt("%.12f", epr.concurrence) << '\n';
  if (c.noise.gamma_hz == kReferenceGammaHz && c.noise.gamma_phi_hz == kReferenceGammaPhiHz) {
    report << claim_comparison(epr.error_D) << '\n';
  }

  if (const auto path = output_path(ctx); path && c.output.time_series) {
    auto file = open_output(*path);
    const ComplexVector target = epr_target().amplitudes();
    file << "t,fidelity,trace,min_eig\n";
    char line[160];
    for (std::size_t k = 0; k < epr.run.times.size(); ++k) {
      const ComplexMatrix& rho = epr.run.states[k];
      std::snprintf(line, sizeof line, "%.10e,%.10e,%.10e,%.10e\n", epr.run.times[k],
                    overlap_expectation(rho, target), rho.trace().real(), epr.run.diagnostics[k].min_eigenvalue);
      file << line;
    }
    finish(file, *path);
    write_resolved(c, *path);
  }
  return kExitSuccess;
}

/// Error probability over the configured (gamma, gamma_phi) grid, as CSV.
inline int cmd_sweep(const CommandContext& ctx, std::ostream& report) {
  using namespace cli_detail;
  const RunConfig& c = ctx.config;
  const ModelParams p = resolved_model(c);
  const double w = constants::kTwoPi;
  const auto gamma_axis = linspace(w * c.sweep.gamma.min_hz, w * c.sweep.gamma.max_hz, c.sweep.gamma.points);
  const auto gamma_phi_axis =
      linspace(w * c.sweep.gamma_phi.min_hz, w * c.sweep.gamma_phi.max_hz, c.sweep.gamma_phi.points);

  SweepResult sweep;
  double reference_d = 0.0;
  try {
    sweep = decoherence_sweep(p, gamma_axis, gamma_phi_axis, ctx.threads);
    reference_d = epr_generation(p, NoiseSpec::uniform(2, w * kReferenceGammaHz, w * kReferenceGammaPhiHz)).error_D;
  } catch (const DiagnosticsError& e) {
    report << "FAIL diagnostics: " << e.what() << '\n';
    return kExitDiagnosticFailure;
  }

  std::ostringstream csv;
  write_sweep_csv(sweep, csv);
  if (const auto path = output_path(ctx)) {
    auto file = open_output(*path);
    file << csv.str();
    finish(file, *path);
    write_resolved(c, *path);
    report << "wrote " << gamma_axis.size() * gamma_phi_axis.size() << " rows to " << path->string() << '\n';
  } else {
    std::cout << csv.str();
  }

  double d_max = 0.0;
  for (const auto& row : sweep.D_grid)
    for (double d : row) d_max = std::max(d_max, d);
  report << "D at grid origin   = " << fmt("%.6e", sweep.D_grid[0][0]) << '\n';
  report << "D maximum on grid  = " << fmt("%.6e", d_max) << '\n';
  report << claim_comparison(reference_d) << '\n';
  return kExitSuccess;
}

struct ValidationCheck {
  std::string name;
  double value;
  double threshold;
  bool passed;
};

/// Dispersive-approximation and propagator checks; exit 0 iff all pass.
inline int cmd_validate(const CommandContext& ctx, std::ostream& report) {
  using namespace cli_detail;
  const RunConfig& c = ctx.config;
  const ModelParams p = resolved_model(c);
  std::vector<ValidationCheck> checks;

  try {
    const DispersiveValidityReport dv = dispersive_validity(p);
    report << "full vs effective model at tau/g = " << fmt("%.3f", c.model.tau_over_g) << ", t0 = "
           << fmt("%.6f", dv.t0 * 1e9) << " ns, " << dv.steps << " RK4 steps\n";
    report << "  period-averaged infidelity = " << fmt("%.6e", dv.averaged_infidelity) << '\n';
    checks.push_back({"full_vs_effective_fidelity", dv.fidelity, 0.95, dv.fidelity >= 0.95});
    checks.push_back({"max_photon_number", dv.max_photon_number, dv.photon_bound,
                      dv.max_photon_number < dv.photon_bound});
    checks.push_back({"photon_cutoff_convergence", dv.cutoff_change, 1e-6, dv.cutoff_change < 1e-6});

    if (c.model.tau_over_g > 5.0) {
      ModelParams close = p;
      close.detunings_tau.assign(2, 5.0 * p.couplings_g[0]);
      close.dispersive_threshold = std::min(p.dispersive_threshold, 5.0);
      const DispersiveValidityReport near = dispersive_validity(close, {0, false});
      report << "  period-averaged infidelity at tau/g = 5: " << fmt("%.6e", near.averaged_infidelity) << '\n';
      checks.push_back({"deviation_ordering_vs_tau_5g", dv.averaged_infidelity, near.averaged_infidelity,
                        dv.averaged_infidelity < near.averaged_infidelity});
    }

    const double lam = *p.lambda();
    const double t0 = gate_time_t0(lam);
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> times(0.0, 4.0 * t0);
    double deviation = 0.0, unitarity = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double t = times(rng);
      const ComplexMatrix u = analytic_u(lam, t);
      deviation = std::max(deviation, max_abs(u - expm_propagator(h_reduced_two_qubit(lam), t)));
      unitarity = std::max(unitarity, unitarity_error(u));
    }
    checks.push_back({"analytic_vs_numeric_unitary", deviation, 1e-10, deviation < 1e-10});
    checks.push_back({"analytic_unitarity", unitarity, 1e-10, unitarity < 1e-10});

    if (c.model.n_qubits >= 3) {
      const SelectiveCouplingReport sel = selective_coupling_check(resolved_model(c, c.model.n_qubits), {0, 1});
      report << "  spectator max excitation (R = 10) = " << fmt("%.6e", sel.spectator_max_deviation) << '\n';
      checks.push_back({"active_pair_fidelity_with_spectators", sel.active_fidelity, 0.95, sel.active_fidelity > 0.95});
    }
  } catch (const DiagnosticsError& e) {
    report << "FAIL diagnostics: " << e.what() << '\n';
    return kExitDiagnosticFailure;
  }

  bool all = true;
  for (const auto& ch : checks) {
    report << (ch.passed ? "PASS " : "FAIL ") << ch.name << ": " << fmt("%.6e", ch.value) << " (threshold "
           << fmt("%.6e", ch.threshold) << ")\n";
    all = all && ch.passed;
  }
  if (const auto path = output_path(ctx)) write_resolved(c, *path);
  return all ? kExitSuccess : kExitDiagnosticFailure;
}

/// Parses the config and runs `command`, mapping failures to exit codes.
inline int run_command(const std::string& command, const std::filesystem::path& config_path,
                       std::optional<std::filesystem::path> out, unsigned threads, std::ostream& report,
                       std::ostream& errors) {
  try {
    CommandContext ctx{parse_config(config_path), std::move(out), threads};
    if (command == "device") return cmd_device(ctx, report);
    if (command == "epr") return cmd_epr(ctx, report);
    if (command == "sweep") return cmd_sweep(ctx, report);
    if (command == "validate") return cmd_validate(ctx, report);
    errors << "unknown command '" << command << "'\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    errors << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    errors << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const DiagnosticsError& e) {
    errors << "numerical diagnostics failed: " << e.what() << '\n';
    return kExitDiagnosticFailure;
  } catch (const std::invalid_argument& e) {
    errors << "invalid parameters: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace dqdbus
