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

// Circuit-level quantities of a transmission-line resonator coupled to
// double-dot charge/spin qubits. Inputs are SI; every frequency returned
// here is an angular frequency in rad/s (hbar = 1 downstream).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dqdbus/algebra.hpp"

namespace dqdbus {

namespace constants {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace constants

/// Largest wiring ratio C0/(L C) for which the first-order frequency shift is used.
inline constexpr double kMaxWiringRatio = 0.1;

struct TlrParams {
  double length_L = 0.0;                  // m
  double inductance_per_length_F = 0.0;   // H/m
  double capacitance_per_length_C = 0.0;  // F/m
  double wiring_cap_C0 = 0.0;             // F
  double quality_Q = 0.0;

  bool operator==(const TlrParams&) const = default;
};

struct DotParams {
  double bias_epsilon = 0.0;       // J
  double tunneling_Tc = 0.0;       // J
  double total_cap_Ctot = 0.0;     // F
  double triplet_energy_ET = 0.0;  // J
  double singlet_energy_ES = 0.0;  // J

  bool operator==(const DotParams&) const = default;
};

struct CouplerParams {
  double coupling_cap_Cc = 0.0;  // F
  double position_x = 0.0;       // m, measured from the left end of the resonator

  bool operator==(const CouplerParams&) const = default;
};

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}
}  // namespace detail

inline void validate(const TlrParams& tlr) {
  detail::require(tlr.length_L > 0.0, "TlrParams: length_L must be > 0");
  detail::require(tlr.inductance_per_length_F > 0.0, "TlrParams: inductance_per_length_F must be > 0");
  detail::require(tlr.capacitance_per_length_C > 0.0, "TlrParams: capacitance_per_length_C must be > 0");
  detail::require(tlr.wiring_cap_C0 >= 0.0, "TlrParams: wiring_cap_C0 must be >= 0");
  detail::require(tlr.quality_Q > 0.0, "TlrParams: quality_Q must be > 0");
}

inline void validate(const DotParams& dot) {
  detail::require(dot.tunneling_Tc > 0.0, "DotParams: tunneling_Tc must be > 0");
  detail::require(dot.total_cap_Ctot > 0.0, "DotParams: total_cap_Ctot must be > 0");
  detail::require(std::isfinite(dot.bias_epsilon), "DotParams: bias_epsilon must be finite");
}

inline void validate(const CouplerParams& coupler, const TlrParams& tlr) {
  detail::require(coupler.coupling_cap_Cc > 0.0, "CouplerParams: coupling_cap_Cc must be > 0");
  detail::require(coupler.position_x >= 0.0 && coupler.position_x <= tlr.length_L,
                  "CouplerParams: position_x must lie in [0, length_L]");
}

/// epsilon_0 = C0 / (L C), the wiring capacitance relative to the line's total capacitance.
inline double wiring_ratio(const TlrParams& tlr) {
  return tlr.wiring_cap_C0 / (tlr.length_L * tlr.capacitance_per_length_C);
}

/// Full-wave mode frequency 2 pi / (L sqrt(F C)).
inline double bare_frequency(const TlrParams& tlr) {
  validate(tlr);
  return constants::kTwoPi /
         (tlr.length_L * std::sqrt(tlr.inductance_per_length_F * tlr.capacitance_per_length_C));
}

/// omega_0 (1 - 2 epsilon_0); rejects epsilon_0 >= 0.1 where the expansion breaks down.
inline double renormalized_frequency(const TlrParams& tlr) {
  const double eps0 = wiring_ratio(tlr);
  if (eps0 >= kMaxWiringRatio) {
    throw std::invalid_argument("renormalized_frequency: wiring ratio C0/(L C) = " +
                                std::to_string(eps0) + " is outside the perturbative regime (< 0.1)");
  }
  return bare_frequency(tlr) * (1.0 - 2.0 * eps0);
}

/// delta with tan(delta) = 2 pi epsilon_0.
inline double phase_shift(const TlrParams& tlr) {
  validate(tlr);
  return std::atan(constants::kTwoPi * wiring_ratio(tlr));
}

/// kappa = omega / Q.
inline double decay_kappa(const TlrParams& tlr) {
  return renormalized_frequency(tlr) / tlr.quality_Q;
}

/// Angle theta of the rotation that diagonalizes the singlet block
/// [[E_S, Tc], [Tc, -eps]] in the basis {(1,1)S, (0,2)S}:
///   |S~> =  cos(theta) |(1,1)S> + sin(theta) |(0,2)S>
///   |G~> = -sin(theta) |(1,1)S> + cos(theta) |(0,2)S>
/// theta lies in (0, pi/2), so cos(theta) > 0; eps = 0 with E_S = 0 gives pi/4.
inline double mixing_angle(const DotParams& dot) {
  validate(dot);
  return 0.5 * std::atan2(2.0 * dot.tunneling_Tc, dot.singlet_energy_ES + dot.bias_epsilon);
}

/// Gap between the two singlet eigenstates, sqrt((E_S + eps)^2 + 4 Tc^2).
inline double singlet_splitting(const DotParams& dot) {
  validate(dot);
  return std::hypot(dot.singlet_energy_ES + dot.bias_epsilon, 2.0 * dot.tunneling_Tc);
}

/// Left-dot voltage operator e (I + sigma_x) / (2 Ctot) in the {|0>, |1>} qubit basis, volts.
inline ComplexMatrix dot_voltage(const DotParams& dot) {
  validate(dot);
  return (constants::kElementaryCharge / (2.0 * dot.total_cap_Ctot)) *
         (ops::identity(2) + ops::sigma_x());
}

/// Full-wave mode wavenumber; the resonator holds exactly one wavelength.
inline double wavenumber(const TlrParams& tlr) { return constants::kTwoPi / tlr.length_L; }

/// g(x) = (e Cc / Ctot) sqrt(hbar omega / (L C)) cos(k x + delta) / hbar.
inline double coupling_g(const TlrParams& tlr, const DotParams& dot, const CouplerParams& coupler) {
  validate(tlr);
  validate(dot);
  validate(coupler, tlr);
  const double omega = renormalized_frequency(tlr);
  const double line_capacitance = tlr.length_L * tlr.capacitance_per_length_C;
  const double vacuum_voltage = std::sqrt(constants::kHbar * omega / line_capacitance);
  const double profile = std::cos(wavenumber(tlr) * coupler.position_x + phase_shift(tlr));
  const double energy = constants::kElementaryCharge * coupler.coupling_cap_Cc / dot.total_cap_Ctot *
                        vacuum_voltage * profile;
  return energy / constants::kHbar;
}

}  // namespace dqdbus
