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

// JSON run configuration. Physical values are either bare numbers in SI
// (frequencies as f = omega / 2 pi in Hz) or strings with a unit suffix,
// e.g. "10 mm", "50 aF", "0.2 MHz", "10 ueV". Everything is normalized to SI
// at parse time; dump() writes the normalized form, which parses back to
// an identical RunConfig.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dqdbus/device.hpp"
#include "dqdbus/hamiltonians.hpp"

namespace dqdbus {

/// Rejected configuration; key_path() names the offending entry ("device.tlr.wiring_cap_C0").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key_path, const std::string& reason)
      : std::runtime_error((key_path.empty() ? std::string("<config>") : key_path) + ": " + reason),
        key_path_(std::move(key_path)) {}
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

struct RunConfig {
  TlrParams tlr{0.01, 4e-7, 2.5e-10, 0.0, 1e5};
  DotParams dot{0.0, 10e-6 * 1.602176634e-19, 200e-18, 0.0, 0.0};
  CouplerParams coupler{50e-18, 0.0};

  struct Model {
    std::size_t n_qubits = 2;
    std::optional<double> g_hz;  // g / 2 pi; empty means derived from the device
    double tau_over_g = 10.0;
    std::size_t photon_cutoff = kDefaultPhotonCutoff;
    double dispersive_threshold = kDefaultDispersiveThreshold;
    bool operator==(const Model&) const = default;
  } model;

  struct Noise {
    double gamma_hz = 0.0;      // gamma / 2 pi
    double gamma_phi_hz = 0.0;  // gamma_phi / 2 pi
    bool operator==(const Noise&) const = default;
  } noise;

  struct Axis {
    double min_hz = 0.0;
    double max_hz = 1e6;
    std::size_t points = 21;
    bool operator==(const Axis&) const = default;
  };
  struct Sweep {
    Axis gamma;
    Axis gamma_phi;
    bool operator==(const Sweep&) const = default;
  } sweep;

  struct Output {
    std::string path;
    bool time_series = true;
    std::size_t steps = 0;  // 0 selects the integrator default
    bool operator==(const Output&) const = default;
  } output;

  bool operator==(const RunConfig&) const = default;
};

namespace config_detail {

using nlohmann::json;

enum class Quantity { kLength, kInductancePerLength, kCapacitancePerLength, kCapacitance, kEnergy, kFrequency };

struct UnitEntry {
  std::string_view symbol;
  double factor;
};

inline std::vector<UnitEntry> units_for(Quantity q) {
  constexpr double eV = 1.602176634e-19;
  switch (q) {
    case Quantity::kLength:
      return {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6}, {"nm", 1e-9}};
    case Quantity::kInductancePerLength:
      return {{"H/m", 1.0}, {"mH/m", 1e-3}, {"uH/m", 1e-6}, {"µH/m", 1e-6}, {"nH/m", 1e-9}};
    case Quantity::kCapacitancePerLength:
      return {{"F/m", 1.0}, {"nF/m", 1e-9}, {"pF/m", 1e-12}, {"fF/m", 1e-15}};
    case Quantity::kCapacitance:
      return {{"F", 1.0}, {"uF", 1e-6}, {"nF", 1e-9}, {"pF", 1e-12}, {"fF", 1e-15}, {"aF", 1e-18}};
    case Quantity::kEnergy:
      return {{"J", 1.0}, {"eV", eV}, {"meV", 1e-3 * eV}, {"ueV", 1e-6 * eV}, {"µeV", 1e-6 * eV}, {"neV", 1e-9 * eV}};
    case Quantity::kFrequency:
      return {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
  }
  return {};
}

inline std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline double parse_quantity(const json& value, Quantity q, const std::string& path) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw ConfigError(path, "expected a number or a string with a unit");
  const std::string text = value.get<std::string>();
  std::size_t consumed = 0;
  double number = 0.0;
  try {
    number = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw ConfigError(path, "cannot parse quantity '" + text + "'");
  }
  std::string unit = text.substr(consumed);
  unit.erase(0, unit.find_first_not_of(' '));
  unit.erase(unit.find_last_not_of(' ') + 1);
  if (unit.empty()) return number;
  for (const auto& u : units_for(q)) {
    if (u.symbol == unit) return number * u.factor;
  }
  throw ConfigError(path, "unknown unit '" + unit + "'");
}

inline double parse_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path, "expected a number");
  return value.get<double>();
}

inline std::size_t parse_count(const json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

/// Visits the keys of `obj`, rejecting anything not in `allowed`.
template <class Handler>
void for_each_key(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed,
                  Handler&& handle) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto a : allowed) known = known || a == it.key();
    if (!known) throw ConfigError(join(path, it.key()), "unknown key");
    handle(it.key(), it.value(), join(path, it.key()));
  }
}

inline void parse_axis(const json& obj, const std::string& path, RunConfig::Axis& axis) {
  for_each_key(obj, path, {"min", "max", "points"}, [&](const std::string& k, const json& v, const std::string& p) {
    if (k == "min") axis.min_hz = parse_quantity(v, Quantity::kFrequency, p);
    if (k == "max") axis.max_hz = parse_quantity(v, Quantity::kFrequency, p);
    if (k == "points") axis.points = parse_count(v, p);
  });
}

inline void check(bool ok, const std::string& path, const std::string& reason) {
  if (!ok) throw ConfigError(path, reason);
}

inline void validate(const RunConfig& c) {
  check(c.tlr.length_L > 0, "device.tlr.length_L", "must be > 0");
  check(c.tlr.inductance_per_length_F > 0, "device.tlr.inductance_per_length_F", "must be > 0");
  check(c.tlr.capacitance_per_length_C > 0, "device.tlr.capacitance_per_length_C", "must be > 0");
  check(c.tlr.wiring_cap_C0 >= 0, "device.tlr.wiring_cap_C0", "must be >= 0");
  check(wiring_ratio(c.tlr) < kMaxWiringRatio, "device.tlr.wiring_cap_C0",
        "C0/(L C) must be < 0.1 for the perturbative frequency shift");
  check(c.tlr.quality_Q > 0, "device.tlr.quality_Q", "must be > 0");
  check(c.dot.tunneling_Tc > 0, "device.dot.tunneling_Tc", "must be > 0");
  check(c.dot.total_cap_Ctot > 0, "device.dot.total_cap_Ctot", "must be > 0");
  check(c.coupler.coupling_cap_Cc > 0, "device.coupler.coupling_cap_Cc", "must be > 0");
  check(c.coupler.position_x >= 0 && c.coupler.position_x <= c.tlr.length_L, "device.coupler.position_x",
        "must lie within [0, length_L]");

  check(c.model.n_qubits >= 2, "model.n_qubits", "at least two qubits required");
  if (c.model.g_hz) check(*c.model.g_hz > 0, "model.g", "must be > 0");
  check(c.model.photon_cutoff >= 1, "model.photon_cutoff", "must be >= 1");
  check(c.model.dispersive_threshold > 0, "model.dispersive_threshold", "must be > 0");
  check(c.model.tau_over_g >= c.model.dispersive_threshold, "model.tau_over_g",
        "below the dispersive threshold");

  check(c.noise.gamma_hz >= 0, "noise.gamma_over_2pi", "must be >= 0");
  check(c.noise.gamma_phi_hz >= 0, "noise.gamma_phi_over_2pi", "must be >= 0");
  for (const auto& [name, axis] : {std::pair{"sweep.gamma_over_2pi", c.sweep.gamma},
                                   std::pair{"sweep.gamma_phi_over_2pi", c.sweep.gamma_phi}}) {
    const std::string path(name);
    check(axis.min_hz >= 0, path + ".min", "must be >= 0");
    check(axis.max_hz >= axis.min_hz, path + ".max", "must be >= min");
    check(axis.points >= 1, path + ".points", "must be >= 1");
  }
  if (!c.model.g_hz) {
    check(std::abs(coupling_g(c.tlr, c.dot, c.coupler)) > 0, "device.coupler.position_x",
          "device coupling vanishes at this position");
  }
}

}  // namespace config_detail

inline RunConfig parse_config_json(const nlohmann::json& root) {
  using namespace config_detail;
  RunConfig c;
  for_each_key(root, "", {"device", "model", "noise", "sweep", "output"}, [&](const std::string& section,
                                                                               const json& body,
                                                                               const std::string& path) {
    if (section == "device") {
      for_each_key(body, path, {"tlr", "dot", "coupler"}, [&](const std::string& k, const json& v, const std::string& p) {
        if (k == "tlr") {
          for_each_key(v, p, {"length_L", "inductance_per_length_F", "capacitance_per_length_C", "wiring_cap_C0", "quality_Q"},
                       [&](const std::string& f, const json& x, const std::string& fp) {
                         if (f == "length_L") c.tlr.length_L = parse_quantity(x, Quantity::kLength, fp);
                         if (f == "inductance_per_length_F")
                           c.tlr.inductance_per_length_F = parse_quantity(x, Quantity::kInductancePerLength, fp);
                         if (f == "capacitance_per_length_C")
                           c.tlr.capacitance_per_length_C = parse_quantity(x, Quantity::kCapacitancePerLength, fp);
                         if (f == "wiring_cap_C0") c.tlr.wiring_cap_C0 = parse_quantity(x, Quantity::kCapacitance, fp);
                         if (f == "quality_Q") c.tlr.quality_Q = parse_number(x, fp);
                       });
        } else if (k == "dot") {
          for_each_key(v, p, {"bias_epsilon", "tunneling_Tc", "total_cap_Ctot", "triplet_energy_ET", "singlet_energy_ES"},
                       [&](const std::string& f, const json& x, const std::string& fp) {
                         if (f == "bias_epsilon") c.dot.bias_epsilon = parse_quantity(x, Quantity::kEnergy, fp);
                         if (f == "tunneling_Tc") c.dot.tunneling_Tc = parse_quantity(x, Quantity::kEnergy, fp);
                         if (f == "total_cap_Ctot") c.dot.total_cap_Ctot = parse_quantity(x, Quantity::kCapacitance, fp);
                         if (f == "triplet_energy_ET") c.dot.triplet_energy_ET = parse_quantity(x, Quantity::kEnergy, fp);
                         if (f == "singlet_energy_ES") c.dot.singlet_energy_ES = parse_quantity(x, Quantity::kEnergy, fp);
                       });
        } else {
          for_each_key(v, p, {"coupling_cap_Cc", "position_x"},
                       [&](const std::string& f, const json& x, const std::string& fp) {
                         if (f == "coupling_cap_Cc") c.coupler.coupling_cap_Cc = parse_quantity(x, Quantity::kCapacitance, fp);
                         if (f == "position_x") c.coupler.position_x = parse_quantity(x, Quantity::kLength, fp);
                       });
        }
      });
    } else if (section == "model") {
      for_each_key(body, path, {"n_qubits", "g", "tau_over_g", "photon_cutoff", "dispersive_threshold"},
                   [&](const std::string& k, const json& v, const std::string& p) {
                     if (k == "n_qubits") c.model.n_qubits = parse_count(v, p);
                     if (k == "g") {
                       if (v.is_string() && v.get<std::string>() == "from-device") {
                         c.model.g_hz.reset();
                       } else {
                         c.model.g_hz = parse_quantity(v, Quantity::kFrequency, p);
                       }
                     }
                     if (k == "tau_over_g") c.model.tau_over_g = parse_number(v, p);
                     if (k == "photon_cutoff") c.model.photon_cutoff = parse_count(v, p);
                     if (k == "dispersive_threshold") c.model.dispersive_threshold = parse_number(v, p);
                   });
    } else if (section == "noise") {
      for_each_key(body, path, {"gamma_over_2pi", "gamma_phi_over_2pi"},
                   [&](const std::string& k, const json& v, const std::string& p) {
                     if (k == "gamma_over_2pi") c.noise.gamma_hz = parse_quantity(v, Quantity::kFrequency, p);
                     if (k == "gamma_phi_over_2pi") c.noise.gamma_phi_hz = parse_quantity(v, Quantity::kFrequency, p);
                   });
    } else if (section == "sweep") {
      for_each_key(body, path, {"gamma_over_2pi", "gamma_phi_over_2pi"},
                   [&](const std::string& k, const json& v, const std::string& p) {
                     parse_axis(v, p, k == "gamma_over_2pi" ? c.sweep.gamma : c.sweep.gamma_phi);
                   });
    } else {
      for_each_key(body, path, {"path", "time_series", "steps"},
                   [&](const std::string& k, const json& v, const std::string& p) {
                     if (k == "path") {
                       if (!v.is_string()) throw ConfigError(p, "expected a string");
                       c.output.path = v.get<std::string>();
                     }
                     if (k == "time_series") {
                       if (!v.is_boolean()) throw ConfigError(p, "expected true or false");
                       c.output.time_series = v.get<bool>();
                     }
                     if (k == "steps") c.output.steps = parse_count(v, p);
                   });
    }
  });
  validate(c);
  return c;
}

inline RunConfig parse_config_text(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config_json(root);
}

inline RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

/// Normalized SI form of a config; parse_config_json(dump(c)) == c.
inline nlohmann::ordered_json dump(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["device"]["tlr"] = {{"length_L", c.tlr.length_L},
                        {"inductance_per_length_F", c.tlr.inductance_per_length_F},
                        {"capacitance_per_length_C", c.tlr.capacitance_per_length_C},
                        {"wiring_cap_C0", c.tlr.wiring_cap_C0},
                        {"quality_Q", c.tlr.quality_Q}};
  j["device"]["dot"] = {{"bias_epsilon", c.dot.bias_epsilon},
                        {"tunneling_Tc", c.dot.tunneling_Tc},
                        {"total_cap_Ctot", c.dot.total_cap_Ctot},
                        {"triplet_energy_ET", c.dot.triplet_energy_ET},
                        {"singlet_energy_ES", c.dot.singlet_energy_ES}};
  j["device"]["coupler"] = {{"coupling_cap_Cc", c.coupler.coupling_cap_Cc}, {"position_x", c.coupler.position_x}};
  j["model"]["n_qubits"] = c.model.n_qubits;
  if (c.model.g_hz) {
    j["model"]["g"] = *c.model.g_hz;
  } else {
    j["model"]["g"] = "from-device";
  }
  j["model"]["tau_over_g"] = c.model.tau_over_g;
  j["model"]["photon_cutoff"] = c.model.photon_cutoff;
  j["model"]["dispersive_threshold"] = c.model.dispersive_threshold;
  j["noise"] = {{"gamma_over_2pi", c.noise.gamma_hz}, {"gamma_phi_over_2pi", c.noise.gamma_phi_hz}};
  auto axis = [](const RunConfig::Axis& a) {
    return nlohmann::ordered_json{{"min", a.min_hz}, {"max", a.max_hz}, {"points", a.points}};
  };
  j["sweep"]["gamma_over_2pi"] = axis(c.sweep.gamma);
  j["sweep"]["gamma_phi_over_2pi"] = axis(c.sweep.gamma_phi);
  j["output"] = {{"path", c.output.path}, {"time_series", c.output.time_series}, {"steps", c.output.steps}};
  return j;
}

/// Coupling g in rad/s: the configured override, or |g(x)| from the device.
inline double resolved_coupling(const RunConfig& c) {
  if (c.model.g_hz) return constants::kTwoPi * *c.model.g_hz;
  return std::abs(coupling_g(c.tlr, c.dot, c.coupler));
}

/// Model for the first two qubits, which the entangling commands act on.
inline ModelParams resolved_model(const RunConfig& c, std::size_t n_qubits = 2) {
  const double g = resolved_coupling(c);
  ModelParams p = ModelParams::identical(n_qubits, g, c.model.tau_over_g * g, c.model.photon_cutoff);
  p.dispersive_threshold = c.model.dispersive_threshold;
  return p;
}

}  // namespace dqdbus
