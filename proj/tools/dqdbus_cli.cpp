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

#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "dqdbus/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Double-dot qubits coupled through a transmission-line resonator"};
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::string out;
    unsigned threads = 0;
  } args;

  const std::pair<const char*, const char*> commands[] = {
      {"device", "Resonator, dot and coupling quantities derived from the circuit parameters"},
      {"epr", "Noisy entangling evolution of |10> at the configured rates"},
      {"sweep", "Error probability D over a (gamma, gamma_phi) grid, written as CSV"},
      {"validate", "Dispersive approximation and propagator checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "Output file (a .resolved.json dump is written beside it)");
    sub->add_option("--threads", args.threads, "Sweep worker threads (default: all cores)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dqdbus::kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::optional<std::filesystem::path> out;
  if (!args.out.empty()) out = args.out;
  // A sweep without --out streams CSV on stdout, so its summary goes to stderr.
  std::ostream& report = (command == "sweep") ? std::cerr : std::cout;
  return dqdbus::run_command(command, args.config, out, args.threads, report, std::cerr);
}
