#pragma once

#include <iosfwd>
#include <string>

#include "glassmix/cli/config.hpp"

namespace glassmix::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitCapacity = 3,
  kExitNumericGate = 4,
  kExitEmpty = 5,
};

/// Each command writes manifest.json (incomplete) first, then its data files,
/// then the manifest again marked complete. Errors propagate as glassmix::Error.
int cmd_simulate(const Config& config, std::ostream& log);
int cmd_spectrum(const Config& config, std::ostream& log);
int cmd_certify(const Config& config, std::ostream& log);
int cmd_landscape(const Config& config, std::ostream& log);
int cmd_theory(const Config& config, std::ostream& log);

/// Dispatches by name and maps errors to exit codes, printing them to `err`.
int run_command(const std::string& name, const Config& config, std::ostream& log, std::ostream& err);

/// Full command line: subcommand, --config, flag overrides, GLASSMIX_OUT.
int run_cli(int argc, char** argv);

}  // namespace glassmix::cli
