#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oirs/cli/config.hpp"

namespace oirs::cli {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

/// Names accepted by run().
const std::vector<std::string>& command_names();

/// Process exit status for a library error kind: 2 config, 4 ratio, 3 otherwise.
int exit_code_for(ErrorKind kind);

/// Runs one command on a loaded scenario and writes its files into the
/// output directory. Progress and wall time go to `log`. Throws oirs::Error;
/// an InfeasibleRatio split still writes its best-found files first.
std::vector<std::string> execute(const std::string& command, ScenarioConfig config,
                                 const Overrides& overrides, std::ostream& log);

/// Loads the config, executes, and maps failures to exit codes with a single
/// `error kind=<Kind> exit=<code> message=<text>` line on `err`.
int run(const std::string& command, const std::string& config_path, const Overrides& overrides,
        std::ostream& out, std::ostream& err);

/// Argument parsing front end: `<command> --config <path> [--seed N] [--out DIR] [--threads N]`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oirs::cli
