#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "edgescale/cli/scenario.hpp"

namespace edgescale {

// Flag surface shared by the subcommands. Empty string / zero / empty list
// means "keep what the scenario file says".
struct CliOptions {
  std::string scenario_path;
  std::string policy;                // override, e.g. "sdps"
  std::string pricing;               // override, e.g. "pfp"
  int rounds = 0;                    // override when > 0
  std::vector<std::uint64_t> seeds;  // override when non-empty
  std::string output_dir = "edgescale-out";
  std::string format = "both";  // trace | summary | both
  bool strict = true;
};

// Each command returns a process exit code: 0 on success, 1 on runtime
// failures (I/O, invalid scenario), 2 on misuse (wrong experiment type,
// inapplicable flags). Progress and results go to `out`, diagnostics to
// `err`; nothing is printed on any other channel, so runs are comparable
// byte for byte.
int cmd_run(const CliOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const CliOptions& options, std::ostream& out,
                std::ostream& err);
int cmd_sweep(const CliOptions& options, std::ostream& out,
              std::ostream& err);

// argv front door used by the binary
int run_main(int argc, const char* const* argv);

}  // namespace edgescale
