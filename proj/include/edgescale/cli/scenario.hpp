#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "edgescale/core/model.hpp"
#include "edgescale/report/report.hpp"
#include "edgescale/sim/simulator.hpp"

namespace edgescale {

// Inclusive numeric range; a scalar in the file collapses it to a point.
struct ValueRange {
  double lo = 0;
  double hi = 0;

  bool operator==(const ValueRange&) const = default;
};

// One fleet entry: either a single server (count 1) or a template expanded
// into `count` servers whose per-server attributes are drawn from the given
// ranges. Expansion is a pure function of the run seed.
struct ServerTemplate {
  int count = 1;
  std::string id_prefix;
  ValueRange users{1, 1};
  Millis slo{0};
  double down_threshold = 0.8;
  ValueRange premium{0, 0};
  ValueRange loyalty{0, 0};
  double donation_rate = 0;  // probability a server volunteers spare units
  double stateful_rate = 0;  // probability a server needs state migration
  double request_rate = 0;          // absolute requests per round, or
  double request_rate_per_user = 0; // rate = per_user * drawn users
  double rate_spread = 0;
  double data_per_request_kb = 1;
  double service_demand = 1;
  Millis net_edge{0};
  Millis net_cloud{0};

  bool operator==(const ServerTemplate&) const = default;
};

enum class Experiment { Run, ComparePolicies, SweepServers, SweepWeights };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

struct Scenario {
  std::string name;  // file stem, used to name output files
  NodeConfig node;
  std::vector<ServerTemplate> servers;
  Experiment experiment = Experiment::Run;
  std::vector<std::uint64_t> seeds{1};
  std::vector<int> server_counts;        // sweep_servers grid
  std::vector<WeightRange> weight_axes;  // sweep_weights grid
};

// Strict structured-text parsing: unknown keys are rejected with their full
// path, parse errors carry the line number, validation errors carry the
// field path. `strict=false` tolerates unknown keys (useful for files that
// carry annotations for other tools).
Scenario parse_scenario(const std::filesystem::path& path, bool strict = true);
Scenario parse_scenario_text(const std::string& text,
                             const std::string& origin, bool strict = true);

int total_server_count(const Scenario& s);

// Expands the fleet deterministically for one run seed: ids are numbered per
// template, arrival ordinals run 1..N in listing order, and every drawn
// attribute comes from the expansion substream of the seed.
std::vector<ServerDescriptor> expand_servers(const Scenario& s,
                                             std::uint64_t seed);

// Same, but rescales the template counts proportionally so the fleet totals
// `n_servers` (for server-count sweeps at fixed capacity).
std::vector<ServerDescriptor> expand_servers(const Scenario& s,
                                             std::uint64_t seed,
                                             int n_servers);

}  // namespace edgescale
