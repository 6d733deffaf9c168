#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgescale/core/model.hpp"
#include "edgescale/monitor/monitor.hpp"
#include "edgescale/scaler/scaler.hpp"
#include "edgescale/sim/latency.hpp"
#include "edgescale/sim/node.hpp"

namespace edgescale {

struct NodeConfig {
  ResourceVector capacity{3200, 1600};
  ResourceVector unit{64, 32};
  ResourceVector min_allocation{64, 32};
  Millis round_interval{300000.0};  // simulated wall time per round
  int rounds = 16;
  PriorityPolicy policy = PriorityPolicy::SDPS;
  PricingModel pricing = PricingModel::PFR;
  Weights weights;
  LatencyModelParams latency;
  bool normalize_workload_factors = false;
  double migration_data_kb = 0.0;
  double migration_bandwidth_kb_s = 1024.0;
  std::uint64_t seed = 1;

  bool operator==(const NodeConfig&) const = default;
};

std::optional<std::string> validate(const NodeConfig& cfg);

// One served request, kept for latency histograms. Cloud samples come from
// users whose server was terminated on the node; they still generate load.
struct LatencySample {
  double latency_ms = 0;
  double slo_ms = 0;
  bool cloud = false;

  bool operator==(const LatencySample&) const = default;
};

struct ServerRoundRecord {
  std::string id;
  double score = 0;
  ResourceVector allocation;
  std::int64_t requests = 0;  // served this round, edge or cloud
  double avg_latency_ms = 0;
  double violation_rate = 0;
  ScalingDecision decision = ScalingDecision::no_change();
  int reward_count = 0;
  int scale_count = 0;
  int age = 0;
  bool active = false;

  bool operator==(const ServerRoundRecord&) const = default;
};

struct RoundRecord {
  int round_index = 0;
  double vr_e = 0;        // node violation rate entering the scaling pass
  double vr_e_after = 0;  // same metric over servers still active afterwards
  double request_vr = 0;  // per-request violation share on the node
  double request_vr_all = 0;  // per-request share including cloud traffic
  std::size_t op_count = 0;
  Millis migration_delay{0};
  std::vector<ServerRoundRecord> servers;  // deployment order, all servers
  std::vector<EvictionRecord> evictions;
  std::vector<LatencySample> samples;

  bool operator==(const RoundRecord&) const = default;
};

struct Timeline {
  PriorityPolicy policy = PriorityPolicy::NoScaling;
  PricingModel pricing = PricingModel::PFR;
  std::uint64_t seed = 0;
  int n_servers = 0;
  std::vector<RoundRecord> rounds;

  bool operator==(const Timeline&) const = default;
};

// mean of per-round vr_e; the headline number for policy comparisons
double timeline_mean_vr_e(const Timeline& t);

class Simulator {
 public:
  // deploys the servers with equal shares; throws std::invalid_argument on
  // a bad config or descriptor set
  Simulator(NodeConfig cfg, std::vector<ServerDescriptor> descriptors);

  const EdgeNode& node() const { return node_; }
  const NodeConfig& config() const { return cfg_; }
  int completed_rounds() const { return round_; }

  // draws one round of traffic, runs the scaling pass, snapshots the result
  RoundRecord simulate_round();

  // runs the configured number of rounds from a fresh deployment
  Timeline run();

 private:
  NodeConfig cfg_;
  EdgeNode node_;
  Monitor monitor_;
  int round_ = 0;
};

Timeline run_scenario(const NodeConfig& cfg,
                      const std::vector<ServerDescriptor>& descriptors);

}  // namespace edgescale
