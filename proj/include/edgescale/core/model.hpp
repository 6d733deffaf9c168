#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgescale/core/resources.hpp"

namespace edgescale {

// All durations are carried as fractional milliseconds.
using Millis = std::chrono::duration<double, std::milli>;

enum class PricingModel { PFR, PFP, Hybrid };

enum class PriorityPolicy { NoScaling, SPM, WDPS, CDPS, SDPS };

enum class DecisionKind { ScaleUp, ScaleDown, Donate, NoChange, Terminate };

enum class TerminateReason {
  Evicted,    // resources reclaimed for a higher-priority server
  Inactive,   // no longer serving anyone
  NoBenefit,  // edge placement is not faster than the cloud path
};

std::string to_string(PricingModel m);
std::string to_string(PriorityPolicy p);
std::string to_string(DecisionKind k);
std::string to_string(TerminateReason r);
PricingModel pricing_from_string(const std::string& s);
PriorityPolicy policy_from_string(const std::string& s);
DecisionKind decision_kind_from_string(const std::string& s);
TerminateReason terminate_reason_from_string(const std::string& s);

// Scoring weights. Every factor has its own knob; 1.0 everywhere means all
// factors pull with equal strength.
struct Weights {
  double w_p = 1.0;        // premium tier
  double w_id = 1.0;       // arrival recency (applied to 1/ordinal)
  double w_age = 1.0;      // times previously pushed off a node
  double w_loyalty = 1.0;  // billing cycles completed
  double w_request = 1.0;  // requests served in the window
  double w_u = 1.0;        // active users
  double w_data = 1.0;     // data transferred in the window
  double w_reward = 1.0;   // voluntary donations
  double w_scale = 1.0;    // scaling churn (applied as a reciprocal)

  constexpr bool operator==(const Weights&) const = default;
};

// Per-server traffic description. Requests per round are drawn uniformly in
// [request_rate*(1-rate_spread), request_rate*(1+rate_spread)] from the
// workload substream of the run seed, so the trace is a pure function of the
// seed and never depends on the policy under test.
struct WorkloadSpec {
  double request_rate = 1.0;      // nominal requests per round
  double rate_spread = 0.0;       // relative half-width of the per-round draw
  double data_per_request = 1.0;  // kilobytes transferred per request
  double service_demand = 1.0;    // CPU shares consumed per request per round

  constexpr bool operator==(const WorkloadSpec&) const = default;
};

std::optional<std::string> validate(const WorkloadSpec& w);

// Static identity of a tenant server as agreed at subscription time.
struct ServerDescriptor {
  std::string id;
  int users = 1;                // subscribed users, > 0
  Millis slo_latency{0};        // agreed latency ceiling, > 0
  bool donation = false;        // volunteers idle resources when comfortable
  double down_threshold = 0.8;  // fraction of the SLO below which we shrink
  double premium = 0.0;         // price tier, unitless, >= 0
  int arrival_ordinal = 1;      // deployment sequence number, >= 1
  int age = 0;                  // times terminated by a node so far, >= 0
  int loyalty = 0;              // completed billing cycles, >= 0
  WorkloadSpec workload;
  Millis net_latency_edge{0};   // network distance to this node
  Millis net_latency_cloud{0};  // network distance to the cloud fallback
  bool stateful = false;        // needs state migration when terminated

  bool operator==(const ServerDescriptor&) const = default;
};

// Returns std::nullopt when the descriptor is usable, otherwise a message
// naming the offending field.
std::optional<std::string> validate_descriptor(const ServerDescriptor& d);

// Live state of a deployed server on one node.
struct ServerRuntime {
  ServerDescriptor descriptor;
  ResourceVector allocation;
  double score = 0.0;    // priority score as of the last ranking
  int reward_count = 0;  // donations credited, never decreases
  int scale_count = 0;   // scaling operations applied, never decreases
  bool active = true;

  bool operator==(const ServerRuntime&) const = default;
};

// One closed observation window for one server.
struct MetricsWindow {
  std::int64_t requests = 0;
  int users_seen = 0;
  double data_kb = 0.0;
  Millis avg_latency{0};
  double violation_rate = 0.0;  // per-request, against this server's SLO
  std::vector<double> latency_samples_ms;

  bool operator==(const MetricsWindow&) const = default;
};

struct ScalingDecision {
  DecisionKind kind = DecisionKind::NoChange;
  ResourceVector amount;  // meaningful for ScaleUp/ScaleDown/Donate
  TerminateReason reason = TerminateReason::Inactive;  // for Terminate

  bool operator==(const ScalingDecision&) const = default;

  static ScalingDecision scale_up(ResourceVector amount) {
    return {DecisionKind::ScaleUp, amount, TerminateReason::Inactive};
  }
  static ScalingDecision scale_down(ResourceVector amount) {
    return {DecisionKind::ScaleDown, amount, TerminateReason::Inactive};
  }
  static ScalingDecision donate(ResourceVector amount) {
    return {DecisionKind::Donate, amount, TerminateReason::Inactive};
  }
  static ScalingDecision no_change() { return {}; }
  static ScalingDecision terminate(TerminateReason r) {
    return {DecisionKind::Terminate, {}, r};
  }
};

}  // namespace edgescale
