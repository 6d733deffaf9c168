#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "edgescale/core/model.hpp"
#include "edgescale/sim/node.hpp"

namespace edgescale {

struct EvictionRecord {
  std::string victim;
  ResourceVector freed;
  std::string cause;  // id of the server whose scale-up needed the room

  bool operator==(const EvictionRecord&) const = default;
};

struct TerminationResult {
  ResourceVector freed;
  Millis migration_delay{0.0};
};

struct ScaleUpResult {
  ResourceVector applied;
  std::vector<EvictionRecord> evictions;
  Millis migration_delay{0.0};
};

// Everything one scaling round did, in the order it did it.
struct RoundReport {
  int round_index = 0;
  std::vector<std::string> ordering;  // ids by rank, highest first
  std::map<std::string, ScalingDecision> decisions;
  std::vector<EvictionRecord> evictions;
  double vr_e_before = 0.0;  // over servers active at round start
  double vr_e_after = 0.0;   // over servers still active afterwards
  std::size_t op_count = 0;  // comparisons + mutations performed
  Millis migration_delay{0.0};
};

// Maps one server's closed window onto a scaling decision:
//   - gone, or the edge hop is no faster than the cloud hop -> Terminate
//   - mean latency above the SLO -> ScaleUp by ceil(allocation * VR_s),
//     at least one unit
//   - mean latency in (down_threshold * SLO, SLO] -> Donate one unit if the
//     server volunteers, otherwise leave it alone
//   - at or below down_threshold * SLO -> ScaleDown one unit
ScalingDecision decide(const ServerRuntime& rt, const MetricsWindow& m,
                       const ResourceVector& unit);

// Grants `amount` to `id`, evicting strictly lower-ranked active servers
// (lowest rank first) while the free pool falls short. When nobody below is
// left, grants whatever the pool still covers; partial and even zero grants
// are legal outcomes. Counts as one scaling operation for `id`; every victim
// ages by one. `ranked_ids` is this round's order, highest rank first, and
// must contain `id`.
ScaleUpResult scale_up(EdgeNode& node, const std::string& id,
                       const ResourceVector& amount,
                       const std::vector<std::string>& ranked_ids,
                       std::size_t* op_count = nullptr);

// Releases min(amount, headroom above the floor) back to the pool; at the
// floor this frees nothing. An ordinary call counts as a scaling operation;
// a donation call credits the reward counter instead.
ResourceVector scale_down(EdgeNode& node, const std::string& id,
                          const ResourceVector& amount, bool donation,
                          std::size_t* op_count = nullptr);

// Marks the server gone, returns its whole allocation to the pool and ages
// it by one. Stateful servers charge a migration delay of
// state size / migration bandwidth. Terminating an already-gone server is a
// no-op that frees nothing.
TerminationResult terminate_server(EdgeNode& node, const std::string& id,
                                   TerminateReason reason);

// One full scaling pass over the node, given the windows closed for this
// round: rank everyone, then walk the ranking applying decide() and the
// mutations above. Servers evicted mid-round before their turn are reported
// as terminated by eviction. Under the NoScaling baseline the node is left
// untouched and every decision reads NoChange. Throws when an active server
// has no window in `windows`.
RoundReport scaling_round(EdgeNode& node,
                          const std::map<std::string, MetricsWindow>& windows,
                          PriorityPolicy policy, const Weights& weights,
                          PricingModel pricing,
                          bool normalize_workload_factors = false,
                          int round_index = 0);

}  // namespace edgescale
