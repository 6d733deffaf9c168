#pragma once

#include <string>
#include <vector>

#include "edgescale/core/model.hpp"

namespace edgescale {

// One edge node: a fixed capacity, the servers deployed on it and the free
// pool. The standing invariant is exact conservation: the active
// allocations plus the free pool always equal the capacity, in integer
// arithmetic, after every mutation.
struct EdgeNode {
  ResourceVector capacity;
  ResourceVector unit{64, 32};            // one vertical scaling step
  ResourceVector min_allocation{64, 32};  // floor for active servers
  ResourceVector free;
  double migration_data_kb = 0.0;          // state size of a stateful server
  double migration_bandwidth_kb_s = 1024.0;
  std::vector<ServerRuntime> servers;

  ServerRuntime* find(const std::string& id);
  const ServerRuntime* find(const std::string& id) const;

  ResourceVector active_allocation() const;
  bool conserves_capacity() const;
};

// Splits the capacity evenly across the descriptors (componentwise floor),
// leaving the indivisible remainder in the free pool. Every runtime starts
// active with zeroed counters and its static score attached. Throws when the
// descriptor list is empty, a descriptor is invalid, ids or arrival ordinals
// collide, or the capacity cannot give everyone the minimum allocation.
const std::vector<ServerRuntime>& deploy(
    EdgeNode& node, const std::vector<ServerDescriptor>& descriptors,
    const Weights& weights);

}  // namespace edgescale
