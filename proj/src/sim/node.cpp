#include "edgescale/sim/node.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "edgescale/priority/score.hpp"

namespace edgescale {

ServerRuntime* EdgeNode::find(const std::string& id) {
  for (auto& s : servers) {
    if (s.descriptor.id == id) return &s;
  }
  return nullptr;
}

const ServerRuntime* EdgeNode::find(const std::string& id) const {
  for (const auto& s : servers) {
    if (s.descriptor.id == id) return &s;
  }
  return nullptr;
}

ResourceVector EdgeNode::active_allocation() const {
  ResourceVector total;
  for (const auto& s : servers) {
    if (s.active) total += s.allocation;
  }
  return total;
}

bool EdgeNode::conserves_capacity() const {
  return active_allocation() + free == capacity;
}

const std::vector<ServerRuntime>& deploy(
    EdgeNode& node, const std::vector<ServerDescriptor>& descriptors,
    const Weights& weights) {
  if (descriptors.empty()) {
    throw std::invalid_argument("deploy: no servers to deploy");
  }
  if (!node.unit.strictly_positive() ||
      !node.min_allocation.strictly_positive()) {
    throw std::invalid_argument(
        "deploy: scaling unit and minimum allocation must be positive");
  }

  std::set<std::string> ids;
  std::set<int> ordinals;
  for (const auto& d : descriptors) {
    if (auto err = validate_descriptor(d)) {
      throw std::invalid_argument("deploy: server '" + d.id + "': " + *err);
    }
    if (!ids.insert(d.id).second) {
      throw std::invalid_argument("deploy: duplicate server id '" + d.id + "'");
    }
    if (!ordinals.insert(d.arrival_ordinal).second) {
      throw std::invalid_argument(
          "deploy: duplicate arrival ordinal for '" + d.id + "'");
    }
  }

  const auto n = static_cast<std::int64_t>(descriptors.size());
  const ResourceVector share = component_div_floor(node.capacity, n);
  if (!share.covers(node.min_allocation)) {
    throw std::invalid_argument(
        "deploy: capacity cannot give " + std::to_string(n) +
        " servers the minimum allocation");
  }

  node.servers.clear();
  node.servers.reserve(descriptors.size());
  for (const auto& d : descriptors) {
    ServerRuntime rt;
    rt.descriptor = d;
    rt.allocation = share;
    rt.score = compute_sps(d, weights);
    rt.active = true;
    node.servers.push_back(std::move(rt));
  }
  node.free = node.capacity - component_mul(share, n);
  return node.servers;
}

}  // namespace edgescale
