#pragma once

#include <optional>
#include <string>

#include "edgescale/core/model.hpp"

namespace edgescale {

// CPU-bound service model: a request pays the network hop plus a service
// time that degrades once demand exceeds the allocated CPU. Memory is
// accounted for in allocations but does not shape latency here.
struct LatencyModelParams {
  Millis base_service_time{50.0};   // uncontended service time
  double contention_exponent = 1.0; // how sharply overload hurts, >= 1
  double noise_cv = 0.0;            // stddev of the multiplicative jitter

  bool operator==(const LatencyModelParams&) const = default;
};

std::optional<std::string> validate(const LatencyModelParams& p);

// utilization = demanded CPU / allocated CPU; below saturation the service
// time is flat, above it grows as utilization^exponent
double contention_multiplier(double utilization, double exponent);

// jitter is the drawn relative deviation; the multiplier (1 + jitter) is
// clamped at 0.05 so a deep negative draw cannot produce negative time
Millis edge_request_latency(const LatencyModelParams& p, Millis net_edge,
                            double utilization, double jitter);

// the cloud path is assumed uncontended: network hop plus flat service time
Millis cloud_request_latency(const LatencyModelParams& p, Millis net_cloud,
                             double jitter);

}  // namespace edgescale
