#include "edgescale/sim/latency.hpp"

#include <algorithm>
#include <cmath>

namespace edgescale {

std::optional<std::string> validate(const LatencyModelParams& p) {
  if (p.base_service_time.count() <= 0)
    return "base_service_time must be > 0";
  if (p.contention_exponent < 1.0) return "contention_exponent must be >= 1";
  if (p.noise_cv < 0.0 || p.noise_cv >= 1.0)
    return "noise_cv must be in [0, 1)";
  return std::nullopt;
}

double contention_multiplier(double utilization, double exponent) {
  return std::pow(std::max(1.0, utilization), exponent);
}

namespace {

// multiplicative jitter, floored so pathological draws stay positive
double jitter_multiplier(double jitter) {
  return std::max(0.05, 1.0 + jitter);
}

}  // namespace

Millis edge_request_latency(const LatencyModelParams& p, Millis net_edge,
                            double utilization, double jitter) {
  double service = contention_multiplier(utilization, p.contention_exponent) *
                   jitter_multiplier(jitter);
  return net_edge + p.base_service_time * service;
}

Millis cloud_request_latency(const LatencyModelParams& p, Millis net_cloud,
                             double jitter) {
  return net_cloud + p.base_service_time * jitter_multiplier(jitter);
}

}  // namespace edgescale
