#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "edgescale/core/model.hpp"

namespace edgescale {

// Node-level collection of the windows closed at the end of one round.
struct NodeMetrics {
  std::map<std::string, MetricsWindow> per_server;
  double vr_e = 0.0;  // server-average violation reading, request-weighted
};

// Collects per-server request observations and hands out closed windows.
// Servers must be registered before anything can be recorded against them,
// and recording against a deactivated server is an error: traffic of a
// server that left the node is not this node's traffic.
class Monitor {
 public:
  void register_server(const std::string& id);
  bool has(const std::string& id) const;
  bool is_active(const std::string& id) const;
  void set_active(const std::string& id, bool active);

  // Appends one request observation. Throws std::out_of_range for unknown
  // ids and std::logic_error when the server is inactive.
  void record_request(const std::string& id, Millis latency, double data_kb);

  // Notes the subscriber count seen this window (kept as the maximum).
  void record_users(const std::string& id, int users);

  // Finalizes the open window against the given SLO and starts a fresh one.
  // Average and violation rate are 0 when no request arrived. Closing an
  // inactive server's window is fine and yields an empty window.
  MetricsWindow close_window(const std::string& id, Millis slo);

 private:
  struct Slot {
    MetricsWindow open;
    bool active = true;
  };
  Slot& slot(const std::string& id);
  const Slot& slot(const std::string& id) const;
  std::map<std::string, Slot> servers_;
};

// Server-average violation reading over closed windows: each window counts
// as violated when its mean latency exceeds its SLO (strictly), weighted by
// the requests it served. Throws std::domain_error when the windows carry no
// requests at all, since the rate is undefined then.
double node_violation_rate(
    const std::vector<std::pair<MetricsWindow, Millis>>& windows);

// Per-request violation reading over the same input: every sample is
// compared against its server's SLO individually. Same zero-request error.
double request_violation_rate(
    const std::vector<std::pair<MetricsWindow, Millis>>& windows);

}  // namespace edgescale
