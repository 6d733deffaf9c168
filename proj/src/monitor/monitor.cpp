#include "edgescale/monitor/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace edgescale {

Monitor::Slot& Monitor::slot(const std::string& id) {
  const auto it = servers_.find(id);
  if (it == servers_.end()) {
    throw std::out_of_range("monitor: unknown server id '" + id + "'");
  }
  return it->second;
}

const Monitor::Slot& Monitor::slot(const std::string& id) const {
  const auto it = servers_.find(id);
  if (it == servers_.end()) {
    throw std::out_of_range("monitor: unknown server id '" + id + "'");
  }
  return it->second;
}

void Monitor::register_server(const std::string& id) {
  if (servers_.contains(id)) {
    throw std::invalid_argument("monitor: duplicate server id '" + id + "'");
  }
  servers_.emplace(id, Slot{});
}

bool Monitor::has(const std::string& id) const { return servers_.contains(id); }

bool Monitor::is_active(const std::string& id) const { return slot(id).active; }

void Monitor::set_active(const std::string& id, bool active) {
  slot(id).active = active;
}

void Monitor::record_request(const std::string& id, Millis latency,
                             double data_kb) {
  auto& s = slot(id);
  if (!s.active) {
    throw std::logic_error("monitor: server '" + id +
                           "' is inactive, its traffic is not node traffic");
  }
  s.open.requests += 1;
  s.open.data_kb += data_kb;
  s.open.latency_samples_ms.push_back(latency.count());
}

void Monitor::record_users(const std::string& id, int users) {
  auto& s = slot(id);
  if (!s.active) {
    throw std::logic_error("monitor: server '" + id + "' is inactive");
  }
  s.open.users_seen = std::max(s.open.users_seen, users);
}

MetricsWindow Monitor::close_window(const std::string& id, Millis slo) {
  auto& s = slot(id);
  MetricsWindow closed = std::move(s.open);
  s.open = MetricsWindow{};

  if (closed.requests > 0) {
    const double sum = std::accumulate(closed.latency_samples_ms.begin(),
                                       closed.latency_samples_ms.end(), 0.0);
    closed.avg_latency = Millis{sum / static_cast<double>(closed.requests)};
    std::int64_t violated = 0;
    for (const double ms : closed.latency_samples_ms) {
      if (ms > slo.count()) ++violated;
    }
    closed.violation_rate = static_cast<double>(violated) /
                            static_cast<double>(closed.requests);
  }
  return closed;
}

namespace {

// shared tally over (window, slo) pairs; `per_request` picks the reading
double violation_tally(
    const std::vector<std::pair<MetricsWindow, Millis>>& windows,
    bool per_request) {
  double total = 0.0;
  double violated = 0.0;
  for (const auto& [w, slo] : windows) {
    total += static_cast<double>(w.requests);
    if (per_request) {
      if (static_cast<std::int64_t>(w.latency_samples_ms.size()) == w.requests) {
        for (const double ms : w.latency_samples_ms) {
          if (ms > slo.count()) violated += 1.0;
        }
      } else {
        // samples were dropped upstream; recover the count from the rate
        violated += std::round(w.violation_rate * static_cast<double>(w.requests));
      }
    } else if (w.avg_latency > slo) {
      violated += static_cast<double>(w.requests);
    }
  }
  if (total == 0.0) {
    throw std::domain_error("violation rate undefined: no requests in window");
  }
  return violated / total;
}

}  // namespace

double node_violation_rate(
    const std::vector<std::pair<MetricsWindow, Millis>>& windows) {
  return violation_tally(windows, /*per_request=*/false);
}

double request_violation_rate(
    const std::vector<std::pair<MetricsWindow, Millis>>& windows) {
  return violation_tally(windows, /*per_request=*/true);
}

}  // namespace edgescale
