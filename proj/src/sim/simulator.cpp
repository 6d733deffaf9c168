#include "edgescale/sim/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "edgescale/core/rng.hpp"

namespace edgescale {

std::optional<std::string> validate(const NodeConfig& cfg) {
  if (!cfg.capacity.strictly_positive()) return "capacity must be positive";
  if (!cfg.unit.strictly_positive()) return "unit must be positive";
  if (!cfg.min_allocation.strictly_positive())
    return "min_allocation must be positive";
  if (!cfg.capacity.covers(cfg.unit)) return "unit must fit into capacity";
  if (cfg.round_interval.count() <= 0) return "round_interval must be > 0";
  if (cfg.rounds <= 0) return "rounds must be > 0";
  for (double w : {cfg.weights.w_p, cfg.weights.w_id, cfg.weights.w_age,
                   cfg.weights.w_loyalty, cfg.weights.w_request,
                   cfg.weights.w_u, cfg.weights.w_data, cfg.weights.w_reward,
                   cfg.weights.w_scale})
    if (w < 0) return "weights must be non-negative";
  if (auto err = validate(cfg.latency)) return *err;
  if (cfg.migration_data_kb < 0) return "migration_data_kb must be >= 0";
  if (cfg.migration_bandwidth_kb_s <= 0)
    return "migration_bandwidth_kb_s must be > 0";
  return std::nullopt;
}

double timeline_mean_vr_e(const Timeline& t) {
  if (t.rounds.empty()) return 0.0;
  double sum = 0;
  for (const auto& r : t.rounds) sum += r.vr_e;
  return sum / static_cast<double>(t.rounds.size());
}

Simulator::Simulator(NodeConfig cfg, std::vector<ServerDescriptor> descriptors)
    : cfg_(std::move(cfg)) {
  if (auto err = validate(cfg_))
    throw std::invalid_argument("node config: " + *err);
  node_.capacity = cfg_.capacity;
  node_.unit = cfg_.unit;
  node_.min_allocation = cfg_.min_allocation;
  node_.migration_data_kb = cfg_.migration_data_kb;
  node_.migration_bandwidth_kb_s = cfg_.migration_bandwidth_kb_s;
  deploy(node_, std::move(descriptors), cfg_.weights);
  for (const auto& rt : node_.servers)
    monitor_.register_server(rt.descriptor.id);
}

RoundRecord Simulator::simulate_round() {
  ++round_;
  RoundRecord rec;
  rec.round_index = round_;

  // Traffic served off-node after a termination: tallied separately because
  // the monitor only tracks servers that are still on the edge.
  struct CloudTally {
    std::int64_t requests = 0;
    double latency_sum_ms = 0;
    std::int64_t violated = 0;
  };
  std::map<std::string, CloudTally> cloud;
  std::vector<std::string> active_at_start;

  for (auto& rt : node_.servers) {
    const auto& d = rt.descriptor;
    auto key = static_cast<std::uint64_t>(d.arrival_ordinal);
    auto rnd = static_cast<std::uint64_t>(round_);
    SubstreamRng workload(cfg_.seed, SubstreamRng::kWorkloadStream, key, rnd);
    SubstreamRng noise(cfg_.seed, SubstreamRng::kNoiseStream, key, rnd);

    double spread = d.workload.rate_spread;
    double rate = workload.uniform(d.workload.request_rate * (1.0 - spread),
                                   d.workload.request_rate * (1.0 + spread));
    auto requests = std::llround(rate);
    if (requests < 0) requests = 0;

    if (rt.active) {
      active_at_start.push_back(d.id);
      double util = static_cast<double>(requests) * d.workload.service_demand /
                    static_cast<double>(rt.allocation.cpu);
      for (std::int64_t i = 0; i < requests; ++i) {
        double jitter = cfg_.latency.noise_cv * noise.normal();
        Millis lat =
            edge_request_latency(cfg_.latency, d.net_latency_edge, util, jitter);
        monitor_.record_request(d.id, lat, d.workload.data_per_request);
        rec.samples.push_back({lat.count(), d.slo_latency.count(), false});
      }
      monitor_.record_users(d.id, d.users);
    } else {
      auto& tally = cloud[d.id];
      for (std::int64_t i = 0; i < requests; ++i) {
        double jitter = cfg_.latency.noise_cv * noise.normal();
        Millis lat =
            cloud_request_latency(cfg_.latency, d.net_latency_cloud, jitter);
        ++tally.requests;
        tally.latency_sum_ms += lat.count();
        if (lat > d.slo_latency) ++tally.violated;
        rec.samples.push_back({lat.count(), d.slo_latency.count(), true});
      }
    }
  }

  std::map<std::string, MetricsWindow> windows;
  for (const auto& rt : node_.servers)
    windows.emplace(rt.descriptor.id,
                    monitor_.close_window(rt.descriptor.id,
                                          rt.descriptor.slo_latency));

  RoundReport rep =
      scaling_round(node_, windows, cfg_.policy, cfg_.weights, cfg_.pricing,
                    cfg_.normalize_workload_factors, round_);

  for (const auto& rt : node_.servers)
    if (!rt.active && monitor_.is_active(rt.descriptor.id))
      monitor_.set_active(rt.descriptor.id, false);

  rec.vr_e = rep.vr_e_before;
  rec.vr_e_after = rep.vr_e_after;
  rec.op_count = rep.op_count;
  rec.migration_delay = rep.migration_delay;
  rec.evictions = rep.evictions;

  std::vector<std::pair<MetricsWindow, Millis>> node_pairs;
  std::int64_t node_requests = 0;
  for (const auto& id : active_at_start) {
    const auto& w = windows.at(id);
    node_requests += w.requests;
    node_pairs.emplace_back(w, node_.find(id)->descriptor.slo_latency);
  }
  rec.request_vr =
      node_requests > 0 ? request_violation_rate(node_pairs) : 0.0;

  std::size_t violated_all = 0;
  for (const auto& s : rec.samples)
    violated_all += s.latency_ms > s.slo_ms ? 1 : 0;
  rec.request_vr_all =
      rec.samples.empty()
          ? 0.0
          : static_cast<double>(violated_all) / rec.samples.size();

  for (const auto& rt : node_.servers) {
    ServerRoundRecord s;
    s.id = rt.descriptor.id;
    s.score = rt.score;
    s.allocation = rt.allocation;
    s.reward_count = rt.reward_count;
    s.scale_count = rt.scale_count;
    s.age = rt.descriptor.age;
    s.active = rt.active;
    if (auto it = rep.decisions.find(s.id); it != rep.decisions.end())
      s.decision = it->second;
    if (auto it = cloud.find(s.id); it != cloud.end()) {
      s.requests = it->second.requests;
      if (it->second.requests > 0) {
        s.avg_latency_ms =
            it->second.latency_sum_ms / static_cast<double>(it->second.requests);
        s.violation_rate = static_cast<double>(it->second.violated) /
                           static_cast<double>(it->second.requests);
      }
    } else {
      const auto& w = windows.at(s.id);
      s.requests = w.requests;
      s.avg_latency_ms = w.avg_latency.count();
      s.violation_rate = w.violation_rate;
    }
    rec.servers.push_back(std::move(s));
  }
  return rec;
}

Timeline Simulator::run() {
  Timeline t;
  t.policy = cfg_.policy;
  t.pricing = cfg_.pricing;
  t.seed = cfg_.seed;
  t.n_servers = static_cast<int>(node_.servers.size());
  t.rounds.reserve(static_cast<std::size_t>(cfg_.rounds));
  for (int r = 0; r < cfg_.rounds; ++r) t.rounds.push_back(simulate_round());
  return t;
}

Timeline run_scenario(const NodeConfig& cfg,
                      const std::vector<ServerDescriptor>& descriptors) {
  return Simulator(cfg, descriptors).run();
}

}  // namespace edgescale
