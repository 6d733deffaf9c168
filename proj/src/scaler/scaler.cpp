#include "edgescale/scaler/scaler.hpp"

#include <algorithm>
#include <stdexcept>

#include "edgescale/monitor/monitor.hpp"
#include "edgescale/priority/score.hpp"

namespace edgescale {

namespace {

void bump(std::size_t* op_count, std::size_t by = 1) {
  if (op_count != nullptr) *op_count += by;
}

ServerRuntime& active_server(EdgeNode& node, const std::string& id) {
  auto* s = node.find(id);
  if (s == nullptr) {
    throw std::out_of_range("scaler: unknown server id '" + id + "'");
  }
  if (!s->active) {
    throw std::logic_error("scaler: server '" + id + "' is not active");
  }
  return *s;
}

// violation rate over the given (window, slo) pairs with the zero-request
// case read as "nothing violated"
double rate_or_zero(const std::vector<std::pair<MetricsWindow, Millis>>& w) {
  std::int64_t total = 0;
  for (const auto& [win, slo] : w) total += win.requests;
  return total == 0 ? 0.0 : node_violation_rate(w);
}

}  // namespace

ScalingDecision decide(const ServerRuntime& rt, const MetricsWindow& m,
                       const ResourceVector& unit) {
  if (!rt.active) {
    return ScalingDecision::terminate(TerminateReason::Inactive);
  }
  if (rt.descriptor.net_latency_edge >= rt.descriptor.net_latency_cloud) {
    return ScalingDecision::terminate(TerminateReason::NoBenefit);
  }
  const Millis slo = rt.descriptor.slo_latency;
  if (m.avg_latency > slo) {
    // grow by the violated share of the current allocation, one unit minimum
    const auto amount =
        component_max(scale_ceil(rt.allocation, m.violation_rate), unit);
    return ScalingDecision::scale_up(amount);
  }
  if (m.avg_latency > slo * rt.descriptor.down_threshold) {
    return rt.descriptor.donation ? ScalingDecision::donate(unit)
                                  : ScalingDecision::no_change();
  }
  return ScalingDecision::scale_down(unit);
}

ScaleUpResult scale_up(EdgeNode& node, const std::string& id,
                       const ResourceVector& amount,
                       const std::vector<std::string>& ranked_ids,
                       std::size_t* op_count) {
  auto& s = active_server(node, id);
  const auto pos_it = std::find(ranked_ids.begin(), ranked_ids.end(), id);
  if (pos_it == ranked_ids.end()) {
    throw std::invalid_argument("scale_up: '" + id + "' missing from ranking");
  }
  const auto pos = static_cast<std::size_t>(pos_it - ranked_ids.begin());

  ScaleUpResult res;
  while (!node.free.covers(amount)) {
    bump(op_count);
    // reclaim from the bottom of the ranking, never from `id` or above it
    ServerRuntime* victim = nullptr;
    std::size_t victim_pos = ranked_ids.size();
    while (victim_pos > pos + 1) {
      --victim_pos;
      bump(op_count);
      auto* cand = node.find(ranked_ids[victim_pos]);
      if (cand != nullptr && cand->active) {
        victim = cand;
        break;
      }
    }
    if (victim == nullptr) break;  // nobody below is left to displace

    const std::string victim_id = victim->descriptor.id;
    const auto term = terminate_server(node, victim_id, TerminateReason::Evicted);
    bump(op_count);
    res.evictions.push_back({victim_id, term.freed, id});
    res.migration_delay += term.migration_delay;
  }

  res.applied = component_min(amount, node.free);
  node.free -= res.applied;
  s.allocation += res.applied;
  s.scale_count += 1;
  bump(op_count);
  return res;
}

ResourceVector scale_down(EdgeNode& node, const std::string& id,
                          const ResourceVector& amount, bool donation,
                          std::size_t* op_count) {
  auto& s = active_server(node, id);
  const ResourceVector headroom{
      std::max<std::int64_t>(0, s.allocation.cpu - node.min_allocation.cpu),
      std::max<std::int64_t>(0, s.allocation.mem - node.min_allocation.mem)};
  const auto freed = component_min(amount, headroom);
  s.allocation -= freed;
  node.free += freed;
  if (donation) {
    s.reward_count += 1;
  } else {
    s.scale_count += 1;
  }
  bump(op_count);
  return freed;
}

TerminationResult terminate_server(EdgeNode& node, const std::string& id,
                                   TerminateReason /*reason*/) {
  auto* s = node.find(id);
  if (s == nullptr) {
    throw std::out_of_range("terminate: unknown server id '" + id + "'");
  }
  if (!s->active) return {};

  TerminationResult res;
  res.freed = s->allocation;
  node.free += res.freed;
  s->allocation = ResourceVector{};
  s->active = false;
  s->descriptor.age += 1;
  if (s->descriptor.stateful) {
    if (!(node.migration_bandwidth_kb_s > 0)) {
      throw std::logic_error("terminate: migration bandwidth must be > 0");
    }
    res.migration_delay =
        Millis{node.migration_data_kb / node.migration_bandwidth_kb_s * 1000.0};
  }
  return res;
}

RoundReport scaling_round(EdgeNode& node,
                          const std::map<std::string, MetricsWindow>& windows,
                          PriorityPolicy policy, const Weights& weights,
                          PricingModel pricing,
                          bool normalize_workload_factors, int round_index) {
  RoundReport rep;
  rep.round_index = round_index;

  std::vector<ServerRuntime*> active;
  std::vector<std::pair<MetricsWindow, Millis>> before;
  for (auto& rt : node.servers) {
    if (!rt.active) continue;
    const auto it = windows.find(rt.descriptor.id);
    if (it == windows.end()) {
      throw std::invalid_argument("scaling_round: no window for server '" +
                                  rt.descriptor.id + "'");
    }
    active.push_back(&rt);
    before.emplace_back(it->second, rt.descriptor.slo_latency);
  }
  rep.vr_e_before = rate_or_zero(before);

  if (policy == PriorityPolicy::NoScaling) {
    for (const auto* rt : active) {
      rep.ordering.push_back(rt->descriptor.id);
      rep.decisions.emplace(rt->descriptor.id, ScalingDecision::no_change());
    }
    rep.vr_e_after = rep.vr_e_before;
    return rep;
  }
  if (active.empty()) return rep;

  std::vector<std::pair<const ServerRuntime*, const MetricsWindow*>> pairs;
  pairs.reserve(active.size());
  for (const auto* rt : active) {
    pairs.emplace_back(rt, &windows.at(rt->descriptor.id));
  }
  const auto ranked = rank_servers(pairs, policy, weights, pricing,
                                   normalize_workload_factors, &rep.op_count);
  rep.op_count += active.size();  // one score refresh per server

  for (const auto& entry : ranked) {
    auto* rt = active[entry.index];
    rt->score = entry.score;
    rep.ordering.push_back(rt->descriptor.id);
  }

  for (const auto& id : rep.ordering) {
    auto* rt = node.find(id);
    bump(&rep.op_count);
    if (!rt->active) {
      // consumed earlier this round by a higher-ranked scale-up
      rep.decisions.emplace(
          id, ScalingDecision::terminate(TerminateReason::Evicted));
      continue;
    }
    const auto decision = decide(*rt, windows.at(id), node.unit);
    rep.decisions.emplace(id, decision);
    switch (decision.kind) {
      case DecisionKind::ScaleUp: {
        auto res = scale_up(node, id, decision.amount, rep.ordering,
                            &rep.op_count);
        rep.migration_delay += res.migration_delay;
        for (auto& ev : res.evictions) rep.evictions.push_back(std::move(ev));
        break;
      }
      case DecisionKind::ScaleDown:
        scale_down(node, id, decision.amount, /*donation=*/false,
                   &rep.op_count);
        break;
      case DecisionKind::Donate:
        scale_down(node, id, decision.amount, /*donation=*/true,
                   &rep.op_count);
        break;
      case DecisionKind::Terminate: {
        const auto res = terminate_server(node, id, decision.reason);
        rep.migration_delay += res.migration_delay;
        bump(&rep.op_count);
        break;
      }
      case DecisionKind::NoChange:
        break;
    }
  }

  std::vector<std::pair<MetricsWindow, Millis>> after;
  for (const auto* rt : active) {
    if (rt->active) {
      after.emplace_back(windows.at(rt->descriptor.id),
                         rt->descriptor.slo_latency);
    }
  }
  rep.vr_e_after = rate_or_zero(after);
  return rep;
}

}  // namespace edgescale
