#include "edgescale/priority/score.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace edgescale {

namespace {

// reciprocal terms clamp the denominator at 1 so empty factors cannot blow
// the score up to infinity
double guarded_reciprocal(double denominator) {
  return 1.0 / std::max(denominator, 1.0);
}

void require_nonzero(double w, const char* name) {
  if (w == 0.0) {
    throw std::invalid_argument(std::string(name) +
                                " must be non-zero under provider-based "
                                "pricing (it sits under a reciprocal)");
  }
}

double workload_terms(const MetricsWindow& m, const Weights& w,
                      PricingModel pricing, const FactorRanges* normalize) {
  double requests = static_cast<double>(m.requests);
  double users = static_cast<double>(m.users_seen);
  double data = m.data_kb;
  if (pricing == PricingModel::PFP) {
    require_nonzero(w.w_request, "w_request");
    require_nonzero(w.w_u, "w_u");
    require_nonzero(w.w_data, "w_data");
    return guarded_reciprocal(w.w_request * requests) +
           guarded_reciprocal(w.w_u * users) +
           guarded_reciprocal(w.w_data * data);
  }
  if (normalize != nullptr) {
    requests = FactorRanges::apply(requests, normalize->req_lo, normalize->req_hi);
    users = FactorRanges::apply(users, normalize->users_lo, normalize->users_hi);
    data = FactorRanges::apply(data, normalize->data_lo, normalize->data_hi);
  }
  return w.w_request * requests + w.w_u * users + w.w_data * data;
}

}  // namespace

FactorRanges FactorRanges::over(const std::vector<const MetricsWindow*>& windows) {
  FactorRanges r;
  bool first = true;
  for (const auto* m : windows) {
    const double req = static_cast<double>(m->requests);
    const double users = static_cast<double>(m->users_seen);
    if (first) {
      r.req_lo = r.req_hi = req;
      r.users_lo = r.users_hi = users;
      r.data_lo = r.data_hi = m->data_kb;
      first = false;
      continue;
    }
    r.req_lo = std::min(r.req_lo, req);
    r.req_hi = std::max(r.req_hi, req);
    r.users_lo = std::min(r.users_lo, users);
    r.users_hi = std::max(r.users_hi, users);
    r.data_lo = std::min(r.data_lo, m->data_kb);
    r.data_hi = std::max(r.data_hi, m->data_kb);
  }
  return r;
}

double compute_sps(const ServerDescriptor& d, const Weights& w) {
  return w.w_p * d.premium +
         w.w_id * guarded_reciprocal(static_cast<double>(d.arrival_ordinal)) +
         w.w_age * static_cast<double>(d.age) +
         w.w_loyalty * static_cast<double>(d.loyalty);
}

double compute_wdps(const ServerDescriptor& d, const MetricsWindow& m,
                    const Weights& w, PricingModel pricing,
                    const FactorRanges* normalize) {
  return compute_sps(d, w) + workload_terms(m, w, pricing, normalize);
}

double compute_cdps(const ServerDescriptor& d, const MetricsWindow& m,
                    const Weights& w, PricingModel pricing, int reward_count,
                    const FactorRanges* normalize) {
  return compute_wdps(d, m, w, pricing, normalize) +
         w.w_reward * static_cast<double>(reward_count);
}

double compute_sdps(const ServerDescriptor& d, const MetricsWindow& m,
                    const Weights& w, PricingModel pricing, int reward_count,
                    int scale_count, const FactorRanges* normalize) {
  require_nonzero(w.w_scale, "w_scale");
  return compute_cdps(d, m, w, pricing, reward_count, normalize) +
         guarded_reciprocal(w.w_scale * static_cast<double>(scale_count));
}

ScoreBreakdown compute_priority(PriorityPolicy policy,
                                const ServerDescriptor& d,
                                const MetricsWindow& m, const Weights& w,
                                PricingModel pricing, int reward_count,
                                int scale_count,
                                const FactorRanges* normalize) {
  ScoreBreakdown b;
  b.static_part = compute_sps(d, w);
  switch (policy) {
    case PriorityPolicy::NoScaling:
      throw std::invalid_argument(
          "the no-scaling baseline has no priority score");
    case PriorityPolicy::SPM:
      break;
    case PriorityPolicy::SDPS:
      if (w.w_scale == 0.0) {
        throw std::invalid_argument(
            "w_scale must be non-zero (it sits under a reciprocal)");
      }
      b.penalty_part =
          guarded_reciprocal(w.w_scale * static_cast<double>(scale_count));
      [[fallthrough]];
    case PriorityPolicy::CDPS:
      b.reward_part = w.w_reward * static_cast<double>(reward_count);
      [[fallthrough]];
    case PriorityPolicy::WDPS:
      b.workload_part = workload_terms(m, w, pricing, normalize);
      break;
  }
  b.total = b.static_part + b.workload_part + b.reward_part + b.penalty_part;
  return b;
}

std::vector<RankEntry> rank_servers(
    const std::vector<std::pair<const ServerRuntime*, const MetricsWindow*>>&
        servers,
    PriorityPolicy policy, const Weights& w, PricingModel pricing,
    bool normalize_workload_factors, std::size_t* comparison_count) {
  if (servers.empty()) {
    throw std::invalid_argument("rank_servers: empty server list");
  }
  if (policy == PriorityPolicy::NoScaling) {
    throw std::invalid_argument("rank_servers: baseline policy has no rank");
  }

  FactorRanges ranges;
  const FactorRanges* normalize = nullptr;
  if (normalize_workload_factors && policy != PriorityPolicy::SPM &&
      pricing != PricingModel::PFP) {
    std::vector<const MetricsWindow*> windows;
    windows.reserve(servers.size());
    for (const auto& [rt, m] : servers) windows.push_back(m);
    ranges = FactorRanges::over(windows);
    normalize = &ranges;
  }

  std::vector<RankEntry> out;
  out.reserve(servers.size());
  for (std::size_t i = 0; i < servers.size(); ++i) {
    const auto& [rt, m] = servers[i];
    // the static policy keeps the score frozen at deployment time
    const double score =
        policy == PriorityPolicy::SPM
            ? rt->score
            : compute_priority(policy, rt->descriptor, *m, w, pricing,
                               rt->reward_count, rt->scale_count, normalize)
                  .total;
    out.push_back({i, score});
  }

  std::sort(out.begin(), out.end(),
            [&](const RankEntry& a, const RankEntry& b) {
              if (comparison_count != nullptr) ++*comparison_count;
              if (a.score != b.score) return a.score > b.score;
              const auto& da = servers[a.index].first->descriptor;
              const auto& db = servers[b.index].first->descriptor;
              if (da.arrival_ordinal != db.arrival_ordinal) {
                return da.arrival_ordinal < db.arrival_ordinal;
              }
              return da.id < db.id;
            });
  return out;
}

}  // namespace edgescale
