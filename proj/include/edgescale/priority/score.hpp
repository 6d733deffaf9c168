#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "edgescale/core/model.hpp"

namespace edgescale {

// One priority score decomposed into its additive parts.
// total == static_part + workload_part + reward_part + penalty_part.
struct ScoreBreakdown {
  double static_part = 0.0;
  double workload_part = 0.0;
  double reward_part = 0.0;
  double penalty_part = 0.0;
  double total = 0.0;
};

// Per-round min-max ranges for the workload factors, used by the optional
// normalized scoring mode. apply() maps a raw factor into [0,1]; a
// degenerate range (hi == lo) maps everything to 0.
struct FactorRanges {
  double req_lo = 0.0, req_hi = 0.0;
  double users_lo = 0.0, users_hi = 0.0;
  double data_lo = 0.0, data_hi = 0.0;

  static FactorRanges over(const std::vector<const MetricsWindow*>& windows);

  static double apply(double x, double lo, double hi) {
    return hi > lo ? (x - lo) / (hi - lo) : 0.0;
  }
};

// Static priority: premium, arrival recency, age and loyalty. Depends only
// on the descriptor, so it never changes while the subscription stands.
double compute_sps(const ServerDescriptor& d, const Weights& w);

// Workload-aware priority. Under resource-based pricing (and the hybrid
// model) the workload factors add on top of the static score; under
// provider-based pricing they enter as reciprocals, so heavy consumers sink.
// Reciprocal denominators below 1 are clamped to 1. Throws
// std::invalid_argument when a reciprocal weight is 0 under PFP.
// `normalize`, when given, min-max scales the factors of the additive branch.
double compute_wdps(const ServerDescriptor& d, const MetricsWindow& m,
                    const Weights& w, PricingModel pricing,
                    const FactorRanges* normalize = nullptr);

// Workload priority plus the donation credit.
double compute_cdps(const ServerDescriptor& d, const MetricsWindow& m,
                    const Weights& w, PricingModel pricing, int reward_count,
                    const FactorRanges* normalize = nullptr);

// Donation-credited priority plus the churn penalty: servers that scale
// often gain less from each further operation. Throws when w_scale is 0.
double compute_sdps(const ServerDescriptor& d, const MetricsWindow& m,
                    const Weights& w, PricingModel pricing, int reward_count,
                    int scale_count, const FactorRanges* normalize = nullptr);

// Dispatches on the policy and reports the score with its decomposition.
// Policy must be a scoring policy; NoScaling has no score and throws.
ScoreBreakdown compute_priority(PriorityPolicy policy,
                                const ServerDescriptor& d,
                                const MetricsWindow& m, const Weights& w,
                                PricingModel pricing, int reward_count,
                                int scale_count,
                                const FactorRanges* normalize = nullptr);

struct RankEntry {
  std::size_t index = 0;  // position in the input list
  double score = 0.0;
};

// Orders servers for one scaling round, highest score first. Ties break by
// earlier arrival, then lexicographically smaller id, giving a total order
// independent of input permutation. SPM ranks by the score frozen on the
// runtime at deployment; the dynamic policies recompute from the windows.
// comparison_count, when non-null, accumulates comparator invocations.
std::vector<RankEntry> rank_servers(
    const std::vector<std::pair<const ServerRuntime*, const MetricsWindow*>>&
        servers,
    PriorityPolicy policy, const Weights& w, PricingModel pricing,
    bool normalize_workload_factors = false,
    std::size_t* comparison_count = nullptr);

}  // namespace edgescale
