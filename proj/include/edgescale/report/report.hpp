#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "edgescale/core/model.hpp"
#include "edgescale/priority/score.hpp"
#include "edgescale/sim/simulator.hpp"

namespace edgescale {

// Requests bucketed against their own SLO target. The region up to the SLO
// is split into a wide band below 0.8*SLO and 5%-of-SLO steps above it;
// anything beyond the SLO is a violation and lands in the overflow band.
struct LatencyBands {
  static constexpr std::array<double, 5> kUpperFractions{0.80, 0.85, 0.90,
                                                         0.95, 1.00};
  std::array<std::int64_t, 5> counts{};
  std::int64_t overflow = 0;

  std::int64_t total() const;  // equals the number of bucketed samples
  std::int64_t met() const;    // samples at or under their SLO
  // share of SLO-met requests that finished in the lowest band; 0 when none
  double lowest_band_share() const;

  bool operator==(const LatencyBands&) const = default;
};

// Each sample is judged against the SLO it was served under. Throws
// std::invalid_argument when no sample is left to bucket.
LatencyBands latency_histogram(const std::vector<LatencySample>& samples,
                               bool include_cloud = true);
LatencyBands latency_histogram(const std::vector<double>& latencies_ms,
                               Millis slo);
LatencyBands latency_histogram(const Timeline& timeline,
                               bool include_cloud = true);

struct CurveKey {
  PriorityPolicy policy = PriorityPolicy::NoScaling;
  int n_servers = 0;

  auto operator<=>(const CurveKey&) const = default;
};

struct CurveRow {
  PriorityPolicy policy = PriorityPolicy::NoScaling;
  int n_servers = 0;
  double mean_vr_e = 0;
  double stddev_vr_e = 0;  // population stddev across the seeds
  int seeds = 0;

  bool operator==(const CurveRow&) const = default;
};

// One row per key, in key order. Throws std::invalid_argument on an empty
// table or a key with no timelines behind it.
std::vector<CurveRow> violation_curve(
    const std::map<CurveKey, std::vector<Timeline>>& by_key);

// groups a flat batch by the (policy, fleet size) stamped on each timeline
std::map<CurveKey, std::vector<Timeline>> group_timelines(
    const std::vector<Timeline>& timelines);

// One axis of a weight grid: `weight` names a Weights field ("w_p", "w_id",
// "w_age", "w_loyalty", "w_request", "w_u", "w_data", "w_reward",
// "w_scale"); `steps` grid points spread evenly over [lo, hi].
struct WeightRange {
  std::string weight;
  double lo = 0;
  double hi = 1;
  int steps = 1;
};

struct SweepCell {
  std::vector<double> weight_values;  // one per axis, axis order
  ScoreBreakdown score;
};

// Evaluates the priority score of one server over the cartesian product of
// the axes (last axis fastest). Throws std::invalid_argument on an unknown
// weight name or a non-positive step count.
std::vector<SweepCell> weight_sweep(const ServerDescriptor& descriptor,
                                    const MetricsWindow& metrics,
                                    PriorityPolicy policy,
                                    PricingModel pricing, Weights base,
                                    const std::vector<WeightRange>& axes,
                                    int reward_count = 0,
                                    int scale_count = 0);

// Line-delimited trace, one record per round:
//   {"round":..,"policy":..,"pricing":..,"vr_e":..,"servers":[{"id":..,
//    "score":..,"allocation_cpu":..,"allocation_mem":..,"requests":..,
//    "avg_latency_ms":..,"vr_s":..,"decision":..,"reward_count":..,
//    "scale_count":..,"age":..,"active":..},..]}
// Reals carry 6 significant digits; the byte stream is a pure function of
// the timeline. I/O failures surface as std::runtime_error with the path.
void export_trace(const Timeline& timeline,
                  const std::filesystem::path& destination);

struct TraceServerEntry {
  std::string id;
  double score = 0;
  std::int64_t allocation_cpu = 0;
  std::int64_t allocation_mem = 0;
  std::int64_t requests = 0;
  double avg_latency_ms = 0;
  double vr_s = 0;
  std::string decision;
  int reward_count = 0;
  int scale_count = 0;
  int age = 0;
  bool active = true;

  bool operator==(const TraceServerEntry&) const = default;
};

struct TraceRound {
  int round = 0;
  std::string policy;
  std::string pricing;
  double vr_e = 0;
  std::vector<TraceServerEntry> servers;

  bool operator==(const TraceRound&) const = default;
};

std::vector<TraceRound> import_trace(const std::filesystem::path& source);

// Tabular summaries with a header row, for plotting elsewhere.
void write_curve_csv(const std::vector<CurveRow>& rows,
                     const std::filesystem::path& destination);
void write_bands_csv(
    const std::vector<std::pair<std::string, LatencyBands>>& labelled,
    const std::filesystem::path& destination);
void write_sweep_csv(const std::vector<WeightRange>& axes,
                     const std::vector<SweepCell>& cells,
                     const std::filesystem::path& destination);

}  // namespace edgescale
