#include "edgescale/report/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace edgescale {

namespace {

// fixed 6-significant-digit rendering; the trace byte layout depends on it
std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

void bucket(LatencyBands& h, double latency_ms, double slo_ms) {
  if (latency_ms > slo_ms) {
    ++h.overflow;
    return;
  }
  for (std::size_t i = 0; i < h.kUpperFractions.size(); ++i) {
    if (latency_ms < h.kUpperFractions[i] * slo_ms) {
      ++h.counts[i];
      return;
    }
  }
  ++h.counts.back();  // exactly the SLO
}

void require_samples(const LatencyBands& h) {
  if (h.total() == 0) throw std::invalid_argument("no latency samples");
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + p.string());
  return out;
}

void finish_out(std::ofstream& out, const std::filesystem::path& p) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

double Weights::* weight_field(const std::string& name) {
  static const std::map<std::string, double Weights::*> table = {
      {"w_p", &Weights::w_p},
      {"w_id", &Weights::w_id},
      {"w_age", &Weights::w_age},
      {"w_loyalty", &Weights::w_loyalty},
      {"w_request", &Weights::w_request},
      {"w_u", &Weights::w_u},
      {"w_data", &Weights::w_data},
      {"w_reward", &Weights::w_reward},
      {"w_scale", &Weights::w_scale},
  };
  auto it = table.find(name);
  if (it == table.end())
    throw std::invalid_argument("unknown weight: " + name);
  return it->second;
}

}  // namespace

std::int64_t LatencyBands::total() const {
  return std::accumulate(counts.begin(), counts.end(), overflow);
}

std::int64_t LatencyBands::met() const { return total() - overflow; }

double LatencyBands::lowest_band_share() const {
  auto m = met();
  return m > 0 ? static_cast<double>(counts[0]) / static_cast<double>(m)
               : 0.0;
}

LatencyBands latency_histogram(const std::vector<LatencySample>& samples,
                               bool include_cloud) {
  LatencyBands h;
  for (const auto& s : samples)
    if (include_cloud || !s.cloud) bucket(h, s.latency_ms, s.slo_ms);
  require_samples(h);
  return h;
}

LatencyBands latency_histogram(const std::vector<double>& latencies_ms,
                               Millis slo) {
  LatencyBands h;
  for (double x : latencies_ms) bucket(h, x, slo.count());
  require_samples(h);
  return h;
}

LatencyBands latency_histogram(const Timeline& timeline, bool include_cloud) {
  LatencyBands h;
  for (const auto& r : timeline.rounds)
    for (const auto& s : r.samples)
      if (include_cloud || !s.cloud) bucket(h, s.latency_ms, s.slo_ms);
  require_samples(h);
  return h;
}

std::vector<CurveRow> violation_curve(
    const std::map<CurveKey, std::vector<Timeline>>& by_key) {
  if (by_key.empty()) throw std::invalid_argument("no timelines to curve");
  std::vector<CurveRow> rows;
  for (const auto& [key, timelines] : by_key) {
    if (timelines.empty())
      throw std::invalid_argument("no timelines for policy " +
                                  to_string(key.policy) + ", n=" +
                                  std::to_string(key.n_servers));
    double mean = 0;
    for (const auto& t : timelines) mean += timeline_mean_vr_e(t);
    mean /= static_cast<double>(timelines.size());
    double var = 0;
    for (const auto& t : timelines) {
      double d = timeline_mean_vr_e(t) - mean;
      var += d * d;
    }
    var /= static_cast<double>(timelines.size());
    rows.push_back({key.policy, key.n_servers, mean, std::sqrt(var),
                    static_cast<int>(timelines.size())});
  }
  return rows;
}

std::map<CurveKey, std::vector<Timeline>> group_timelines(
    const std::vector<Timeline>& timelines) {
  std::map<CurveKey, std::vector<Timeline>> grouped;
  for (const auto& t : timelines)
    grouped[{t.policy, t.n_servers}].push_back(t);
  return grouped;
}

std::vector<SweepCell> weight_sweep(const ServerDescriptor& descriptor,
                                    const MetricsWindow& metrics,
                                    PriorityPolicy policy,
                                    PricingModel pricing, Weights base,
                                    const std::vector<WeightRange>& axes,
                                    int reward_count, int scale_count) {
  std::size_t cells = 1;
  for (const auto& axis : axes) {
    weight_field(axis.weight);  // validates the name
    if (axis.steps <= 0)
      throw std::invalid_argument("axis " + axis.weight +
                                  ": steps must be > 0");
    if (axis.hi < axis.lo)
      throw std::invalid_argument("axis " + axis.weight + ": hi < lo");
    cells *= static_cast<std::size_t>(axis.steps);
  }

  auto axis_value = [](const WeightRange& a, int i) {
    return a.steps == 1
               ? a.lo
               : a.lo + (a.hi - a.lo) * static_cast<double>(i) /
                     static_cast<double>(a.steps - 1);
  };

  std::vector<SweepCell> out;
  out.reserve(cells);
  std::vector<int> idx(axes.size(), 0);
  for (std::size_t c = 0; c < cells; ++c) {
    Weights w = base;
    SweepCell cell;
    cell.weight_values.reserve(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a) {
      double v = axis_value(axes[a], idx[a]);
      w.*weight_field(axes[a].weight) = v;
      cell.weight_values.push_back(v);
    }
    cell.score = compute_priority(policy, descriptor, metrics, w, pricing,
                                  reward_count, scale_count);
    out.push_back(std::move(cell));
    for (std::size_t a = axes.size(); a-- > 0;) {  // odometer, last fastest
      if (++idx[a] < axes[a].steps) break;
      idx[a] = 0;
    }
  }
  return out;
}

void export_trace(const Timeline& timeline,
                  const std::filesystem::path& destination) {
  auto out = open_out(destination);
  for (const auto& r : timeline.rounds) {
    out << "{\"round\":" << r.round_index << ",\"policy\":"
        << quoted(to_string(timeline.policy))
        << ",\"pricing\":" << quoted(to_string(timeline.pricing))
        << ",\"vr_e\":" << fmt_real(r.vr_e) << ",\"servers\":[";
    bool first = true;
    for (const auto& s : r.servers) {
      if (!first) out << ',';
      first = false;
      out << "{\"id\":" << quoted(s.id) << ",\"score\":" << fmt_real(s.score)
          << ",\"allocation_cpu\":" << s.allocation.cpu
          << ",\"allocation_mem\":" << s.allocation.mem
          << ",\"requests\":" << s.requests
          << ",\"avg_latency_ms\":" << fmt_real(s.avg_latency_ms)
          << ",\"vr_s\":" << fmt_real(s.violation_rate)
          << ",\"decision\":" << quoted(to_string(s.decision.kind))
          << ",\"reward_count\":" << s.reward_count
          << ",\"scale_count\":" << s.scale_count << ",\"age\":" << s.age
          << ",\"active\":" << (s.active ? "true" : "false") << '}';
    }
    out << "]}\n";
  }
  finish_out(out, destination);
}

std::vector<TraceRound> import_trace(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace: " + source.string());
  std::vector<TraceRound> rounds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      TraceRound r;
      r.round = j.at("round").get<int>();
      r.policy = j.at("policy").get<std::string>();
      r.pricing = j.at("pricing").get<std::string>();
      r.vr_e = j.at("vr_e").get<double>();
      for (const auto& js : j.at("servers")) {
        TraceServerEntry s;
        s.id = js.at("id").get<std::string>();
        s.score = js.at("score").get<double>();
        s.allocation_cpu = js.at("allocation_cpu").get<std::int64_t>();
        s.allocation_mem = js.at("allocation_mem").get<std::int64_t>();
        s.requests = js.at("requests").get<std::int64_t>();
        s.avg_latency_ms = js.at("avg_latency_ms").get<double>();
        s.vr_s = js.at("vr_s").get<double>();
        s.decision = js.at("decision").get<std::string>();
        s.reward_count = js.at("reward_count").get<int>();
        s.scale_count = js.at("scale_count").get<int>();
        s.age = js.at("age").get<int>();
        s.active = js.at("active").get<bool>();
        r.servers.push_back(std::move(s));
      }
      rounds.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(source.string() + ":" +
                               std::to_string(line_no) +
                               ": bad trace record: " + e.what());
    }
  }
  return rounds;
}

void write_curve_csv(const std::vector<CurveRow>& rows,
                     const std::filesystem::path& destination) {
  auto out = open_out(destination);
  out << "policy,n_servers,mean_vr_e,stddev_vr_e,seeds\n";
  for (const auto& r : rows)
    out << to_string(r.policy) << ',' << r.n_servers << ','
        << fmt_real(r.mean_vr_e) << ',' << fmt_real(r.stddev_vr_e) << ','
        << r.seeds << '\n';
  finish_out(out, destination);
}

void write_bands_csv(
    const std::vector<std::pair<std::string, LatencyBands>>& labelled,
    const std::filesystem::path& destination) {
  auto out = open_out(destination);
  out << "label,under_80pct,band_80_85,band_85_90,band_90_95,band_95_100,"
         "violated\n";
  for (const auto& [label, h] : labelled) {
    out << label;
    for (auto c : h.counts) out << ',' << c;
    out << ',' << h.overflow << '\n';
  }
  finish_out(out, destination);
}

void write_sweep_csv(const std::vector<WeightRange>& axes,
                     const std::vector<SweepCell>& cells,
                     const std::filesystem::path& destination) {
  auto out = open_out(destination);
  for (const auto& a : axes) out << a.weight << ',';
  out << "static_part,workload_part,reward_part,penalty_part,total\n";
  for (const auto& c : cells) {
    for (double v : c.weight_values) out << fmt_real(v) << ',';
    out << fmt_real(c.score.static_part) << ','
        << fmt_real(c.score.workload_part) << ','
        << fmt_real(c.score.reward_part) << ','
        << fmt_real(c.score.penalty_part) << ',' << fmt_real(c.score.total)
        << '\n';
  }
  finish_out(out, destination);
}

}  // namespace edgescale
