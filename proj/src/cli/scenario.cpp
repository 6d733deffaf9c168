#include "edgescale/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "edgescale/core/rng.hpp"
#include "json.hpp"

namespace edgescale {

namespace {

using nlohmann::json;

constexpr std::string_view kWeightNames[] = {
    "w_p",    "w_id",   "w_age",    "w_loyalty", "w_request",
    "w_u",    "w_data", "w_reward", "w_scale"};

struct Ctx {
  std::string origin;
  bool strict;
};

[[noreturn]] void bail(const Ctx& c, const std::string& msg) {
  throw std::runtime_error(c.origin + ": " + msg);
}

void check_keys(const Ctx& c, const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  if (!c.strict) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known)
      bail(c, "unknown key \"" +
                  (path.empty() ? it.key() : path + "." + it.key()) + "\"");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const Ctx& c, const json& obj, const char* key,
                    const std::string& path) {
  const json* j = find(obj, key);
  if (j == nullptr) bail(c, path + "." + key + " is required");
  return *j;
}

double as_number(const Ctx& c, const json& j, const std::string& path) {
  if (!j.is_number()) bail(c, path + " must be a number");
  return j.get<double>();
}

std::int64_t as_integer(const Ctx& c, const json& j, const std::string& path) {
  if (!j.is_number_integer()) bail(c, path + " must be an integer");
  return j.get<std::int64_t>();
}

bool as_boolean(const Ctx& c, const json& j, const std::string& path) {
  if (!j.is_boolean()) bail(c, path + " must be a boolean");
  return j.get<bool>();
}

std::string as_text(const Ctx& c, const json& j, const std::string& path) {
  if (!j.is_string()) bail(c, path + " must be a string");
  return j.get<std::string>();
}

ValueRange as_range(const Ctx& c, const json& j, const std::string& path) {
  if (j.is_number()) {
    double v = j.get<double>();
    return {v, v};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    ValueRange r{j[0].get<double>(), j[1].get<double>()};
    if (r.hi < r.lo) bail(c, path + ": hi < lo");
    return r;
  }
  bail(c, path + " must be a number or a [lo, hi] pair");
}

ResourceVector as_resources(const Ctx& c, const json& j,
                            const std::string& path) {
  if (!j.is_object()) bail(c, path + " must be an object {cpu, mem}");
  check_keys(c, j, path, {"cpu", "mem"});
  ResourceVector r;
  r.cpu = as_integer(c, require(c, j, "cpu", path), path + ".cpu");
  r.mem = as_integer(c, require(c, j, "mem", path), path + ".mem");
  return r;
}

void parse_weights(const Ctx& c, const json& j, const std::string& path,
                   Weights& w) {
  if (!j.is_object()) bail(c, path + " must be an object");
  check_keys(c, j, path,
             {"w_p", "w_id", "w_age", "w_loyalty", "w_request", "w_u",
              "w_data", "w_reward", "w_scale"});
  auto grab = [&](const char* key, double& slot) {
    if (const json* v = find(j, key))
      slot = as_number(c, *v, path + "." + key);
  };
  grab("w_p", w.w_p);
  grab("w_id", w.w_id);
  grab("w_age", w.w_age);
  grab("w_loyalty", w.w_loyalty);
  grab("w_request", w.w_request);
  grab("w_u", w.w_u);
  grab("w_data", w.w_data);
  grab("w_reward", w.w_reward);
  grab("w_scale", w.w_scale);
}

void parse_node(const Ctx& c, const json& j, NodeConfig& node) {
  const std::string path = "node";
  if (!j.is_object()) bail(c, path + " must be an object");
  check_keys(c, j, path,
             {"capacity", "unit", "min_allocation", "round_interval_ms",
              "rounds", "policy", "pricing", "weights", "latency",
              "normalize_workload_factors", "migration_data_kb",
              "migration_bandwidth_kb_s"});
  if (const json* v = find(j, "capacity"))
    node.capacity = as_resources(c, *v, path + ".capacity");
  if (const json* v = find(j, "unit"))
    node.unit = as_resources(c, *v, path + ".unit");
  if (const json* v = find(j, "min_allocation"))
    node.min_allocation = as_resources(c, *v, path + ".min_allocation");
  if (const json* v = find(j, "round_interval_ms"))
    node.round_interval =
        Millis{as_number(c, *v, path + ".round_interval_ms")};
  if (const json* v = find(j, "rounds"))
    node.rounds = static_cast<int>(as_integer(c, *v, path + ".rounds"));
  if (const json* v = find(j, "policy")) {
    try {
      node.policy = policy_from_string(as_text(c, *v, path + ".policy"));
    } catch (const std::invalid_argument& e) {
      bail(c, path + ".policy: " + e.what());
    }
  }
  if (const json* v = find(j, "pricing")) {
    try {
      node.pricing = pricing_from_string(as_text(c, *v, path + ".pricing"));
    } catch (const std::invalid_argument& e) {
      bail(c, path + ".pricing: " + e.what());
    }
  }
  if (const json* v = find(j, "weights"))
    parse_weights(c, *v, path + ".weights", node.weights);
  if (const json* v = find(j, "latency")) {
    const std::string lpath = path + ".latency";
    if (!v->is_object()) bail(c, lpath + " must be an object");
    check_keys(c, *v, lpath,
               {"base_service_time_ms", "contention_exponent", "noise_cv"});
    if (const json* x = find(*v, "base_service_time_ms"))
      node.latency.base_service_time =
          Millis{as_number(c, *x, lpath + ".base_service_time_ms")};
    if (const json* x = find(*v, "contention_exponent"))
      node.latency.contention_exponent =
          as_number(c, *x, lpath + ".contention_exponent");
    if (const json* x = find(*v, "noise_cv"))
      node.latency.noise_cv = as_number(c, *x, lpath + ".noise_cv");
  }
  if (const json* v = find(j, "normalize_workload_factors"))
    node.normalize_workload_factors =
        as_boolean(c, *v, path + ".normalize_workload_factors");
  if (const json* v = find(j, "migration_data_kb"))
    node.migration_data_kb = as_number(c, *v, path + ".migration_data_kb");
  if (const json* v = find(j, "migration_bandwidth_kb_s"))
    node.migration_bandwidth_kb_s =
        as_number(c, *v, path + ".migration_bandwidth_kb_s");
}

ServerTemplate parse_template(const Ctx& c, const json& j,
                              const std::string& path) {
  if (!j.is_object()) bail(c, path + " must be an object");
  check_keys(c, j, path,
             {"count", "id_prefix", "users", "slo_ms", "down_threshold",
              "premium", "loyalty", "donation_rate", "stateful_rate",
              "request_rate", "request_rate_per_user", "rate_spread",
              "data_per_request_kb", "service_demand", "net_edge_ms",
              "net_cloud_ms"});
  ServerTemplate t;
  if (const json* v = find(j, "count"))
    t.count = static_cast<int>(as_integer(c, *v, path + ".count"));
  t.id_prefix = as_text(c, require(c, j, "id_prefix", path), path + ".id_prefix");
  t.users = as_range(c, require(c, j, "users", path), path + ".users");
  t.slo = Millis{as_number(c, require(c, j, "slo_ms", path), path + ".slo_ms")};
  if (const json* v = find(j, "down_threshold"))
    t.down_threshold = as_number(c, *v, path + ".down_threshold");
  if (const json* v = find(j, "premium"))
    t.premium = as_range(c, *v, path + ".premium");
  if (const json* v = find(j, "loyalty"))
    t.loyalty = as_range(c, *v, path + ".loyalty");
  if (const json* v = find(j, "donation_rate"))
    t.donation_rate = as_number(c, *v, path + ".donation_rate");
  if (const json* v = find(j, "stateful_rate"))
    t.stateful_rate = as_number(c, *v, path + ".stateful_rate");
  const json* rate = find(j, "request_rate");
  const json* per_user = find(j, "request_rate_per_user");
  if ((rate != nullptr) == (per_user != nullptr))
    bail(c, path + ": exactly one of request_rate and "
                   "request_rate_per_user is required");
  if (rate != nullptr)
    t.request_rate = as_number(c, *rate, path + ".request_rate");
  else
    t.request_rate_per_user =
        as_number(c, *per_user, path + ".request_rate_per_user");
  if (const json* v = find(j, "rate_spread"))
    t.rate_spread = as_number(c, *v, path + ".rate_spread");
  if (const json* v = find(j, "data_per_request_kb"))
    t.data_per_request_kb = as_number(c, *v, path + ".data_per_request_kb");
  if (const json* v = find(j, "service_demand"))
    t.service_demand = as_number(c, *v, path + ".service_demand");
  t.net_edge = Millis{
      as_number(c, require(c, j, "net_edge_ms", path), path + ".net_edge_ms")};
  t.net_cloud = Millis{as_number(c, require(c, j, "net_cloud_ms", path),
                                 path + ".net_cloud_ms")};

  // field-path validation beyond what descriptor validation will re-check
  if (t.count < 1) bail(c, path + ".count must be >= 1");
  if (t.id_prefix.empty()) bail(c, path + ".id_prefix must be non-empty");
  if (t.users.lo < 1) bail(c, path + ".users must be >= 1");
  if (t.slo.count() <= 0) bail(c, path + ".slo_ms must be > 0");
  if (t.down_threshold <= 0 || t.down_threshold >= 1)
    bail(c, path + ".down_threshold must be in (0, 1)");
  if (t.premium.lo < 0) bail(c, path + ".premium must be >= 0");
  if (t.loyalty.lo < 0) bail(c, path + ".loyalty must be >= 0");
  if (t.donation_rate < 0 || t.donation_rate > 1)
    bail(c, path + ".donation_rate must be in [0, 1]");
  if (t.stateful_rate < 0 || t.stateful_rate > 1)
    bail(c, path + ".stateful_rate must be in [0, 1]");
  if (rate != nullptr && t.request_rate <= 0)
    bail(c, path + ".request_rate must be > 0");
  if (per_user != nullptr && t.request_rate_per_user <= 0)
    bail(c, path + ".request_rate_per_user must be > 0");
  if (t.rate_spread < 0 || t.rate_spread >= 1)
    bail(c, path + ".rate_spread must be in [0, 1)");
  if (t.data_per_request_kb <= 0)
    bail(c, path + ".data_per_request_kb must be > 0");
  if (t.service_demand <= 0) bail(c, path + ".service_demand must be > 0");
  if (t.net_edge.count() < 0) bail(c, path + ".net_edge_ms must be >= 0");
  if (t.net_cloud.count() < 0) bail(c, path + ".net_cloud_ms must be >= 0");
  return t;
}

std::vector<int> scaled_counts(const Scenario& s, int n_servers) {
  const int total = total_server_count(s);
  std::vector<int> counts;
  counts.reserve(s.servers.size());
  int assigned = 0;
  for (const auto& tpl : s.servers) {
    int c = static_cast<int>(static_cast<std::int64_t>(tpl.count) *
                             n_servers / total);
    counts.push_back(c);
    assigned += c;
  }
  // hand the rounding remainder out template by template
  for (std::size_t i = 0; assigned < n_servers;
       i = (i + 1) % counts.size()) {
    ++counts[i];
    ++assigned;
  }
  return counts;
}

std::string padded(int value, int width) {
  std::string digits = std::to_string(value);
  return digits.size() >= static_cast<std::size_t>(width)
             ? digits
             : std::string(width - digits.size(), '0') + digits;
}

std::vector<ServerDescriptor> expand_with_counts(
    const Scenario& s, std::uint64_t seed, const std::vector<int>& counts) {
  std::vector<ServerDescriptor> out;
  int ordinal = 0;
  for (std::size_t t = 0; t < s.servers.size(); ++t) {
    const auto& tpl = s.servers[t];
    const int width = static_cast<int>(std::to_string(counts[t]).size());
    for (int k = 0; k < counts[t]; ++k) {
      ++ordinal;
      // one substream per fleet slot: attribute draws of one server cannot
      // shift those of another
      SubstreamRng rng(seed, SubstreamRng::kExpandStream,
                       static_cast<std::uint64_t>(ordinal), 0);
      ServerDescriptor d;
      d.id = tpl.id_prefix + "-" + padded(k + 1, width);
      d.users = static_cast<int>(
          rng.uniform_int(std::llround(tpl.users.lo),
                          std::llround(tpl.users.hi)));
      d.premium = rng.uniform(tpl.premium.lo, tpl.premium.hi);
      d.loyalty = static_cast<int>(
          rng.uniform_int(std::llround(tpl.loyalty.lo),
                          std::llround(tpl.loyalty.hi)));
      d.donation = rng.uniform01() < tpl.donation_rate;
      d.stateful = rng.uniform01() < tpl.stateful_rate;
      d.slo_latency = tpl.slo;
      d.down_threshold = tpl.down_threshold;
      d.arrival_ordinal = ordinal;
      d.workload.request_rate =
          tpl.request_rate_per_user > 0
              ? tpl.request_rate_per_user * static_cast<double>(d.users)
              : tpl.request_rate;
      d.workload.rate_spread = tpl.rate_spread;
      d.workload.data_per_request = tpl.data_per_request_kb;
      d.workload.service_demand = tpl.service_demand;
      d.net_latency_edge = tpl.net_edge;
      d.net_latency_cloud = tpl.net_cloud;
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Run: return "run";
    case Experiment::ComparePolicies: return "compare_policies";
    case Experiment::SweepServers: return "sweep_servers";
    case Experiment::SweepWeights: return "sweep_weights";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& s) {
  if (s == "run") return Experiment::Run;
  if (s == "compare_policies") return Experiment::ComparePolicies;
  if (s == "sweep_servers") return Experiment::SweepServers;
  if (s == "sweep_weights") return Experiment::SweepWeights;
  throw std::invalid_argument("unknown experiment: " + s);
}

int total_server_count(const Scenario& s) {
  int total = 0;
  for (const auto& tpl : s.servers) total += tpl.count;
  return total;
}

Scenario parse_scenario_text(const std::string& text,
                             const std::string& origin, bool strict) {
  Ctx c{origin, strict};
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "... at line L, column C ..." for text input
    bail(c, e.what());
  }
  if (!root.is_object()) bail(c, "top level must be an object");
  check_keys(c, root, "",
             {"node", "servers", "experiment", "seeds", "server_counts",
              "weight_axes"});

  Scenario s;
  s.name = origin;
  if (const json* v = find(root, "node")) parse_node(c, *v, s.node);

  const json& servers = require(c, root, "servers", "scenario");
  if (!servers.is_array() || servers.empty())
    bail(c, "servers must be a non-empty array");
  std::set<std::string> prefixes;
  for (std::size_t i = 0; i < servers.size(); ++i) {
    auto tpl = parse_template(c, servers[i],
                              "servers[" + std::to_string(i) + "]");
    if (!prefixes.insert(tpl.id_prefix).second)
      bail(c, "servers[" + std::to_string(i) + "].id_prefix \"" +
                  tpl.id_prefix + "\" is already used");
    s.servers.push_back(std::move(tpl));
  }

  if (const json* v = find(root, "experiment")) {
    try {
      s.experiment = experiment_from_string(as_text(c, *v, "experiment"));
    } catch (const std::invalid_argument& e) {
      bail(c, std::string("experiment: ") + e.what());
    }
  }
  if (const json* v = find(root, "seeds")) {
    if (!v->is_array() || v->empty())
      bail(c, "seeds must be a non-empty array");
    s.seeds.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      auto sd = as_integer(c, (*v)[i], "seeds[" + std::to_string(i) + "]");
      if (sd < 0) bail(c, "seeds[" + std::to_string(i) + "] must be >= 0");
      s.seeds.push_back(static_cast<std::uint64_t>(sd));
    }
  }
  if (const json* v = find(root, "server_counts")) {
    if (!v->is_array() || v->empty())
      bail(c, "server_counts must be a non-empty array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      auto n = as_integer(c, (*v)[i],
                          "server_counts[" + std::to_string(i) + "]");
      if (n < 1)
        bail(c, "server_counts[" + std::to_string(i) + "] must be >= 1");
      s.server_counts.push_back(static_cast<int>(n));
    }
  }
  if (const json* v = find(root, "weight_axes")) {
    if (!v->is_array() || v->empty())
      bail(c, "weight_axes must be a non-empty array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "weight_axes[" + std::to_string(i) + "]";
      const json& axis = (*v)[i];
      if (!axis.is_object()) bail(c, path + " must be an object");
      check_keys(c, axis, path, {"weight", "lo", "hi", "steps"});
      WeightRange r;
      r.weight = as_text(c, require(c, axis, "weight", path), path + ".weight");
      bool known = false;
      for (auto name : kWeightNames) known = known || r.weight == name;
      if (!known) bail(c, path + ".weight: unknown weight " + r.weight);
      r.lo = as_number(c, require(c, axis, "lo", path), path + ".lo");
      r.hi = as_number(c, require(c, axis, "hi", path), path + ".hi");
      r.steps = static_cast<int>(
          as_integer(c, require(c, axis, "steps", path), path + ".steps"));
      if (r.steps < 1) bail(c, path + ".steps must be >= 1");
      if (r.hi < r.lo) bail(c, path + ": hi < lo");
      s.weight_axes.push_back(std::move(r));
    }
  }

  if (s.experiment == Experiment::SweepServers && s.server_counts.empty())
    bail(c, "experiment sweep_servers needs server_counts");
  if (s.experiment == Experiment::SweepWeights && s.weight_axes.empty())
    bail(c, "experiment sweep_weights needs weight_axes");

  if (auto err = validate(s.node)) bail(c, "node: " + *err);

  // the fleet must fit at its largest requested size
  int max_fleet = total_server_count(s);
  for (int n : s.server_counts) max_fleet = std::max(max_fleet, n);
  const auto share = component_div_floor(s.node.capacity, max_fleet);
  if (!share.covers(s.node.min_allocation))
    bail(c, "capacity cannot give " + std::to_string(max_fleet) +
                " servers the minimum allocation");
  return s;
}

Scenario parse_scenario(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open scenario: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  Scenario s = parse_scenario_text(ss.str(), path.filename().string(), strict);
  s.name = path.stem().string();
  return s;
}

std::vector<ServerDescriptor> expand_servers(const Scenario& s,
                                             std::uint64_t seed) {
  std::vector<int> counts;
  counts.reserve(s.servers.size());
  for (const auto& tpl : s.servers) counts.push_back(tpl.count);
  return expand_with_counts(s, seed, counts);
}

std::vector<ServerDescriptor> expand_servers(const Scenario& s,
                                             std::uint64_t seed,
                                             int n_servers) {
  if (n_servers < 1)
    throw std::invalid_argument("fleet size must be >= 1");
  return expand_with_counts(s, seed, scaled_counts(s, n_servers));
}

}  // namespace edgescale
