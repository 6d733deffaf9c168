#pragma once

// JSON round-trip support for the core value types. Deserializing the output
// of serialization is an exact identity for every type here.

#include <json.hpp>

#include "edgescale/core/model.hpp"

namespace edgescale {

inline void to_json(nlohmann::json& j, const ResourceVector& v) {
  j = nlohmann::json{{"cpu", v.cpu}, {"mem", v.mem}};
}

inline void from_json(const nlohmann::json& j, ResourceVector& v) {
  j.at("cpu").get_to(v.cpu);
  j.at("mem").get_to(v.mem);
}

inline void to_json(nlohmann::json& j, const WorkloadSpec& w) {
  j = nlohmann::json{{"request_rate", w.request_rate},
                     {"rate_spread", w.rate_spread},
                     {"data_per_request", w.data_per_request},
                     {"service_demand", w.service_demand}};
}

inline void from_json(const nlohmann::json& j, WorkloadSpec& w) {
  j.at("request_rate").get_to(w.request_rate);
  j.at("rate_spread").get_to(w.rate_spread);
  j.at("data_per_request").get_to(w.data_per_request);
  j.at("service_demand").get_to(w.service_demand);
}

inline void to_json(nlohmann::json& j, const Weights& w) {
  j = nlohmann::json{{"w_p", w.w_p},           {"w_id", w.w_id},
                     {"w_age", w.w_age},       {"w_loyalty", w.w_loyalty},
                     {"w_request", w.w_request}, {"w_u", w.w_u},
                     {"w_data", w.w_data},     {"w_reward", w.w_reward},
                     {"w_scale", w.w_scale}};
}

inline void from_json(const nlohmann::json& j, Weights& w) {
  j.at("w_p").get_to(w.w_p);
  j.at("w_id").get_to(w.w_id);
  j.at("w_age").get_to(w.w_age);
  j.at("w_loyalty").get_to(w.w_loyalty);
  j.at("w_request").get_to(w.w_request);
  j.at("w_u").get_to(w.w_u);
  j.at("w_data").get_to(w.w_data);
  j.at("w_reward").get_to(w.w_reward);
  j.at("w_scale").get_to(w.w_scale);
}

inline void to_json(nlohmann::json& j, const ServerDescriptor& d) {
  j = nlohmann::json{{"id", d.id},
                     {"users", d.users},
                     {"slo_latency_ms", d.slo_latency.count()},
                     {"donation", d.donation},
                     {"down_threshold", d.down_threshold},
                     {"premium", d.premium},
                     {"arrival_ordinal", d.arrival_ordinal},
                     {"age", d.age},
                     {"loyalty", d.loyalty},
                     {"workload", d.workload},
                     {"net_latency_edge_ms", d.net_latency_edge.count()},
                     {"net_latency_cloud_ms", d.net_latency_cloud.count()},
                     {"stateful", d.stateful}};
}

inline void from_json(const nlohmann::json& j, ServerDescriptor& d) {
  j.at("id").get_to(d.id);
  j.at("users").get_to(d.users);
  d.slo_latency = Millis{j.at("slo_latency_ms").get<double>()};
  j.at("donation").get_to(d.donation);
  j.at("down_threshold").get_to(d.down_threshold);
  j.at("premium").get_to(d.premium);
  j.at("arrival_ordinal").get_to(d.arrival_ordinal);
  j.at("age").get_to(d.age);
  j.at("loyalty").get_to(d.loyalty);
  j.at("workload").get_to(d.workload);
  d.net_latency_edge = Millis{j.at("net_latency_edge_ms").get<double>()};
  d.net_latency_cloud = Millis{j.at("net_latency_cloud_ms").get<double>()};
  j.at("stateful").get_to(d.stateful);
}

inline void to_json(nlohmann::json& j, const ServerRuntime& r) {
  j = nlohmann::json{{"descriptor", r.descriptor},
                     {"allocation", r.allocation},
                     {"score", r.score},
                     {"reward_count", r.reward_count},
                     {"scale_count", r.scale_count},
                     {"active", r.active}};
}

inline void from_json(const nlohmann::json& j, ServerRuntime& r) {
  j.at("descriptor").get_to(r.descriptor);
  j.at("allocation").get_to(r.allocation);
  j.at("score").get_to(r.score);
  j.at("reward_count").get_to(r.reward_count);
  j.at("scale_count").get_to(r.scale_count);
  j.at("active").get_to(r.active);
}

inline void to_json(nlohmann::json& j, const MetricsWindow& m) {
  j = nlohmann::json{{"requests", m.requests},
                     {"users_seen", m.users_seen},
                     {"data_kb", m.data_kb},
                     {"avg_latency_ms", m.avg_latency.count()},
                     {"violation_rate", m.violation_rate},
                     {"latency_samples_ms", m.latency_samples_ms}};
}

inline void from_json(const nlohmann::json& j, MetricsWindow& m) {
  j.at("requests").get_to(m.requests);
  j.at("users_seen").get_to(m.users_seen);
  j.at("data_kb").get_to(m.data_kb);
  m.avg_latency = Millis{j.at("avg_latency_ms").get<double>()};
  j.at("violation_rate").get_to(m.violation_rate);
  j.at("latency_samples_ms").get_to(m.latency_samples_ms);
}

inline void to_json(nlohmann::json& j, const ScalingDecision& d) {
  j = nlohmann::json{{"kind", to_string(d.kind)}, {"amount", d.amount}};
  if (d.kind == DecisionKind::Terminate) {
    j["reason"] = to_string(d.reason);
  }
}

inline void from_json(const nlohmann::json& j, ScalingDecision& d) {
  d.kind = decision_kind_from_string(j.at("kind").get<std::string>());
  j.at("amount").get_to(d.amount);
  d.reason = j.contains("reason")
                 ? terminate_reason_from_string(j.at("reason").get<std::string>())
                 : TerminateReason::Inactive;
}

}  // namespace edgescale
