#include "edgescale/core/model.hpp"

#include <stdexcept>

namespace edgescale {

std::string to_string(PricingModel m) {
  switch (m) {
    case PricingModel::PFR: return "pfr";
    case PricingModel::PFP: return "pfp";
    case PricingModel::Hybrid: return "hybrid";
  }
  throw std::logic_error("unreachable pricing model");
}

std::string to_string(PriorityPolicy p) {
  switch (p) {
    case PriorityPolicy::NoScaling: return "no_scaling";
    case PriorityPolicy::SPM: return "spm";
    case PriorityPolicy::WDPS: return "wdps";
    case PriorityPolicy::CDPS: return "cdps";
    case PriorityPolicy::SDPS: return "sdps";
  }
  throw std::logic_error("unreachable priority policy");
}

std::string to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::ScaleUp: return "scale_up";
    case DecisionKind::ScaleDown: return "scale_down";
    case DecisionKind::Donate: return "donate";
    case DecisionKind::NoChange: return "no_change";
    case DecisionKind::Terminate: return "terminate";
  }
  throw std::logic_error("unreachable decision kind");
}

std::string to_string(TerminateReason r) {
  switch (r) {
    case TerminateReason::Evicted: return "evicted";
    case TerminateReason::Inactive: return "inactive";
    case TerminateReason::NoBenefit: return "no_benefit";
  }
  throw std::logic_error("unreachable terminate reason");
}

PricingModel pricing_from_string(const std::string& s) {
  if (s == "pfr") return PricingModel::PFR;
  if (s == "pfp") return PricingModel::PFP;
  if (s == "hybrid") return PricingModel::Hybrid;
  throw std::invalid_argument("unknown pricing model: " + s);
}

PriorityPolicy policy_from_string(const std::string& s) {
  if (s == "no_scaling") return PriorityPolicy::NoScaling;
  if (s == "spm") return PriorityPolicy::SPM;
  if (s == "wdps") return PriorityPolicy::WDPS;
  if (s == "cdps") return PriorityPolicy::CDPS;
  if (s == "sdps") return PriorityPolicy::SDPS;
  throw std::invalid_argument("unknown priority policy: " + s);
}

DecisionKind decision_kind_from_string(const std::string& s) {
  if (s == "scale_up") return DecisionKind::ScaleUp;
  if (s == "scale_down") return DecisionKind::ScaleDown;
  if (s == "donate") return DecisionKind::Donate;
  if (s == "no_change") return DecisionKind::NoChange;
  if (s == "terminate") return DecisionKind::Terminate;
  throw std::invalid_argument("unknown decision kind: " + s);
}

TerminateReason terminate_reason_from_string(const std::string& s) {
  if (s == "evicted") return TerminateReason::Evicted;
  if (s == "inactive") return TerminateReason::Inactive;
  if (s == "no_benefit") return TerminateReason::NoBenefit;
  throw std::invalid_argument("unknown terminate reason: " + s);
}

std::optional<std::string> validate(const WorkloadSpec& w) {
  if (!(w.request_rate > 0)) return "workload.request_rate must be > 0";
  if (w.rate_spread < 0 || w.rate_spread >= 1) {
    return "workload.rate_spread must be in [0, 1)";
  }
  if (!(w.data_per_request > 0)) return "workload.data_per_request must be > 0";
  if (!(w.service_demand > 0)) return "workload.service_demand must be > 0";
  return std::nullopt;
}

std::optional<std::string> validate_descriptor(const ServerDescriptor& d) {
  if (d.id.empty()) return "id must be non-empty";
  if (d.users <= 0) return "users must be > 0";
  if (!(d.slo_latency.count() > 0)) return "slo_latency must be > 0";
  if (!(d.down_threshold > 0) || d.down_threshold >= 1) {
    return "down_threshold must be in (0, 1)";
  }
  if (d.premium < 0) return "premium must be >= 0";
  if (d.arrival_ordinal < 1) return "arrival_ordinal must be >= 1";
  if (d.age < 0) return "age must be >= 0";
  if (d.loyalty < 0) return "loyalty must be >= 0";
  if (auto err = validate(d.workload)) return *err;
  if (d.net_latency_edge.count() < 0) return "net_latency_edge must be >= 0";
  if (d.net_latency_cloud.count() < 0) return "net_latency_cloud must be >= 0";
  return std::nullopt;
}

}  // namespace edgescale
