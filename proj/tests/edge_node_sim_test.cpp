#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "edgescale/sim/latency.hpp"
#include "edgescale/sim/node.hpp"
#include "edgescale/sim/simulator.hpp"

using namespace edgescale;

namespace {

ServerDescriptor make_desc(std::string id, int ordinal, double request_rate,
                           double slo_ms = 78.0) {
  ServerDescriptor d;
  d.id = std::move(id);
  d.users = 4;
  d.slo_latency = Millis{slo_ms};
  d.arrival_ordinal = ordinal;
  d.workload.request_rate = request_rate;
  d.workload.rate_spread = 0.0;
  d.workload.data_per_request = 1.0;
  d.workload.service_demand = 1.0;
  d.net_latency_edge = Millis{10.0};
  d.net_latency_cloud = Millis{120.0};
  return d;
}

std::vector<ServerDescriptor> uniform_fleet(int n, double request_rate) {
  std::vector<ServerDescriptor> out;
  for (int i = 0; i < n; ++i)
    out.push_back(make_desc("srv-" + std::to_string(i), i + 1, request_rate));
  return out;
}

NodeConfig quiet_config() {
  NodeConfig cfg;
  cfg.capacity = {256, 128};
  cfg.unit = {64, 32};
  cfg.min_allocation = {64, 32};
  cfg.rounds = 4;
  cfg.policy = PriorityPolicy::SPM;
  cfg.latency.base_service_time = Millis{50.0};
  cfg.latency.contention_exponent = 1.0;
  cfg.latency.noise_cv = 0.0;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("equal-share deployment splits capacity and keeps the remainder") {
  EdgeNode node;
  node.capacity = {3200, 1600};
  node.unit = {64, 32};
  node.min_allocation = {64, 32};
  const auto& servers = deploy(node, uniform_fleet(32, 10.0), Weights{});
  REQUIRE(servers.size() == 32);
  for (const auto& rt : servers) {
    CHECK(rt.allocation == ResourceVector{100, 50});
    CHECK(rt.active);
  }
  CHECK(node.free == ResourceVector{0, 0});
  CHECK(node.conserves_capacity());
}

TEST_CASE("deployment remainder stays in the free pool") {
  EdgeNode node;
  node.capacity = {3300, 1700};
  node.unit = {64, 32};
  node.min_allocation = {64, 32};
  const auto& servers = deploy(node, uniform_fleet(32, 10.0), Weights{});
  for (const auto& rt : servers) CHECK(rt.allocation == ResourceVector{103, 53});
  CHECK(node.free == ResourceVector{4, 4});
  CHECK(node.conserves_capacity());
}

TEST_CASE("deployment rejects impossible fleets") {
  EdgeNode node;
  node.capacity = {256, 128};
  node.unit = {64, 32};
  node.min_allocation = {64, 32};
  CHECK_THROWS_AS((deploy(node, {}, Weights{})), std::invalid_argument);
  // 5 servers can only get (51, 25) each: below the minimum allocation
  CHECK_THROWS_AS(deploy(node, uniform_fleet(5, 1.0), Weights{}),
                  std::invalid_argument);
}

TEST_CASE("contention multiplier is flat below saturation") {
  CHECK(contention_multiplier(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(contention_multiplier(0.5, 1.0) == doctest::Approx(1.0));
  CHECK(contention_multiplier(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(contention_multiplier(2.0, 1.0) == doctest::Approx(2.0));
  CHECK(contention_multiplier(2.0, 2.0) == doctest::Approx(4.0));
  CHECK(contention_multiplier(1.5, 1.0) == doctest::Approx(1.5));
}

TEST_CASE("request latency composes hop, service time and contention") {
  LatencyModelParams p;
  p.base_service_time = Millis{50.0};
  p.contention_exponent = 1.0;

  SUBCASE("saturated server still pays only the base time") {
    auto lat = edge_request_latency(p, Millis{10.0}, 1.0, 0.0);
    CHECK(lat.count() == doctest::Approx(60.0));
  }
  SUBCASE("twice the demand doubles the service time") {
    auto lat = edge_request_latency(p, Millis{10.0}, 2.0, 0.0);
    CHECK(lat.count() == doctest::Approx(110.0));
  }
  SUBCASE("steeper exponent amplifies overload") {
    p.contention_exponent = 2.0;
    auto lat = edge_request_latency(p, Millis{10.0}, 2.0, 0.0);
    CHECK(lat.count() == doctest::Approx(210.0));
  }
  SUBCASE("jitter scales the service portion, not the hop") {
    auto lat = edge_request_latency(p, Millis{10.0}, 1.0, 0.1);
    CHECK(lat.count() == doctest::Approx(10.0 + 50.0 * 1.1));
  }
  SUBCASE("deep negative jitter clamps instead of going negative") {
    auto lat = edge_request_latency(p, Millis{10.0}, 1.0, -2.0);
    CHECK(lat.count() == doctest::Approx(10.0 + 50.0 * 0.05));
  }
  SUBCASE("cloud path is uncontended") {
    auto lat = cloud_request_latency(p, Millis{120.0}, 0.0);
    CHECK(lat.count() == doctest::Approx(170.0));
  }
}

TEST_CASE("latency never improves when allocation shrinks") {
  LatencyModelParams p;
  p.base_service_time = Millis{50.0};
  p.contention_exponent = 1.3;
  double prev = 0;
  for (double util : {0.2, 0.6, 1.0, 1.4, 2.5, 8.0}) {
    double lat = edge_request_latency(p, Millis{10.0}, util, 0.0).count();
    CHECK(lat >= prev);
    prev = lat;
  }
}

TEST_CASE("node config validation") {
  NodeConfig cfg = quiet_config();
  CHECK(!validate(cfg).has_value());

  SUBCASE("rounds must be positive") {
    cfg.rounds = 0;
    CHECK(validate(cfg).has_value());
  }
  SUBCASE("weights must be non-negative") {
    cfg.weights.w_data = -0.5;
    CHECK(validate(cfg).has_value());
  }
  SUBCASE("migration bandwidth must be positive") {
    cfg.migration_bandwidth_kb_s = 0;
    CHECK(validate(cfg).has_value());
  }
  SUBCASE("latency model is checked too") {
    cfg.latency.contention_exponent = 0.5;
    CHECK(validate(cfg).has_value());
    cfg.latency.contention_exponent = 1.0;
    cfg.latency.noise_cv = -0.1;
    CHECK(validate(cfg).has_value());
  }
  SUBCASE("unit must fit into capacity") {
    cfg.unit = {512, 256};
    CHECK(validate(cfg).has_value());
  }
}

// Two servers on a 256-CPU node, deterministic traffic (no spread, no
// noise). Server "a" idles at 100 requests against a 128-CPU share, server
// "b" overloads at 200. Every latency below is exact in binary floating
// point, so the assertions pin the full simulate/scale loop.
TEST_CASE("deterministic round: idle server shrinks, overloaded one grows") {
  NodeConfig cfg = quiet_config();
  std::vector<ServerDescriptor> fleet = {make_desc("a", 1, 100.0),
                                         make_desc("b", 2, 200.0)};
  Simulator sim(cfg, fleet);

  RoundRecord r1 = sim.simulate_round();
  CHECK(r1.round_index == 1);
  REQUIRE(r1.servers.size() == 2);

  const auto& a = r1.servers[0];
  CHECK(a.id == "a");
  CHECK(a.requests == 100);
  // 100 demand on 128 CPU is under capacity: 10ms hop + 50ms service
  CHECK(a.avg_latency_ms == doctest::Approx(60.0));
  CHECK(a.violation_rate == doctest::Approx(0.0));
  // 60 <= 0.8 * 78, so the idle share shrinks by one unit
  CHECK(a.decision.kind == DecisionKind::ScaleDown);
  CHECK(a.allocation == ResourceVector{64, 32});
  CHECK(a.scale_count == 1);

  const auto& b = r1.servers[1];
  CHECK(b.requests == 200);
  // 200 demand on 128 CPU: multiplier 1.5625, 10 + 78.125
  CHECK(b.avg_latency_ms == doctest::Approx(88.125));
  CHECK(b.violation_rate == doctest::Approx(1.0));
  CHECK(b.decision.kind == DecisionKind::ScaleUp);
  // requested its full share again; the pool only held the freed unit
  CHECK(b.decision.amount == ResourceVector{128, 64});
  CHECK(b.allocation == ResourceVector{192, 96});

  CHECK(r1.vr_e == doctest::Approx(200.0 / 300.0));
  CHECK(r1.vr_e_after == doctest::Approx(200.0 / 300.0));
  CHECK(r1.request_vr == doctest::Approx(200.0 / 300.0));
  CHECK(r1.request_vr_all == doctest::Approx(200.0 / 300.0));
  CHECK(sim.node().conserves_capacity());
  CHECK(r1.samples.size() == 300);
  for (const auto& s : r1.samples) CHECK(!s.cloud);

  // Round 2: "a" sits at the floor and now overloads (100 on 64 CPU), its
  // scale-up finds an empty pool and evicts the lower-ranked "b".
  RoundRecord r2 = sim.simulate_round();
  const auto& a2 = r2.servers[0];
  const auto& b2 = r2.servers[1];
  CHECK(a2.avg_latency_ms == doctest::Approx(88.125));
  CHECK(a2.decision.kind == DecisionKind::ScaleUp);
  CHECK(a2.allocation == ResourceVector{128, 64});
  CHECK(!b2.active);
  CHECK(b2.decision.kind == DecisionKind::Terminate);
  CHECK(b2.allocation == ResourceVector{0, 0});
  REQUIRE(r2.evictions.size() == 1);
  CHECK(r2.evictions[0].victim == "b");
  CHECK(r2.evictions[0].cause == "a");
  // b ran at 192 CPU this round (200/192 demand): no violations
  CHECK(r2.vr_e == doctest::Approx(100.0 / 300.0));
  CHECK(r2.vr_e_after == doctest::Approx(1.0));  // only "a" is left
  CHECK(sim.node().conserves_capacity());

  // Round 3: b's users are served by the cloud at 170ms, violating their
  // 78ms target; the node-scoped rates no longer see that traffic.
  RoundRecord r3 = sim.simulate_round();
  const auto& a3 = r3.servers[0];
  const auto& b3 = r3.servers[1];
  CHECK(a3.requests == 100);
  CHECK(a3.violation_rate == doctest::Approx(0.0));
  CHECK(b3.requests == 200);
  CHECK(b3.avg_latency_ms == doctest::Approx(170.0));
  CHECK(b3.violation_rate == doctest::Approx(1.0));
  CHECK(!b3.active);
  CHECK(b3.decision.kind == DecisionKind::NoChange);
  CHECK(r3.vr_e == doctest::Approx(0.0));
  CHECK(r3.request_vr == doctest::Approx(0.0));
  CHECK(r3.request_vr_all == doctest::Approx(200.0 / 300.0));
  std::size_t cloud_samples = 0;
  for (const auto& s : r3.samples) cloud_samples += s.cloud ? 1 : 0;
  CHECK(cloud_samples == 200);
}

TEST_CASE("same seed reproduces the timeline bit for bit") {
  NodeConfig cfg = quiet_config();
  cfg.capacity = {640, 320};
  cfg.rounds = 6;
  cfg.policy = PriorityPolicy::SDPS;
  cfg.latency.noise_cv = 0.08;
  auto fleet = uniform_fleet(5, 40.0);
  for (auto& d : fleet) d.workload.rate_spread = 0.3;

  Timeline t1 = run_scenario(cfg, fleet);
  Timeline t2 = run_scenario(cfg, fleet);
  CHECK(t1 == t2);
  REQUIRE(t1.rounds.size() == 6);
  CHECK(t1.n_servers == 5);

  cfg.seed = 8;
  Timeline t3 = run_scenario(cfg, fleet);
  CHECK(t1 != t3);
}

TEST_CASE("traffic draws do not depend on the policy under test") {
  NodeConfig cfg = quiet_config();
  cfg.capacity = {640, 320};
  cfg.rounds = 8;
  cfg.latency.noise_cv = 0.1;
  auto fleet = uniform_fleet(5, 60.0);
  for (auto& d : fleet) d.workload.rate_spread = 0.4;

  cfg.policy = PriorityPolicy::NoScaling;
  Timeline base = run_scenario(cfg, fleet);
  cfg.policy = PriorityPolicy::SDPS;
  Timeline scaled = run_scenario(cfg, fleet);

  for (std::size_t r = 0; r < base.rounds.size(); ++r)
    for (std::size_t s = 0; s < base.rounds[r].servers.size(); ++s)
      CHECK(base.rounds[r].servers[s].requests ==
            scaled.rounds[r].servers[s].requests);
}

TEST_CASE("the no-scaling baseline never touches allocations") {
  NodeConfig cfg = quiet_config();
  cfg.capacity = {640, 320};
  cfg.rounds = 5;
  cfg.policy = PriorityPolicy::NoScaling;
  cfg.latency.noise_cv = 0.05;
  auto fleet = uniform_fleet(5, 80.0);
  for (auto& d : fleet) d.workload.rate_spread = 0.5;

  Timeline t = run_scenario(cfg, fleet);
  for (const auto& round : t.rounds) {
    CHECK(round.op_count == 0);
    for (const auto& srv : round.servers) {
      CHECK(srv.allocation == ResourceVector{128, 64});
      CHECK(srv.decision.kind == DecisionKind::NoChange);
      CHECK(srv.active);
    }
  }
}

TEST_CASE("capacity is conserved through long noisy runs") {
  for (auto policy : {PriorityPolicy::SPM, PriorityPolicy::WDPS,
                      PriorityPolicy::CDPS, PriorityPolicy::SDPS}) {
    NodeConfig cfg = quiet_config();
    cfg.capacity = {1024, 512};
    cfg.rounds = 1;  // stepped manually below
    cfg.policy = policy;
    cfg.latency.noise_cv = 0.1;
    auto fleet = uniform_fleet(8, 70.0);
    for (auto& d : fleet) d.workload.rate_spread = 0.6;

    Simulator sim(cfg, fleet);
    for (int r = 0; r < 20; ++r) {
      RoundRecord rec = sim.simulate_round();
      REQUIRE(sim.node().conserves_capacity());
      CHECK(rec.round_index == r + 1);
    }
  }
}

TEST_CASE("mean node violation rate summarises a timeline") {
  Timeline t;
  t.rounds.resize(3);
  t.rounds[0].vr_e = 0.5;
  t.rounds[1].vr_e = 0.25;
  t.rounds[2].vr_e = 0.0;
  CHECK(timeline_mean_vr_e(t) == doctest::Approx(0.25));
  CHECK(timeline_mean_vr_e(Timeline{}) == doctest::Approx(0.0));
}
