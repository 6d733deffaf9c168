#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "edgescale/core/rng.hpp"
#include "edgescale/monitor/monitor.hpp"

using namespace edgescale;

TEST_CASE("window close computes average and per-request violations") {
  Monitor mon;
  mon.register_server("a");
  mon.record_request("a", Millis{70.0}, 1.5);
  mon.record_request("a", Millis{90.0}, 1.5);
  mon.record_request("a", Millis{100.0}, 1.5);
  mon.record_users("a", 12);

  const auto w = mon.close_window("a", Millis{78.0});
  CHECK(w.requests == 3);
  CHECK(w.users_seen == 12);
  CHECK(w.data_kb == doctest::Approx(4.5));
  CHECK(w.avg_latency.count() == doctest::Approx(260.0 / 3.0));
  CHECK(w.violation_rate == doctest::Approx(2.0 / 3.0));
  CHECK(w.latency_samples_ms == std::vector<double>{70.0, 90.0, 100.0});
}

TEST_CASE("closing resets the window") {
  Monitor mon;
  mon.register_server("a");
  mon.record_request("a", Millis{90.0}, 1.0);
  (void)mon.close_window("a", Millis{78.0});

  const auto empty = mon.close_window("a", Millis{78.0});
  CHECK(empty.requests == 0);
  CHECK(empty.avg_latency.count() == 0.0);
  CHECK(empty.violation_rate == 0.0);
  CHECK(empty.latency_samples_ms.empty());
}

TEST_CASE("violation comparison against the ceiling is strict") {
  Monitor mon;
  mon.register_server("a");
  for (int i = 0; i < 5; ++i) mon.record_request("a", Millis{78.0}, 1.0);
  const auto w = mon.close_window("a", Millis{78.0});
  CHECK(w.violation_rate == 0.0);
}

TEST_CASE("recording requires a known, active server") {
  Monitor mon;
  mon.register_server("a");
  CHECK_THROWS_AS(mon.record_request("ghost", Millis{10.0}, 1.0),
                  std::out_of_range);
  CHECK_THROWS_AS((mon.close_window("ghost", Millis{78.0})), std::out_of_range);

  mon.set_active("a", false);
  CHECK_THROWS_AS(mon.record_request("a", Millis{10.0}, 1.0),
                  std::logic_error);
  // closing an inactive server's window is legal and yields nothing
  const auto w = mon.close_window("a", Millis{78.0});
  CHECK(w.requests == 0);
}

namespace {

MetricsWindow window_with(std::int64_t requests, double avg_ms) {
  MetricsWindow m;
  m.requests = requests;
  m.avg_latency = Millis{avg_ms};
  return m;
}

}  // namespace

TEST_CASE("node violation rate weighs windows by requests") {
  const std::vector<std::pair<MetricsWindow, Millis>> windows = {
      {window_with(100, 90.0), Millis{78.0}},
      {window_with(300, 70.0), Millis{78.0}},
  };
  CHECK(node_violation_rate(windows) == doctest::Approx(0.25));
}

TEST_CASE("node violation rate is undefined without requests") {
  const std::vector<std::pair<MetricsWindow, Millis>> empty = {
      {window_with(0, 0.0), Millis{78.0}},
  };
  CHECK_THROWS_AS(node_violation_rate(empty), std::domain_error);
  CHECK_THROWS_AS((node_violation_rate({})), std::domain_error);
  CHECK_THROWS_AS(request_violation_rate(empty), std::domain_error);
}

TEST_CASE("node violation rate agrees with a brute-force recount") {
  SubstreamRng rng(515, 3, 0, 0);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 12));
    std::vector<std::pair<MetricsWindow, Millis>> windows;
    double slow_num = 0, slow_den = 0;
    for (int i = 0; i < n; ++i) {
      const auto requests = rng.uniform_int(0, 50);
      const double avg = rng.uniform(20.0, 150.0);
      const double slo = rng.uniform(50.0, 120.0);
      windows.push_back({window_with(requests, avg), Millis{slo}});
      // independent recount, one request at a time
      for (std::int64_t r = 0; r < requests; ++r) {
        slow_den += 1.0;
        if (avg > slo) slow_num += 1.0;
      }
    }
    if (slow_den == 0) {
      CHECK_THROWS_AS(node_violation_rate(windows), std::domain_error);
      continue;
    }
    const double got = node_violation_rate(windows);
    CHECK(got == doctest::Approx(slow_num / slow_den).epsilon(1e-12));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);

    // permutation invariance
    std::reverse(windows.begin(), windows.end());
    CHECK(node_violation_rate(windows) == doctest::Approx(got).epsilon(1e-12));
  }
}

TEST_CASE("per-request rate counts individual samples") {
  MetricsWindow a;
  a.requests = 4;
  a.latency_samples_ms = {60.0, 80.0, 85.0, 70.0};  // 2 of 4 violate at 78
  a.avg_latency = Millis{73.75};                    // mean below the ceiling
  MetricsWindow b;
  b.requests = 2;
  b.latency_samples_ms = {100.0, 110.0};  // both violate
  b.avg_latency = Millis{105.0};

  const std::vector<std::pair<MetricsWindow, Millis>> windows = {
      {a, Millis{78.0}}, {b, Millis{78.0}}};
  CHECK(request_violation_rate(windows) == doctest::Approx(4.0 / 6.0));
  // the server-average reading sees only one violating window
  CHECK(node_violation_rate(windows) == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("degenerate case: identical servers make both readings agree") {
  SubstreamRng rng(99, 4, 0, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const double lat = rng.uniform(20.0, 150.0);
    const double slo = 78.0;
    std::vector<std::pair<MetricsWindow, Millis>> windows;
    for (int i = 0; i < 5; ++i) {
      MetricsWindow m;
      m.requests = 7;
      m.avg_latency = Millis{lat};
      m.latency_samples_ms.assign(7, lat);
      windows.push_back({m, Millis{slo}});
    }
    CHECK(node_violation_rate(windows) ==
          doctest::Approx(request_violation_rate(windows)));
    const double expect = lat > slo ? 1.0 : 0.0;
    CHECK(node_violation_rate(windows) == doctest::Approx(expect));
  }
}

TEST_CASE("monitor keeps the user count as the window maximum") {
  Monitor mon;
  mon.register_server("a");
  mon.record_users("a", 4);
  mon.record_users("a", 9);
  mon.record_users("a", 2);
  const auto w = mon.close_window("a", Millis{78.0});
  CHECK(w.users_seen == 9);
}
