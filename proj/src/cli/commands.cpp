#include "edgescale/cli/commands.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <stdexcept>
#include <vector>

#include "CLI11.hpp"
#include "edgescale/report/report.hpp"

namespace edgescale {

namespace fs = std::filesystem;

namespace {

constexpr std::array<PriorityPolicy, 5> kAllPolicies = {
    PriorityPolicy::NoScaling, PriorityPolicy::SPM, PriorityPolicy::WDPS,
    PriorityPolicy::CDPS, PriorityPolicy::SDPS};

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Scenario load(const CliOptions& o) {
  Scenario s = parse_scenario(o.scenario_path, o.strict);
  if (!o.policy.empty()) s.node.policy = policy_from_string(o.policy);
  if (!o.pricing.empty()) s.node.pricing = pricing_from_string(o.pricing);
  if (o.rounds > 0) s.node.rounds = o.rounds;
  if (!o.seeds.empty()) s.seeds = o.seeds;
  return s;
}

fs::path prepare_output(const CliOptions& o) {
  fs::path dir(o.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " +
                             dir.string() + ": " + ec.message());
  return dir;
}

bool wants_trace(const CliOptions& o) {
  return o.format == "trace" || o.format == "both";
}

bool wants_summary(const CliOptions& o) {
  return o.format == "summary" || o.format == "both";
}

fs::path trace_path(const fs::path& dir, const Scenario& s,
                    PriorityPolicy policy, std::uint64_t seed) {
  return dir / (s.name + "-" + to_string(policy) + "-seed" +
                std::to_string(seed) + ".jsonl");
}

void accumulate_bands(LatencyBands& into, const Timeline& t) {
  for (const auto& r : t.rounds) {
    if (r.samples.empty()) continue;
    LatencyBands h = latency_histogram(r.samples, true);
    for (std::size_t i = 0; i < into.counts.size(); ++i)
      into.counts[i] += h.counts[i];
    into.overflow += h.overflow;
  }
}

double mean_vr_e(const std::vector<Timeline>& timelines) {
  double sum = 0;
  for (const auto& t : timelines) sum += timeline_mean_vr_e(t);
  return timelines.empty() ? 0.0 : sum / static_cast<double>(timelines.size());
}

}  // namespace

int cmd_run(const CliOptions& options, std::ostream& out, std::ostream& err) {
  try {
    Scenario s = load(options);
    fs::path dir = prepare_output(options);

    std::vector<Timeline> timelines;
    LatencyBands pooled;
    for (auto seed : s.seeds) {
      NodeConfig cfg = s.node;
      cfg.seed = seed;
      Timeline t = run_scenario(cfg, expand_servers(s, seed));
      if (wants_trace(options))
        export_trace(t, trace_path(dir, s, cfg.policy, seed));
      accumulate_bands(pooled, t);
      timelines.push_back(std::move(t));
    }
    if (wants_summary(options)) {
      write_curve_csv(violation_curve(group_timelines(timelines)),
                      dir / (s.name + "-summary.csv"));
      if (pooled.total() > 0)
        write_bands_csv({{to_string(s.node.policy), pooled}},
                        dir / (s.name + "-bands.csv"));
    }
    out << "mean vr_e (" << to_string(s.node.policy) << ", "
        << s.seeds.size() << (s.seeds.size() == 1 ? " seed" : " seeds")
        << "): " << fmt_real(mean_vr_e(timelines)) << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_compare(const CliOptions& options, std::ostream& out,
                std::ostream& err) {
  if (!options.policy.empty()) {
    err << "error: compare always runs every policy; --policy does not apply\n";
    return 2;
  }
  try {
    Scenario s = load(options);
    fs::path dir = prepare_output(options);

    std::map<PriorityPolicy, std::vector<Timeline>> by_policy;
    std::map<PriorityPolicy, LatencyBands> bands;
    for (auto seed : s.seeds) {
      // one fleet per seed, shared by all five policies: the comparison is
      // paired, nothing about the workload depends on the policy under test
      auto fleet = expand_servers(s, seed);
      for (auto policy : kAllPolicies) {
        NodeConfig cfg = s.node;
        cfg.policy = policy;
        cfg.seed = seed;
        Timeline t = run_scenario(cfg, fleet);
        if (wants_trace(options))
          export_trace(t, trace_path(dir, s, policy, seed));
        accumulate_bands(bands[policy], t);
        by_policy[policy].push_back(std::move(t));
      }
    }

    auto rows = violation_curve(group_timelines([&] {
      std::vector<Timeline> flat;
      for (auto& [policy, ts] : by_policy)
        flat.insert(flat.end(), ts.begin(), ts.end());
      return flat;
    }()));

    std::vector<std::pair<std::string, LatencyBands>> labelled;
    out << "policy,mean_vr_e,stddev_vr_e,lowest_band_share\n";
    for (const auto& row : rows) {
      double share = bands[row.policy].lowest_band_share();
      out << to_string(row.policy) << ',' << fmt_real(row.mean_vr_e) << ','
          << fmt_real(row.stddev_vr_e) << ',' << fmt_real(share) << "\n";
      labelled.emplace_back(to_string(row.policy), bands[row.policy]);
    }
    if (wants_summary(options)) {
      write_curve_csv(rows, dir / (s.name + "-compare.csv"));
      write_bands_csv(labelled, dir / (s.name + "-bands.csv"));
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sweep(const CliOptions& options, std::ostream& out,
              std::ostream& err) {
  try {
    Scenario s = load(options);
    fs::path dir = prepare_output(options);

    if (s.experiment == Experiment::SweepServers) {
      std::vector<Timeline> timelines;
      for (int n : s.server_counts) {
        for (auto seed : s.seeds) {
          auto fleet = expand_servers(s, seed, n);
          for (auto policy : kAllPolicies) {
            NodeConfig cfg = s.node;
            cfg.policy = policy;
            cfg.seed = seed;
            timelines.push_back(run_scenario(cfg, fleet));
          }
        }
      }
      auto rows = violation_curve(group_timelines(timelines));
      out << "policy,n_servers,mean_vr_e,stddev_vr_e,seeds\n";
      for (const auto& r : rows)
        out << to_string(r.policy) << ',' << r.n_servers << ','
            << fmt_real(r.mean_vr_e) << ',' << fmt_real(r.stddev_vr_e) << ','
            << r.seeds << "\n";
      if (wants_summary(options))
        write_curve_csv(rows, dir / (s.name + "-curve.csv"));
      return 0;
    }

    if (s.experiment == Experiment::SweepWeights) {
      if (s.node.policy == PriorityPolicy::NoScaling) {
        err << "error: a weight sweep needs a scoring policy, not the "
               "no-scaling baseline\n";
        return 2;
      }
      auto fleet = expand_servers(s, s.seeds.front());
      const ServerDescriptor& d = fleet.front();
      // a representative window: the nominal per-round workload
      MetricsWindow m;
      m.requests = std::llround(d.workload.request_rate);
      m.users_seen = d.users;
      m.data_kb = static_cast<double>(m.requests) * d.workload.data_per_request;
      auto cells = weight_sweep(d, m, s.node.policy, s.node.pricing,
                                s.node.weights, s.weight_axes);
      fs::path dest = dir / (s.name + "-weights.csv");
      write_sweep_csv(s.weight_axes, cells, dest);
      out << "wrote " << dest.string() << " (" << cells.size()
          << " grid points, server " << d.id << ")\n";
      return 0;
    }

    err << "error: scenario experiment is " << to_string(s.experiment)
        << "; sweep needs sweep_servers or sweep_weights\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_main(int argc, const char* const* argv) {
  CLI::App app{"multi-tenant edge node vertical scaling simulator"};
  app.require_subcommand(1);

  CliOptions o;
  auto add_common = [&o](CLI::App* c) {
    c->add_option("--scenario", o.scenario_path, "scenario file")
        ->required();
    c->add_option("--policy", o.policy,
                  "policy override (no_scaling|spm|wdps|cdps|sdps)");
    c->add_option("--pricing", o.pricing,
                  "pricing override (pfr|pfp|hybrid)");
    c->add_option("--rounds", o.rounds, "rounds override")
        ->check(CLI::PositiveNumber);
    c->add_option("--seed,--seeds", o.seeds, "seed override (repeatable)");
    c->add_option("--output", o.output_dir, "output directory");
    c->add_option("--format", o.format, "what to write (default both)")
        ->check(CLI::IsMember({"trace", "summary", "both"}));
    c->add_flag("--strict,!--no-strict", o.strict,
                "reject unknown scenario keys (default on)");
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario");
  CLI::App* compare = app.add_subcommand(
      "compare", "run all five policies on the paired workload");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "server-count or weight sweep, per the scenario");
  add_common(run);
  add_common(compare);
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (run->parsed()) return cmd_run(o, std::cout, std::cerr);
  if (compare->parsed()) return cmd_compare(o, std::cout, std::cerr);
  return cmd_sweep(o, std::cout, std::cerr);
}

}  // namespace edgescale
