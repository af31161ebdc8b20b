#include <doctest.h>

#include <cmath>
#include <numeric>

#include "urllc/errors.hpp"
#include "urllc/simulator.hpp"

using namespace urllc;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.N = 30;
  cfg.n_cycles = 8;
  cfg.n_topologies = 2;
  cfg.table_max_age = 20;
  return cfg;
}

}  // namespace

TEST_CASE("topology: uniform disk and issue times") {
  SimConfig cfg;
  cfg.N = 100000;
  Rng rng(1);
  const auto devices = generate_topology(cfg, rng);
  double sq = 0.0;
  int min_issue = cfg.T, max_issue = 1;
  for (const auto& d : devices) {
    CHECK_MESSAGE(d.distance > 0.0, d.id);
    CHECK_MESSAGE(d.distance <= cfg.L, d.id);
    sq += d.distance * d.distance;
    min_issue = std::min(min_issue, d.issue_time);
    max_issue = std::max(max_issue, d.issue_time);
  }
  CHECK(sq / cfg.N == doctest::Approx(cfg.L * cfg.L / 2).epsilon(0.01));
  CHECK(min_issue == 1);
  CHECK(max_issue == cfg.T);

  cfg.N = 1;
  CHECK(generate_topology(cfg, rng).size() == 1);
  cfg.N = 50;
  Rng a(7), b(7);
  const auto ta = generate_topology(cfg, a), tb = generate_topology(cfg, b);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta[i].distance == tb[i].distance);
    CHECK(ta[i].issue_time == tb[i].issue_time);
  }
}

TEST_CASE("interference coefficients") {
  SimConfig cfg;
  cfg.C = 1;
  Rng rng(2);
  double sum = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double l = draw_interference(cfg, rng).lambda[0];
    CHECK(l >= 1.0);
    sum += l;
  }
  CHECK(std::abs(sum / n - 3.0) < 0.05);
  cfg.Y_M = 0.0;
  cfg.C = 4;
  for (double l : draw_interference(cfg, rng).lambda) CHECK(l == 1.0);
}

TEST_CASE("pilot mask has floor(eta T) pilots per channel") {
  SimConfig cfg;
  cfg.eta = 0.3;
  Rng rng(3);
  const auto mask = draw_pru_mask(cfg, rng);
  for (int c = 0; c < cfg.C; ++c) CHECK(mask.pilot_slots(c).size() == 15);
  cfg.eta = 0.0;
  CHECK(draw_pru_mask(cfg, rng).pilot_slots(0).empty());
}

TEST_CASE("config validation names the field") {
  SimConfig cfg;
  cfg.W = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("W"), ParameterError);
  cfg = SimConfig{};
  cfg.eta = 1.2;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("eta"), ParameterError);
  cfg = SimConfig{};
  cfg.delta = cfg.T + 1;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("delta"), ParameterError);
  cfg = SimConfig{};
  cfg.W = 16;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("n_cycles"), ParameterError);
  CHECK_THROWS_AS(run_simulation(cfg), ParameterError);
}

TEST_CASE("pipeline ages follow the pilot rotation (N=6, M=2, W=2)") {
  SimConfig cfg;
  cfg.N = 6;
  cfg.T = 8;
  cfg.delta = 8;
  cfg.eta = 0.25;
  cfg.W = 2;
  const DirectQuantiles q(cfg.gamma, cfg.rho);
  TopologySimulation sim(cfg, q, 1);
  CycleOutcome out;
  for (int m = 0; m <= 3; ++m) out = sim.run_cycle();
  // Cycle 3 pilots are D1, D2 (ids 0, 1); the allocation targets cycle 5.
  CHECK(out.pilot_ids == std::vector<int>{0, 1});
  CHECK(out.allocation_for_cycle == 5);
  CHECK(out.csi_age_used == std::vector<int>{2, 2, 4, 4, 3, 3});
}

TEST_CASE("causality and conservation hold every cycle") {
  for (auto policy : {PilotPolicy::RoundRobin, PilotPolicy::DistanceThreshold, PilotPolicy::Dynamic}) {
    for (int W : {1, 3}) {
      SimConfig cfg = small_config();
      cfg.pilot_policy = policy;
      cfg.W = W;
      const FTable table = build_f_table(cfg.gamma, cfg.rho, cfg.table_options());
      TopologySimulation sim(cfg, table, 42);
      for (int m = 0; m < cfg.n_cycles; ++m) {
        const auto out = sim.run_cycle();
        CHECK(out.served + out.excluded == cfg.N);
        CHECK(out.allocation_for_cycle == m + W);
        for (std::size_t i = 0; i < out.csi_measured_at.size(); ++i) {
          if (out.csi_measured_at[i] < 0) {
            CHECK(out.csi_age_used[i] == -1);
            continue;
          }
          CHECK(out.csi_measured_at[i] <= out.allocation_for_cycle - W);
          CHECK(out.csi_age_used[i] == out.allocation_for_cycle - out.csi_measured_at[i]);
        }
      }
    }
  }
}

TEST_CASE("W = 1 uses age-1 CSI for devices that just sent pilots") {
  SimConfig cfg = small_config();
  cfg.W = 1;
  const DirectQuantiles q(cfg.gamma, cfg.rho);
  TopologySimulation sim(cfg, q, 9);
  for (int m = 0; m < 4; ++m) {
    const auto out = sim.run_cycle();
    for (int id : out.pilot_ids) CHECK(out.csi_age_used[static_cast<std::size_t>(id)] == 1);
  }
}

TEST_CASE("runs are deterministic") {
  SimConfig cfg = small_config();
  cfg.pilot_policy = PilotPolicy::Dynamic;
  const auto a = run_simulation(cfg);
  cfg.threads = 3;
  const auto b = run_simulation(cfg);
  CHECK(a.fraction_served == b.fraction_served);
  CHECK(a.mean_fraction_served == b.mean_fraction_served);
  CHECK(a.reliability_violations == b.reliability_violations);
  CHECK(a.rus_per_served_device == b.rus_per_served_device);
  cfg.rng_seed = 2;
  CHECK(run_simulation(cfg).fraction_served != a.fraction_served);
}

TEST_CASE("metrics cover only the second half of the run") {
  SimConfig cfg = small_config();
  const auto run = simulate(cfg);
  REQUIRE(run.metrics.fraction_served.size() == 2);
  for (const auto& row : run.metrics.fraction_served) {
    CHECK(row.size() == 4);
    for (double f : row) CHECK((f >= 0.0 && f <= 1.0));
  }
  const double mean0 = std::accumulate(run.metrics.fraction_served[0].begin(), run.metrics.fraction_served[0].end(), 0.0) / 4;
  CHECK(run.metrics.topology_mean[0] == doctest::Approx(mean0));
  const double m = (run.metrics.topology_mean[0] + run.metrics.topology_mean[1]) / 2;
  CHECK(run.metrics.mean_fraction_served == doctest::Approx(m));
  const double s = std::abs(run.metrics.topology_mean[0] - run.metrics.topology_mean[1]) / std::sqrt(2.0);
  CHECK(run.metrics.std_fraction_served == doctest::Approx(s));
}

TEST_CASE("all slots reserved for pilots leaves nothing to serve") {
  SimConfig cfg = small_config();
  cfg.eta = 1.0;
  CHECK(run_simulation(cfg).mean_fraction_served == 0.0);
}

TEST_CASE("no pilots still serves part of the network") {
  SimConfig cfg = small_config();
  cfg.N = 100;
  cfg.eta = 0.0;
  cfg.validate_schedules = true;
  const auto m = run_simulation(cfg);
  CHECK(m.mean_fraction_served > 0.0);
  CHECK(m.mean_fraction_served < 1.0);
  CHECK(m.schedule_violations == 0);
}

TEST_CASE("capacity slack serves everyone") {
  SimConfig cfg = small_config();
  cfg.N = 20;
  cfg.C = 20;
  cfg.delta = cfg.T;
  cfg.gamma = 0.99;
  cfg.W = 1;
  cfg.validate_schedules = true;
  const auto m = run_simulation(cfg);
  CHECK(m.mean_fraction_served == 1.0);
  CHECK(m.schedule_violations == 0);
  for (double f : m.served_by_distance.served_fraction) {
    if (!std::isnan(f)) CHECK(f == 1.0);
  }
}

TEST_CASE("fairness histogram") {
  TopologyTrace t;
  t.distances = {5.0, 15.0, 25.0, 59.9};
  t.served_cycles = {4, 2, 0, 1};
  t.window_cycles = 4;
  const auto h = fairness_by_distance(std::vector<TopologyTrace>{t}, 60.0, 3);
  CHECK(h.bin_centers == std::vector<double>{10.0, 30.0, 50.0});
  CHECK(h.served_fraction[0] == doctest::Approx(6.0 / 8.0));
  CHECK(h.served_fraction[1] == 0.0);
  CHECK(h.served_fraction[2] == doctest::Approx(0.25));
  const auto one = fairness_by_distance(std::vector<TopologyTrace>{t}, 60.0, 1);
  CHECK(one.served_fraction[0] == doctest::Approx(7.0 / 16.0));
  const auto empty = fairness_by_distance(std::vector<TopologyTrace>{}, 60.0, 2);
  CHECK(std::isnan(empty.served_fraction[0]));
}

TEST_CASE("per-cycle interference redraw keeps schedules valid") {
  SimConfig cfg = small_config();
  cfg.interference_per_cycle = true;
  cfg.validate_schedules = true;
  CHECK(run_simulation(cfg).schedule_violations == 0);
}

TEST_CASE("distance threshold: inner devices never refresh their CSI") {
  SimConfig cfg;
  cfg.pilot_policy = PilotPolicy::DistanceThreshold;
  cfg.distance_threshold = 30.0;
  cfg.n_cycles = 12;
  const FTable table = build_f_table(cfg.gamma, cfg.rho, cfg.table_options());
  TopologySimulation sim(cfg, table, 5);
  int far = 0;
  for (const auto& d : sim.devices()) far += d.distance > 30.0;
  REQUIRE(far >= cfg.pilot_rus());
  for (int m = 0; m < cfg.n_cycles; ++m) {
    const auto out = sim.run_cycle();
    for (int id : out.pilot_ids) CHECK(sim.devices()[static_cast<std::size_t>(id)].distance > 30.0);
    for (const auto& d : sim.devices()) {
      if (d.distance <= 30.0) CHECK(out.csi_age_used[static_cast<std::size_t>(d.id)] == -1);
    }
  }
}
