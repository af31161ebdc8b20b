#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <tuple>

#include "urllc/channel_model.hpp"
#include "urllc/errors.hpp"
#include "urllc/f_table.hpp"
#include "urllc/pilot_scheduler.hpp"

using namespace urllc;

namespace {

std::vector<Device> line_of_devices(int n, double spacing) {
  std::vector<Device> out;
  for (int i = 0; i < n; ++i) out.push_back({i, spacing * (i + 1), 1});
  return out;
}

}  // namespace

TEST_CASE("policy names round-trip") {
  for (auto p : {PilotPolicy::RoundRobin, PilotPolicy::DistanceThreshold, PilotPolicy::Dynamic}) {
    CHECK(parse_pilot_policy(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_pilot_policy("random"), ParameterError);
}

TEST_CASE("round robin covers every device once per ceil(N/M) cycles") {
  const auto devices = line_of_devices(7, 1.0);
  RoundRobinCursor cursor;
  std::vector<int> seen;
  for (int cycle = 0; cycle < 4; ++cycle) {
    const auto plan = round_robin_select(cursor, devices, 2);
    CHECK(plan.selected.size() == 2);
    seen.insert(seen.end(), plan.selected.begin(), plan.selected.end());
  }
  CHECK(std::set<int>(seen.begin(), seen.end()).size() == 7);
  CHECK(seen == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 0});
  CHECK_THROWS_AS(round_robin_select(cursor, devices, 8), ParameterError);
  CHECK(round_robin_select(cursor, devices, 0).selected.empty());
}

TEST_CASE("round robin follows id order, not storage order") {
  std::vector<Device> devices{{5, 1.0, 1}, {2, 1.0, 1}, {9, 1.0, 1}};
  RoundRobinCursor cursor;
  CHECK(round_robin_select(cursor, devices, 2).selected == std::vector<int>{2, 5});
  CHECK(round_robin_select(cursor, devices, 2).selected == std::vector<int>{9, 2});
}

TEST_CASE("distance threshold prefers far devices and pads with near ones") {
  const auto devices = line_of_devices(6, 10.0);  // 10..60 m
  RoundRobinCursor cursor;
  const auto plan = distance_threshold_select(devices, 45.0, 3, cursor);
  CHECK(plan.selected == std::vector<int>{4, 5, 0});
  const auto next = distance_threshold_select(devices, 45.0, 3, cursor);
  CHECK(next.selected == std::vector<int>{4, 5, 1});

  RoundRobinCursor c2;
  CHECK(distance_threshold_select(devices, 25.0, 2, c2).selected == std::vector<int>{2, 3});
}

TEST_CASE("dynamic selection: unmeasured devices first, then largest gain") {
  const DirectQuantiles q(0.95, 0.999);
  const RequirementModel model(LinkParams{}, 0.999, {1.0, 2.0}, q);
  const auto devices = line_of_devices(4, 15.0);
  std::vector<CsiRecord> records(4);
  for (int i = 0; i < 4; ++i) records[i] = {i, {0.5, 0.5}, 1, true};
  records[2].valid = false;
  auto plan = dynamic_select(records, devices, 1, 2, model);
  CHECK(plan.selected == std::vector<int>{2});

  records[2].valid = true;
  std::vector<std::pair<double, int>> gains;
  for (int i = 0; i < 4; ++i) gains.push_back({-pilot_gain(records[i], devices[i], 2, model), i});
  std::sort(gains.begin(), gains.end());
  plan = dynamic_select(records, devices, 2, 2, model);
  CHECK(plan.selected.size() == 2);
  CHECK(-gains[0].first >= -gains[1].first);
  CHECK(pilot_gain(records[plan.selected[0]], devices[plan.selected[0]], 2, model) == -gains[0].first);
}

TEST_CASE("dynamic ties go to older CSI, then lower id") {
  const DirectQuantiles q(0.95, 0.999);
  const RequirementModel model(LinkParams{}, 0.999, {1.0}, q);
  // Very close devices need a single RU whatever the CSI: all gains are 0.
  std::vector<Device> devices{{0, 1.0, 1}, {1, 1.0, 1}, {2, 1.0, 1}};
  std::vector<CsiRecord> records{{0, {1.0}, 3, true}, {1, {1.0}, 5, true}, {2, {1.0}, 3, true}};
  for (std::size_t i = 0; i < 3; ++i) CHECK(pilot_gain(records[i], devices[i], 2, model) == 0.0);
  CHECK(dynamic_select(records, devices, 2, 2, model).selected == std::vector<int>{1, 0});
}

TEST_CASE("pilot gain compares one-cycle-older CSI against a fresh W-old measurement") {
  const DirectQuantiles q(0.95, 0.99999);
  const RequirementModel model(LinkParams{}, 0.99999, {3.0}, q);
  const Device far{0, 58.0, 1};
  const CsiRecord rec{0, {1.0}, 4, true};
  const double expected_z = conditional_mean(1.0, gm_params(0.95, 4));
  const double want = model.with_csi(58.0, 0, 5, 1.0) - model.with_csi(58.0, 0, 2, expected_z);
  CHECK(pilot_gain(rec, far, 2, model) == want);
  const CsiRecord fresh{0, {1.0}, 0, true};
  CHECK(pilot_gain(fresh, far, 2, model) == model.with_csi(58.0, 0, 1, 1.0) - model.with_csi(58.0, 0, 2, 1.0));
  CHECK(pilot_gain(CsiRecord{0, {1.0}, 0, false}, far, 2, model) == std::numeric_limits<double>::infinity());
}

TEST_CASE("pilot RUs are bound in selection order") {
  PruMask mask(2, 8);
  mask.set_pilot(0, 2);
  mask.set_pilot(0, 7);
  mask.set_pilot(1, 1);
  mask.set_pilot(1, 3);
  PilotPlan plan{{4, 1}, {}};
  bind_pilot_rus(plan, mask);
  CHECK(plan.pru_positions[0] == std::vector<int>{2, 7});
  CHECK(plan.pru_positions[1] == std::vector<int>{1, 3});
  PilotPlan too_many{{1, 2, 3}, {}};
  CHECK_THROWS_AS(bind_pilot_rus(too_many, mask), ParameterError);
}

TEST_CASE("round robin pattern for N=6, M=2 and M=N") {
  const auto devices = line_of_devices(6, 5.0);
  RoundRobinCursor cursor;
  const std::vector<std::vector<int>> expected{{0, 1}, {2, 3}, {4, 5}, {0, 1}};
  for (const auto& e : expected) CHECK(round_robin_select(cursor, devices, 2).selected == e);
  RoundRobinCursor all;
  for (int k = 0; k < 3; ++k) CHECK(round_robin_select(all, devices, 6).selected == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("distance threshold degenerates to round robin") {
  const auto devices = line_of_devices(7, 8.0);
  for (double threshold : {0.0, 60.0}) {
    RoundRobinCursor a, b;
    for (int k = 0; k < 5; ++k) {
      CHECK(distance_threshold_select(devices, threshold, 3, a).selected ==
            round_robin_select(b, devices, 3).selected);
    }
  }
}

TEST_CASE("pilot gain signs") {
  const DirectQuantiles q(0.95, 0.99999);
  const RequirementModel model(LinkParams{}, 0.99999, {3.0, 3.0}, q);
  const Device d{0, 55.0, 1};
  // Just measured, excellent channel: refreshing buys nothing.
  CHECK(pilot_gain(CsiRecord{0, {6.0, 5.0}, 0, true}, d, 2, model) <= 0.0);
  // Stale, bad channel: refreshing pays.
  CHECK(pilot_gain(CsiRecord{0, {0.5, 0.5}, 5, true}, d, 2, model) > 0.0);
}

TEST_CASE("dynamic selection equals the top-M of recomputed gains") {
  const DirectQuantiles q(0.95, 0.99999);
  const RequirementModel model(LinkParams{}, 0.99999, {1.5, 4.0, 2.5}, q);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> dist(5.0, 60.0), z(0.0, 4.0);
  std::uniform_int_distribution<int> age(0, 12);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Device> devices;
    std::vector<CsiRecord> records;
    for (int i = 0; i < 25; ++i) {
      devices.push_back({i, dist(rng), 1});
      records.push_back({i, {z(rng), z(rng), z(rng)}, age(rng), true});
    }
    struct G {
      double gain;
      int age, id;
    };
    std::vector<G> ranked;
    for (int i = 0; i < 25; ++i) ranked.push_back({pilot_gain(records[i], devices[i], 3, model), records[i].age, i});
    std::sort(ranked.begin(), ranked.end(), [](const G& a, const G& b) {
      return std::tie(b.gain, b.age, a.id) < std::tie(a.gain, a.age, b.id);
    });
    std::vector<int> expected;
    for (int k = 0; k < 8; ++k) expected.push_back(ranked[k].id);
    CHECK(dynamic_select(records, devices, 8, 3, model).selected == expected);
  }
}

TEST_CASE("identical records fall back to the oldest CSI") {
  const DirectQuantiles q(0.95, 0.99999);
  const RequirementModel model(LinkParams{}, 0.99999, {2.0}, q);
  std::vector<Device> devices{{0, 40.0, 1}, {1, 40.0, 1}, {2, 40.0, 1}};
  std::vector<CsiRecord> records{{0, {1.0}, 2, true}, {1, {1.0}, 2, true}, {2, {1.0}, 2, true}};
  CHECK(dynamic_select(records, devices, 2, 2, model).selected == std::vector<int>{0, 1});
}
