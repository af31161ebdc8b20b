#include "urllc/pilot_scheduler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "urllc/channel_model.hpp"
#include "urllc/errors.hpp"

namespace urllc {
namespace {

std::vector<std::size_t> id_order(std::span<const Device> devices) {
  std::vector<std::size_t> order(devices.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return devices[a].id < devices[b].id; });
  return order;
}

void check_count(int M, std::size_t n) {
  if (M < 0) throw ParameterError("pilot count M must be non-negative");
  if (static_cast<std::size_t>(M) > n) {
    throw ParameterError("pilot count M=" + std::to_string(M) + " exceeds the " + std::to_string(n) + " candidates");
  }
}

}  // namespace

PilotPolicy parse_pilot_policy(const std::string& name) {
  if (name == "round-robin") return PilotPolicy::RoundRobin;
  if (name == "distance-threshold") return PilotPolicy::DistanceThreshold;
  if (name == "dynamic") return PilotPolicy::Dynamic;
  throw ParameterError("unknown pilot policy '" + name + "' (expected round-robin, distance-threshold or dynamic)");
}

std::string to_string(PilotPolicy policy) {
  switch (policy) {
    case PilotPolicy::RoundRobin: return "round-robin";
    case PilotPolicy::DistanceThreshold: return "distance-threshold";
    case PilotPolicy::Dynamic: return "dynamic";
  }
  return "unknown";
}

PilotPlan round_robin_select(RoundRobinCursor& cursor, std::span<const Device> devices, int M) {
  check_count(M, devices.size());
  PilotPlan plan;
  if (devices.empty() || M == 0) return plan;
  const auto order = id_order(devices);
  const std::size_t n = order.size();
  for (int k = 0; k < M; ++k) {
    plan.selected.push_back(devices[order[(cursor.next + static_cast<std::size_t>(k)) % n]].id);
  }
  cursor.next = (cursor.next + static_cast<std::size_t>(M)) % n;
  return plan;
}

PilotPlan distance_threshold_select(std::span<const Device> devices, double threshold, int M,
                                    RoundRobinCursor& cursor) {
  check_count(M, devices.size());
  std::vector<Device> far, near;
  for (const auto& d : devices) (d.distance > threshold ? far : near).push_back(d);

  if (far.size() >= static_cast<std::size_t>(M)) return round_robin_select(cursor, far, M);

  PilotPlan plan;
  for (std::size_t k : id_order(far)) plan.selected.push_back(far[k].id);
  const PilotPlan padding = round_robin_select(cursor, near, M - static_cast<int>(far.size()));
  plan.selected.insert(plan.selected.end(), padding.selected.begin(), padding.selected.end());
  return plan;
}

double pilot_gain(const CsiRecord& record, const Device& device, int W, const RequirementModel& model) {
  if (W < 1) throw ParameterError("W must be >= 1");
  if (!record.valid) return std::numeric_limits<double>::infinity();
  const int C = model.channels();
  if (static_cast<int>(record.z.size()) != C) throw ParameterError("CSI record has wrong channel count");

  int keep_best = std::numeric_limits<int>::max();
  int refresh_best = std::numeric_limits<int>::max();
  for (int c = 0; c < C; ++c) {
    const double z = record.z[static_cast<std::size_t>(c)];
    keep_best = std::min(keep_best, model.with_csi(device.distance, c, record.age + 1, z));
    // A record aged 0 is its own expectation.
    const double expected = record.age == 0 ? z : conditional_mean(z, gm_params(model.gamma(), record.age));
    refresh_best = std::min(refresh_best, model.with_csi(device.distance, c, W, expected));
  }
  return static_cast<double>(keep_best) - static_cast<double>(refresh_best);
}

PilotPlan dynamic_select(std::span<const CsiRecord> records, std::span<const Device> devices, int M, int W,
                         const RequirementModel& model) {
  check_count(M, devices.size());
  if (records.size() != devices.size()) throw ParameterError("one CSI record per device is required");

  struct Ranked {
    double gain;
    int age;
    int id;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(devices.size());
  for (std::size_t k = 0; k < devices.size(); ++k) {
    if (records[k].device_id != devices[k].id) throw ParameterError("CSI records are not aligned with devices");
    const int age = records[k].valid ? records[k].age : std::numeric_limits<int>::max();
    ranked.push_back({pilot_gain(records[k], devices[k], W, model), age, devices[k].id});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    if (a.age != b.age) return a.age > b.age;
    return a.id < b.id;
  });

  PilotPlan plan;
  for (int k = 0; k < M; ++k) plan.selected.push_back(ranked[static_cast<std::size_t>(k)].id);
  return plan;
}

void bind_pilot_rus(PilotPlan& plan, const PruMask& mask) {
  plan.pru_positions.assign(static_cast<std::size_t>(mask.channels()), {});
  for (int c = 0; c < mask.channels(); ++c) {
    const auto slots = mask.pilot_slots(c);
    if (slots.size() < plan.selected.size()) {
      throw ParameterError("channel " + std::to_string(c) + " has fewer pilot RUs than selected devices");
    }
    plan.pru_positions[static_cast<std::size_t>(c)].assign(slots.begin(),
                                                           slots.begin() + static_cast<std::ptrdiff_t>(plan.selected.size()));
  }
}

}  // namespace urllc
