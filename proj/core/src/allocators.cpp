#include "urllc/allocators.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <string>

#include "urllc/errors.hpp"

namespace urllc {

PruMask::PruMask(int channels, int slots)
    : channels_(channels), slots_(slots),
      bits_(static_cast<std::size_t>(std::max(channels, 0)) * static_cast<std::size_t>(std::max(slots, 0)), 0) {
  if (channels < 0 || slots < 0) throw ParameterError("PruMask dimensions must be non-negative");
}

bool PruMask::is_pilot(int channel, int slot) const {
  return bits_[static_cast<std::size_t>(channel) * slots_ + static_cast<std::size_t>(slot - 1)] != 0;
}

void PruMask::set_pilot(int channel, int slot, bool pilot) {
  if (channel < 0 || channel >= channels_ || slot < 1 || slot > slots_) {
    throw ParameterError("pilot RU (" + std::to_string(channel) + "," + std::to_string(slot) + ") out of range");
  }
  bits_[static_cast<std::size_t>(channel) * slots_ + static_cast<std::size_t>(slot - 1)] = pilot ? 1 : 0;
}

std::span<const std::uint8_t> PruMask::row(int channel) const {
  return std::span<const std::uint8_t>(bits_).subspan(static_cast<std::size_t>(channel) * slots_,
                                                       static_cast<std::size_t>(slots_));
}

std::vector<int> PruMask::pilot_slots(int channel) const {
  std::vector<int> out;
  for (int s = 1; s <= slots_; ++s) {
    if (is_pilot(channel, s)) out.push_back(s);
  }
  return out;
}

CycleSchedule CycleSchedule::empty(int T, int C, int delta, PruMask pru_mask) {
  if (T < 1 || C < 1) throw ParameterError("schedule needs T >= 1 and C >= 1");
  if (delta < 1) throw ParameterError("delta must be >= 1");
  if (pru_mask.channels() != C || pru_mask.slots() != T) {
    throw ParameterError("pilot mask dimensions do not match C x T");
  }
  CycleSchedule s;
  s.T = T;
  s.C = C;
  s.delta = delta;
  s.pru_mask = std::move(pru_mask);
  s.beta.assign(C, 0);
  return s;
}

std::optional<int> compute_zeta(int beta_c, int t_i, std::span<const std::uint8_t> pru_row, int needed) {
  if (needed < 1) throw ParameterError("needed RUs must be >= 1");
  const int T = static_cast<int>(pru_row.size());
  const int start = std::max(beta_c, t_i - 1);
  int gathered = 0;
  for (int slot = start + 1; slot <= T; ++slot) {
    if (!pru_row[static_cast<std::size_t>(slot - 1)]) ++gathered;
    if (gathered == needed) return slot - start;
  }
  return std::nullopt;
}

bool edge_feasible(int beta_c, int t_i, int zeta, int delta) {
  return std::max(beta_c, t_i - 1) + zeta < t_i + delta;
}

std::int64_t edge_weight(int beta_c, int t_i, int zeta, int T, int delta) {
  return static_cast<std::int64_t>(T) + delta - (std::max(beta_c, t_i - 1) + zeta);
}

namespace {

void check_fresh(const CycleSchedule& schedule) {
  if (!schedule.assignments.empty() || !schedule.excluded.empty()) {
    throw ParameterError("allocation requires a schedule without prior assignments");
  }
  if (static_cast<int>(schedule.beta.size()) != schedule.C ||
      std::any_of(schedule.beta.begin(), schedule.beta.end(), [](int b) { return b != 0; })) {
    throw ParameterError("allocation requires all beta_c == 0");
  }
}

// requirements[k * C + c]
std::vector<int> evaluate_requirements(std::span<const Device> devices, int C, const RequirementProvider& req) {
  std::vector<int> out(devices.size() * static_cast<std::size_t>(C));
  for (std::size_t k = 0; k < devices.size(); ++k) {
    for (int c = 0; c < C; ++c) {
      const int f = req(devices[k], c);
      if (f < 1) {
        throw ParameterError("requirement for device " + std::to_string(devices[k].id) + " on channel " +
                             std::to_string(c) + " is < 1");
      }
      out[k * static_cast<std::size_t>(C) + static_cast<std::size_t>(c)] = f;
    }
  }
  return out;
}

void commit(CycleSchedule& schedule, const Device& device, int channel, int zeta) {
  const int start = std::max(schedule.beta[channel], device.issue_time - 1);
  DeviceAssignment a;
  a.channel = channel;
  for (int slot = start + 1; slot <= start + zeta; ++slot) {
    if (!schedule.pru_mask.is_pilot(channel, slot)) a.slots.push_back(slot);
  }
  schedule.beta[channel] = start + zeta;
  schedule.assignments.emplace(device.id, std::move(a));
}

}  // namespace

CycleSchedule gba_allocate(std::span<const Device> devices, CycleSchedule schedule,
                           const RequirementProvider& req, const GbaObserver& observer) {
  check_fresh(schedule);
  const int C = schedule.C;
  const auto required = evaluate_requirements(devices, C, req);

  std::vector<std::size_t> pending(devices.size());
  std::iota(pending.begin(), pending.end(), std::size_t{0});

  struct Candidate {
    int channel;
    std::size_t device;
    int zeta;
    std::int64_t weight;
  };

  while (!pending.empty()) {
    std::vector<Candidate> candidates;
    std::vector<std::size_t> connected;
    GbaIteration iteration;
    for (std::size_t k : pending) {
      const Device& d = devices[k];
      bool any = false;
      for (int c = 0; c < C; ++c) {
        const int need = required[k * static_cast<std::size_t>(C) + static_cast<std::size_t>(c)];
        const auto zeta = compute_zeta(schedule.beta[c], d.issue_time, schedule.pru_mask.row(c), need);
        if (!zeta || !edge_feasible(schedule.beta[c], d.issue_time, *zeta, schedule.delta)) continue;
        candidates.push_back({c, k, *zeta, edge_weight(schedule.beta[c], d.issue_time, *zeta, schedule.T, schedule.delta)});
        any = true;
      }
      if (any) {
        connected.push_back(k);
      } else {
        schedule.excluded.push_back(d.id);
        iteration.excluded_ids.push_back(d.id);
      }
    }
    if (connected.empty()) {
      if (observer) {
        iteration.beta_before = schedule.beta;
        observer(iteration);
      }
      break;
    }

    // Compact right-side indices to the connected devices.
    std::vector<int> right_of(devices.size(), -1);
    for (std::size_t r = 0; r < connected.size(); ++r) right_of[connected[r]] = static_cast<int>(r);

    iteration.graph.n_left = C;
    iteration.graph.n_right = static_cast<int>(connected.size());
    std::vector<int> zeta_of(static_cast<std::size_t>(C) * connected.size(), 0);
    for (const auto& cand : candidates) {
      const int r = right_of[cand.device];
      iteration.graph.edges.push_back({cand.channel, r, cand.weight});
      zeta_of[static_cast<std::size_t>(cand.channel) * connected.size() + static_cast<std::size_t>(r)] = cand.zeta;
    }
    iteration.matching = max_weight_matching(iteration.graph);
    iteration.beta_before = schedule.beta;
    for (std::size_t k : connected) iteration.device_ids.push_back(devices[k].id);

    std::vector<char> matched(connected.size(), 0);
    for (const auto& [c, r] : iteration.matching.pairs) {
      const int zeta = zeta_of[static_cast<std::size_t>(c) * connected.size() + static_cast<std::size_t>(r)];
      commit(schedule, devices[connected[r]], c, zeta);
      matched[r] = 1;
    }
    if (observer) observer(iteration);

    pending.clear();
    for (std::size_t r = 0; r < connected.size(); ++r) {
      if (!matched[r]) pending.push_back(connected[r]);
    }
  }
  return schedule;
}

CycleSchedule bca_allocate(std::span<const Device> devices, CycleSchedule schedule, const RequirementProvider& req) {
  check_fresh(schedule);
  const int C = schedule.C;
  const auto required = evaluate_requirements(devices, C, req);

  std::vector<std::size_t> order(devices.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (devices[x].issue_time != devices[y].issue_time) return devices[x].issue_time < devices[y].issue_time;
    return devices[x].id < devices[y].id;
  });

  for (std::size_t k : order) {
    const Device& d = devices[k];
    int best_channel = -1;
    int best_zeta = 0;
    int best_end = 0;
    for (int c = 0; c < C; ++c) {
      const int need = required[k * static_cast<std::size_t>(C) + static_cast<std::size_t>(c)];
      const auto zeta = compute_zeta(schedule.beta[c], d.issue_time, schedule.pru_mask.row(c), need);
      if (!zeta) continue;
      const int end = std::max(schedule.beta[c], d.issue_time - 1) + *zeta;
      if (best_channel == -1 || end < best_end) {
        best_channel = c;
        best_zeta = *zeta;
        best_end = end;
      }
    }
    if (best_channel != -1 && edge_feasible(schedule.beta[best_channel], d.issue_time, best_zeta, schedule.delta)) {
      commit(schedule, d, best_channel, best_zeta);
    } else {
      schedule.excluded.push_back(d.id);
    }
  }
  return schedule;
}

std::vector<std::string> validate_schedule(const CycleSchedule& schedule, std::span<const Device> devices,
                                           const RequirementProvider& req) {
  std::vector<std::string> issues;
  auto report = [&](const std::string& s) { issues.push_back(s); };

  std::map<int, const Device*> by_id;
  for (const auto& d : devices) by_id[d.id] = &d;

  std::set<int> excluded(schedule.excluded.begin(), schedule.excluded.end());
  if (excluded.size() != schedule.excluded.size()) report("a device is excluded more than once");
  for (const auto& d : devices) {
    const bool served = schedule.is_served(d.id);
    const bool dropped = excluded.count(d.id) != 0;
    if (served == dropped) {
      report("device " + std::to_string(d.id) + (served ? " is both served and excluded" : " is neither served nor excluded"));
    }
  }

  std::vector<std::vector<int>> owner(static_cast<std::size_t>(schedule.C),
                                      std::vector<int>(static_cast<std::size_t>(schedule.T) + 1, -1));
  std::vector<int> high_water(static_cast<std::size_t>(schedule.C), 0);

  for (const auto& [id, a] : schedule.assignments) {
    const auto it = by_id.find(id);
    const std::string who = "device " + std::to_string(id);
    if (it == by_id.end()) {
      report(who + " is assigned but unknown");
      continue;
    }
    const Device& d = *it->second;
    if (a.channel < 0 || a.channel >= schedule.C) {
      report(who + " has channel out of range");
      continue;
    }
    if (a.slots.empty()) {
      report(who + " has an empty slot list");
      continue;
    }
    if (!std::is_sorted(a.slots.begin(), a.slots.end()) ||
        std::adjacent_find(a.slots.begin(), a.slots.end()) != a.slots.end()) {
      report(who + " slot list is not strictly increasing");
    }
    const int need = req(d, a.channel);
    if (static_cast<int>(a.slots.size()) != need) {
      report(who + " holds " + std::to_string(a.slots.size()) + " RUs but needs " + std::to_string(need));
    }
    const int first = a.slots.front();
    const int last = a.slots.back();
    if (first < d.issue_time) report(who + " transmits before its issue time");
    if (last >= d.issue_time + schedule.delta) report(who + " misses its deadline");
    for (int s : a.slots) {
      if (s < 1 || s > schedule.T) {
        report(who + " uses slot " + std::to_string(s) + " outside the cycle");
        continue;
      }
      if (schedule.pru_mask.is_pilot(a.channel, s)) report(who + " uses pilot RU at slot " + std::to_string(s));
      int& o = owner[static_cast<std::size_t>(a.channel)][static_cast<std::size_t>(s)];
      if (o != -1) report("slot " + std::to_string(s) + " on channel " + std::to_string(a.channel) + " assigned twice");
      o = id;
      high_water[static_cast<std::size_t>(a.channel)] = std::max(high_water[static_cast<std::size_t>(a.channel)], s);
    }
    if (first >= 1 && last <= schedule.T) {
      for (int s = first; s <= last; ++s) {
        if (schedule.pru_mask.is_pilot(a.channel, s)) continue;
        if (!std::binary_search(a.slots.begin(), a.slots.end(), s)) {
          report(who + " skips data slot " + std::to_string(s) + " inside its window");
        }
      }
    }
  }

  if (static_cast<int>(schedule.beta.size()) != schedule.C) {
    report("beta has wrong length");
  } else {
    for (int c = 0; c < schedule.C; ++c) {
      if (schedule.beta[static_cast<std::size_t>(c)] != high_water[static_cast<std::size_t>(c)]) {
        report("beta[" + std::to_string(c) + "]=" + std::to_string(schedule.beta[static_cast<std::size_t>(c)]) +
               " but last allocated slot is " + std::to_string(high_water[static_cast<std::size_t>(c)]));
      }
    }
  }
  return issues;
}

void write_schedule_dump(std::ostream& out, const CycleSchedule& schedule, std::span<const Device> devices) {
  for (const auto& d : devices) {
    const auto it = schedule.assignments.find(d.id);
    if (it == schedule.assignments.end()) {
      out << d.id << " - - excluded\n";
      continue;
    }
    out << d.id << ' ' << it->second.channel << ' ';
    for (std::size_t k = 0; k < it->second.slots.size(); ++k) {
      if (k) out << ',';
      out << it->second.slots[k];
    }
    out << " served\n";
  }
}

}  // namespace urllc
