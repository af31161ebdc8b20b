#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urllc/matching.hpp"

namespace urllc {

struct Device {
  int id = 0;
  double distance = 1.0;  // meters, in (0, L]
  int issue_time = 1;     // slot in [1, T]
};

// C x T mask of pilot RUs. Slots are 1-based to match the cycle timeline.
class PruMask {
 public:
  PruMask() = default;
  PruMask(int channels, int slots);

  int channels() const { return channels_; }
  int slots() const { return slots_; }
  bool is_pilot(int channel, int slot) const;
  void set_pilot(int channel, int slot, bool pilot = true);
  std::span<const std::uint8_t> row(int channel) const;
  // Pilot slots of one channel, ascending.
  std::vector<int> pilot_slots(int channel) const;

  friend bool operator==(const PruMask&, const PruMask&) = default;

 private:
  int channels_ = 0;
  int slots_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct DeviceAssignment {
  int channel = 0;
  std::vector<int> slots;  // ascending, 1-based

  friend bool operator==(const DeviceAssignment&, const DeviceAssignment&) = default;
};

struct CycleSchedule {
  int T = 0;
  int C = 0;
  int delta = 0;
  PruMask pru_mask;
  std::vector<int> beta;                       // last allocated slot per channel, 0 if none
  std::map<int, DeviceAssignment> assignments; // device id -> RUs
  std::vector<int> excluded;                   // device ids, in exclusion order

  static CycleSchedule empty(int T, int C, int delta, PruMask pru_mask);
  bool is_served(int device_id) const { return assignments.count(device_id) != 0; }

  friend bool operator==(const CycleSchedule&, const CycleSchedule&) = default;
};

// Required RU count for a device on a channel; must be >= 1 and stable
// during one allocation run.
using RequirementProvider = std::function<int(const Device&, int channel)>;

// Smallest window length zeta such that slots start+1 .. start+zeta, with
// start = max(beta_c, t_i - 1), contain `needed` non-pilot slots. Empty when
// the window would run past the end of the cycle.
std::optional<int> compute_zeta(int beta_c, int t_i, std::span<const std::uint8_t> pru_row, int needed);

bool edge_feasible(int beta_c, int t_i, int zeta, int delta);

std::int64_t edge_weight(int beta_c, int t_i, int zeta, int T, int delta);

// One GBA iteration, reported to an optional observer.
struct GbaIteration {
  BipartiteGraph graph;         // right index k refers to device_ids[k]
  std::vector<int> device_ids;
  Matching matching;
  std::vector<int> excluded_ids;  // zero-degree devices dropped this iteration
  std::vector<int> beta_before;
};
using GbaObserver = std::function<void(const GbaIteration&)>;

// Graph-based allocation: repeated maximum-weight matching between channels
// and pending devices, jumping over pilot RUs.
CycleSchedule gba_allocate(std::span<const Device> devices, CycleSchedule schedule,
                           const RequirementProvider& req, const GbaObserver& observer = {});

// Greedy baseline: devices in issue-time order, each on the channel that
// completes its transmission earliest.
CycleSchedule bca_allocate(std::span<const Device> devices, CycleSchedule schedule,
                           const RequirementProvider& req);

// Returns a description of every violated schedule invariant (empty if valid).
std::vector<std::string> validate_schedule(const CycleSchedule& schedule, std::span<const Device> devices,
                                           const RequirementProvider& req);

// One line per device in input order: "<id> <channel> <slot,slot,...> served"
// or "<id> - - excluded".
void write_schedule_dump(std::ostream& out, const CycleSchedule& schedule, std::span<const Device> devices);

}  // namespace urllc
