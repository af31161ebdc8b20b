#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "urllc/allocators.hpp"
#include "urllc/link_budget.hpp"

namespace urllc {

// Last CSI measurement of one device across all channels.
struct CsiRecord {
  int device_id = 0;
  std::vector<double> z;  // |h|^2 per channel at measurement time
  int age = 0;            // cycles since measurement; 0 if measured in the cycle just ended
  bool valid = false;     // false until the first pilot
};

struct PilotPlan {
  std::vector<int> selected;                    // distinct device ids
  std::vector<std::vector<int>> pru_positions;  // [channel][k]: slot of selected[k]'s pilot
};

enum class PilotPolicy { RoundRobin, DistanceThreshold, Dynamic };

PilotPolicy parse_pilot_policy(const std::string& name);
std::string to_string(PilotPolicy policy);

// Position in the id-ordered device rotation.
struct RoundRobinCursor {
  std::size_t next = 0;
};

// Next M devices in cyclic id order; advances the cursor by M.
PilotPlan round_robin_select(RoundRobinCursor& cursor, std::span<const Device> devices, int M);

// Round robin over devices farther than `threshold`. If fewer than M such
// devices exist, all of them are selected and the rest of the plan is
// filled by round robin over the remaining devices.
PilotPlan distance_threshold_select(std::span<const Device> devices, double threshold, int M,
                                    RoundRobinCursor& cursor);

// Expected RU saving from refreshing a device's CSI: best-channel
// requirement with the stored CSI one cycle older, minus the best-channel
// requirement with a fresh measurement (taken at its conditional mean) that
// will be W cycles old at use time. Devices without CSI get +infinity.
double pilot_gain(const CsiRecord& record, const Device& device, int W, const RequirementModel& model);

// Picks the M devices with the largest pilot_gain; ties go to older CSI,
// then to the lower id. records[k] must describe devices[k].
PilotPlan dynamic_select(std::span<const CsiRecord> records, std::span<const Device> devices, int M, int W,
                         const RequirementModel& model);

// Gives the k-th selected device the k-th pilot RU of every channel.
void bind_pilot_rus(PilotPlan& plan, const PruMask& mask);

}  // namespace urllc
