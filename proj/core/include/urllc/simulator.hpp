#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "urllc/allocators.hpp"
#include "urllc/channel_model.hpp"
#include "urllc/f_table.hpp"
#include "urllc/link_budget.hpp"
#include "urllc/pilot_scheduler.hpp"

namespace urllc {

enum class AllocatorKind { Gba, Bca };

AllocatorKind parse_allocator(const std::string& name);
std::string to_string(AllocatorKind kind);

// Full experiment parameterization. Defaults reproduce the symmetric
// scenario (L = 60 m, gamma = 0.95, 100 dB, ...) with N = 100, eta = 0.4,
// W = 2, 10 topologies of 30 cycles.
struct SimConfig {
  int N = 100;
  int C = 5;
  int T = 50;
  int delta = 25;
  double eta = 0.4;
  int W = 2;
  double gamma = 0.95;
  double rho = 0.99999;
  double L = 60.0;
  double alpha = 3.0;
  double gamma_T_db = 100.0;
  int ell = 100;
  double tau = 0.144e-3;  // seconds
  double B = 180e3;       // Hz
  double Y_M = 4.0;
  int n_cycles = 30;
  int n_topologies = 10;
  std::uint64_t rng_seed = 1;
  PilotPolicy pilot_policy = PilotPolicy::RoundRobin;
  AllocatorKind allocator = AllocatorKind::Gba;
  int n_c = 12;  // subcarriers per channel, informational
  int n_t = 2;   // OFDM symbols per slot, informational
  double distance_threshold = 30.0;
  bool interference_per_cycle = false;
  bool validate_schedules = false;
  int fairness_bins = 10;
  int table_bins = 64;
  double table_z_max = 8.0;
  int table_max_age = 50;
  int threads = 0;  // 0: hardware concurrency

  // Pilot RUs per channel, floor(eta * T).
  int pilot_rus() const;
  LinkParams link() const;
  FTableOptions table_options() const;
  // Throws ParameterError naming the first offending field.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

std::vector<Device> generate_topology(const SimConfig& cfg, Rng& rng);
ChannelInterference draw_interference(const SimConfig& cfg, Rng& rng);
// floor(eta*T) distinct random pilot slots on each channel.
PruMask draw_pru_mask(const SimConfig& cfg, Rng& rng);

struct CycleOutcome {
  int cycle = 0;
  CycleSchedule schedule;             // allocation effective in this cycle
  int served = 0;
  int excluded = 0;
  int decode_failures = 0;
  long rus_used = 0;
  std::vector<int> pilot_ids;         // devices that sent pilots this cycle
  // Allocation computed at the end of this cycle, for cycle + W.
  int allocation_for_cycle = 0;
  std::vector<int> csi_age_used;      // per device index; -1 means no CSI
  std::vector<int> csi_measured_at;   // per device index; -1 means no CSI
  double allocation_ms = 0.0;
  std::vector<std::string> schedule_violations;  // for the new allocation, if validated
};

// One topology replication: a strictly sequential cycle loop.
class TopologySimulation {
 public:
  TopologySimulation(const SimConfig& cfg, const QuantileSource& quantiles, std::uint64_t topology_seed);

  CycleOutcome run_cycle();

  int next_cycle() const { return cycle_; }
  const std::vector<Device>& devices() const { return devices_; }
  const std::vector<double>& lambda() const { return lambda_; }
  const PruMask& pru_mask() const { return pru_mask_; }
  const std::vector<int>& upcoming_pilots() const { return next_pilots_.selected; }
  // Records with age relative to the last completed cycle.
  std::vector<CsiRecord> records() const;
  double fading_power(std::size_t device, int channel) const;

 private:
  struct PendingAllocation {
    int use_cycle;
    CycleSchedule schedule;
  };

  RequirementModel requirement_model() const;
  PilotPlan select_pilots(const RequirementModel& model);
  PendingAllocation allocate_for(int use_cycle, CycleOutcome* outcome);

  SimConfig cfg_;
  const QuantileSource* quantiles_;
  LinkParams link_;
  Rng topo_rng_;
  Rng fading_rng_;
  std::vector<Device> devices_;
  std::vector<double> lambda_;
  PruMask pru_mask_;
  std::vector<FadingCoefficient> fading_;  // [device * C + channel]
  std::vector<std::vector<double>> measured_z_;
  std::vector<int> measured_at_;           // -1 until first pilot
  RoundRobinCursor cursor_;
  PilotPlan next_pilots_;
  std::deque<PendingAllocation> pipeline_;
  int cycle_ = 0;
};

struct DistanceHistogram {
  std::vector<double> bin_centers;
  std::vector<double> served_fraction;  // NaN for empty bins
  std::vector<long> trials;
};

// Per-topology record of the measurement window.
struct TopologyTrace {
  std::vector<double> distances;
  std::vector<int> served_cycles;       // per device, cycles served in the window
  int window_cycles = 0;
  std::vector<double> fraction_per_cycle;
  long served_transmissions = 0;
  long decode_failures = 0;
  long rus_used = 0;
  double allocation_ms_total = 0.0;
  long allocations = 0;
  long schedule_violations = 0;
};

struct Metrics {
  std::vector<std::vector<double>> fraction_served;  // [topology][window cycle]
  std::vector<double> topology_mean;
  double mean_fraction_served = 0.0;
  double std_fraction_served = 0.0;  // sample std across topologies
  DistanceHistogram served_by_distance;
  long served_transmissions = 0;
  long reliability_violations = 0;
  double rus_per_served_device = 0.0;
  double mean_allocation_ms = 0.0;
  long schedule_violations = 0;
};

struct SimulationRun {
  Metrics metrics;
  std::vector<TopologyTrace> traces;
};

DistanceHistogram fairness_by_distance(std::span<const TopologyTrace> traces, double L, int n_bins);

TopologyTrace run_topology(const SimConfig& cfg, const QuantileSource& quantiles, int topology_index);

// Runs every topology and aggregates over the second half of the cycles.
// When `quantiles` is null a table is built from the config.
SimulationRun simulate(const SimConfig& cfg, const QuantileSource* quantiles = nullptr);
Metrics run_simulation(const SimConfig& cfg, const QuantileSource* quantiles = nullptr);

// Seed of topology k, derived from the experiment seed.
std::uint64_t topology_seed(std::uint64_t rng_seed, int topology_index);

}  // namespace urllc
