#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "urllc/simulator.hpp"

namespace urllc::tools {

struct Variant {
  AllocatorKind allocator = AllocatorKind::Gba;
  PilotPolicy policy = PilotPolicy::RoundRobin;
};

struct SweepSpec {
  SimConfig base;
  std::string parameter;  // eta | W | gamma | N
  std::vector<double> values;
  std::vector<Variant> variants;
  // N sweeps only: GBA rows take W from gba_delay_for_n, BCA keeps base.W.
  bool delay_by_n = false;
  std::string output_path;  // empty: stdout
};

// Computational delay of GBA as a function of N on the reference hardware.
int gba_delay_for_n(int N);

std::vector<double> parse_value_list(const std::string& text);
std::vector<Variant> parse_variants(const std::string& allocators, const std::string& policies);

// Throws ParameterError unless every swept value gives a valid config.
void validate_sweep(const SweepSpec& spec);

inline constexpr const char* kSweepHeader =
    "parameter,value,allocator,pilot_policy,W,mean_fraction_served,std_fraction_served,"
    "rus_per_served_device,allocation_ms,decode_failure_rate,schedule_violations";

SimConfig sweep_point(const SweepSpec& spec, double value, const Variant& v);
void write_metrics_row(std::ostream& out, const std::string& parameter, double value, const SimConfig& cfg,
                       const Metrics& m);
// Returns the total number of schedule violations observed.
long run_sweep(const SweepSpec& spec, std::ostream& out);

inline constexpr const char* kFairnessHeader = "pilot_policy,allocator,W,bin_center_m,served_fraction,trials";

void emit_fairness(std::ostream& out, const SimConfig& cfg, const DistanceHistogram& h);

}  // namespace urllc::tools
