#include "urllc_tools/experiments.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "urllc/errors.hpp"

namespace urllc::tools {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int as_integer(const std::string& parameter, double value) {
  if (value != std::floor(value)) {
    throw ParameterError("sweep value " + std::to_string(value) + " for " + parameter + " must be an integer");
  }
  return static_cast<int>(value);
}

}  // namespace

int gba_delay_for_n(int N) {
  if (N <= 130) return 2;
  if (N <= 190) return 3;
  if (N <= 235) return 4;
  return 5;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split(text, ',')) {
    // a:b:step ranges, inclusive of b up to rounding.
    if (const auto parts = split(item, ':'); parts.size() == 3) {
      const double a = std::stod(parts[0]), b = std::stod(parts[1]), step = std::stod(parts[2]);
      if (!(step > 0.0)) throw ParameterError("range step must be positive in '" + item + "'");
      const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
      for (long k = 0; k <= n; ++k) values.push_back(std::round((a + k * step) * 1e12) / 1e12);
    } else {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw ParameterError("cannot parse sweep value '" + item + "'");
      values.push_back(v);
    }
  }
  if (values.empty()) throw ParameterError("sweep needs at least one value");
  return values;
}

std::vector<Variant> parse_variants(const std::string& allocators, const std::string& policies) {
  std::vector<Variant> out;
  for (const auto& a : split(allocators, ',')) {
    for (const auto& p : split(policies, ',')) out.push_back({parse_allocator(a), parse_pilot_policy(p)});
  }
  if (out.empty()) throw ParameterError("no allocator/policy combinations given");
  return out;
}

SimConfig sweep_point(const SweepSpec& spec, double value, const Variant& v) {
  SimConfig cfg = spec.base;
  cfg.allocator = v.allocator;
  cfg.pilot_policy = v.policy;
  if (spec.parameter == "eta") {
    cfg.eta = value;
  } else if (spec.parameter == "W") {
    cfg.W = as_integer("W", value);
  } else if (spec.parameter == "gamma") {
    cfg.gamma = value;
  } else if (spec.parameter == "N") {
    cfg.N = as_integer("N", value);
    if (spec.delay_by_n && v.allocator == AllocatorKind::Gba) cfg.W = gba_delay_for_n(cfg.N);
  } else {
    throw ParameterError("unknown sweep parameter '" + spec.parameter + "' (expected eta, W, gamma or N)");
  }
  return cfg;
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw ParameterError("sweep needs at least one value");
  if (spec.variants.empty()) throw ParameterError("sweep needs at least one allocator/policy combination");
  for (double value : spec.values) {
    for (const auto& v : spec.variants) sweep_point(spec, value, v).validate();
  }
}

void write_metrics_row(std::ostream& out, const std::string& parameter, double value, const SimConfig& cfg,
                       const Metrics& m) {
  const double failure_rate =
      m.served_transmissions > 0
          ? static_cast<double>(m.reliability_violations) / static_cast<double>(m.served_transmissions)
          : 0.0;
  const auto old = out.precision(10);
  out << parameter << ',' << value << ',' << to_string(cfg.allocator) << ',' << to_string(cfg.pilot_policy) << ','
      << cfg.W << ',' << m.mean_fraction_served << ',' << m.std_fraction_served << ',' << m.rus_per_served_device
      << ',' << m.mean_allocation_ms << ',' << failure_rate << ',' << m.schedule_violations << '\n';
  out.precision(old);
}

long run_sweep(const SweepSpec& spec, std::ostream& out) {
  validate_sweep(spec);
  out << kSweepHeader << '\n';
  long violations = 0;
  for (double value : spec.values) {
    for (const auto& v : spec.variants) {
      const SimConfig cfg = sweep_point(spec, value, v);
      const Metrics m = run_simulation(cfg);
      violations += m.schedule_violations;
      write_metrics_row(out, spec.parameter, value, cfg, m);
      out.flush();
    }
  }
  return violations;
}

void emit_fairness(std::ostream& out, const SimConfig& cfg, const DistanceHistogram& h) {
  const auto old = out.precision(10);
  for (std::size_t b = 0; b < h.bin_centers.size(); ++b) {
    out << to_string(cfg.pilot_policy) << ',' << to_string(cfg.allocator) << ',' << cfg.W << ','
        << h.bin_centers[b] << ',';
    if (std::isnan(h.served_fraction[b])) {
      out << "nan";
    } else {
      out << h.served_fraction[b];
    }
    out << ',' << h.trials[b] << '\n';
  }
  out.precision(old);
}

}  // namespace urllc::tools
