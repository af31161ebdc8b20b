#include "urllc/simulator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "urllc/errors.hpp"

namespace urllc {
namespace {

enum Stream : std::uint32_t { kTopologyStream = 1, kFadingStream = 2 };

Rng make_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return Rng(seq);
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ParameterError("invalid config: " + field + " " + what);
}

}  // namespace

AllocatorKind parse_allocator(const std::string& name) {
  if (name == "gba") return AllocatorKind::Gba;
  if (name == "bca") return AllocatorKind::Bca;
  throw ParameterError("unknown allocator '" + name + "' (expected gba or bca)");
}

std::string to_string(AllocatorKind kind) { return kind == AllocatorKind::Gba ? "gba" : "bca"; }

int SimConfig::pilot_rus() const { return static_cast<int>(std::floor(eta * T + 1e-9)); }

LinkParams SimConfig::link() const { return LinkParams::from_db(gamma_T_db, alpha, ell, B, tau); }

FTableOptions SimConfig::table_options() const { return {table_bins, table_z_max, table_max_age}; }

void SimConfig::validate() const {
  require(N >= 1, "N", "must be >= 1");
  require(C >= 1, "C", "must be >= 1");
  require(T >= 1, "T", "must be >= 1");
  require(delta >= 1 && delta <= T, "delta", "must lie in [1, T]");
  // eta = 1 is accepted: it is the degenerate all-pilot cycle.
  require(eta >= 0.0 && eta <= 1.0, "eta", "must lie in [0, 1]");
  require(W >= 1, "W", "must be >= 1");
  require(gamma >= 0.0 && gamma < 1.0, "gamma", "must lie in [0, 1)");
  require(rho > 0.0 && rho < 1.0, "rho", "must lie in (0, 1)");
  require(L > 0.0, "L", "must be positive");
  require(alpha > 0.0, "alpha", "must be positive");
  require(std::isfinite(gamma_T_db), "gamma_T_db", "must be finite");
  require(ell >= 1, "ell", "must be >= 1");
  require(tau > 0.0, "tau", "must be positive");
  require(B > 0.0, "B", "must be positive");
  require(Y_M >= 0.0, "Y_M", "must be non-negative");
  require(n_cycles >= 2 * W, "n_cycles", "must be >= 2*W");
  require(n_topologies >= 1, "n_topologies", "must be >= 1");
  require(n_c >= 1, "n_c", "must be >= 1");
  require(n_t >= 1, "n_t", "must be >= 1");
  require(distance_threshold >= 0.0, "distance_threshold", "must be non-negative");
  require(fairness_bins >= 1, "fairness_bins", "must be >= 1");
  require(table_bins >= 2, "table_bins", "must be >= 2");
  require(table_z_max > 0.0, "table_z_max", "must be positive");
  require(table_max_age >= 1, "table_max_age", "must be >= 1");
  require(threads >= 0, "threads", "must be >= 0");
}

std::vector<Device> generate_topology(const SimConfig& cfg, Rng& rng) {
  if (cfg.N < 1) throw ParameterError("N must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> issue(1, cfg.T);
  std::vector<Device> devices(static_cast<std::size_t>(cfg.N));
  for (int i = 0; i < cfg.N; ++i) {
    const double u = 1.0 - unit(rng);  // (0, 1], keeps d > 0
    devices[static_cast<std::size_t>(i)] = {i, std::sqrt(u) * cfg.L, issue(rng)};
  }
  return devices;
}

ChannelInterference draw_interference(const SimConfig& cfg, Rng& rng) {
  if (cfg.Y_M < 0.0) throw ParameterError("Y_M must be non-negative");
  ChannelInterference out;
  out.lambda.assign(static_cast<std::size_t>(cfg.C), 1.0);
  if (cfg.Y_M == 0.0) return out;
  std::uniform_real_distribution<double> y(0.0, cfg.Y_M);
  for (auto& l : out.lambda) l = 1.0 + y(rng);
  return out;
}

PruMask draw_pru_mask(const SimConfig& cfg, Rng& rng) {
  PruMask mask(cfg.C, cfg.T);
  const int M = std::min(cfg.pilot_rus(), cfg.T);
  std::vector<int> slots(static_cast<std::size_t>(cfg.T));
  for (int c = 0; c < cfg.C; ++c) {
    std::iota(slots.begin(), slots.end(), 1);
    std::shuffle(slots.begin(), slots.end(), rng);
    for (int k = 0; k < M; ++k) mask.set_pilot(c, slots[static_cast<std::size_t>(k)]);
  }
  return mask;
}

std::uint64_t topology_seed(std::uint64_t rng_seed, int topology_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                    static_cast<std::uint32_t>(topology_index), 0x746f706fU};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

TopologySimulation::TopologySimulation(const SimConfig& cfg, const QuantileSource& quantiles,
                                       std::uint64_t seed)
    : cfg_(cfg), quantiles_(&quantiles), link_(cfg.link()),
      topo_rng_(make_stream(seed, kTopologyStream)), fading_rng_(make_stream(seed, kFadingStream)) {
  cfg_.validate();
  if (quantiles.rho() != cfg.rho) throw ParameterError("quantile source rho does not match config rho");
  if (quantiles.gamma() != cfg.gamma) throw ParameterError("quantile source gamma does not match config gamma");

  devices_ = generate_topology(cfg_, topo_rng_);
  pru_mask_ = draw_pru_mask(cfg_, topo_rng_);
  lambda_ = draw_interference(cfg_, topo_rng_).lambda;

  const auto cells = static_cast<std::size_t>(cfg_.N) * static_cast<std::size_t>(cfg_.C);
  fading_.resize(cells);
  for (auto& h : fading_) h = draw_complex_gaussian(fading_rng_);
  measured_z_.assign(static_cast<std::size_t>(cfg_.N), std::vector<double>(static_cast<std::size_t>(cfg_.C), 0.0));
  measured_at_.assign(static_cast<std::size_t>(cfg_.N), -1);

  // Cold start: nothing has been measured, so cycles 0..W-1 run on no-CSI
  // requirements.
  for (int use = 0; use < cfg_.W; ++use) pipeline_.push_back(allocate_for(use, nullptr));
  next_pilots_ = select_pilots(requirement_model());
}

RequirementModel TopologySimulation::requirement_model() const {
  return RequirementModel(link_, cfg_.rho, lambda_, *quantiles_);
}

double TopologySimulation::fading_power(std::size_t device, int channel) const {
  return std::norm(fading_[device * static_cast<std::size_t>(cfg_.C) + static_cast<std::size_t>(channel)]);
}

std::vector<CsiRecord> TopologySimulation::records() const {
  std::vector<CsiRecord> out(devices_.size());
  const int last = cycle_ - 1;
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    out[i].device_id = devices_[i].id;
    out[i].valid = measured_at_[i] >= 0;
    if (out[i].valid) {
      out[i].z = measured_z_[i];
      out[i].age = last - measured_at_[i];
    } else {
      out[i].z.assign(static_cast<std::size_t>(cfg_.C), 0.0);
    }
  }
  return out;
}

PilotPlan TopologySimulation::select_pilots(const RequirementModel& model) {
  const int M = std::min(cfg_.pilot_rus(), cfg_.N);
  PilotPlan plan;
  switch (cfg_.pilot_policy) {
    case PilotPolicy::RoundRobin:
      plan = round_robin_select(cursor_, devices_, M);
      break;
    case PilotPolicy::DistanceThreshold:
      plan = distance_threshold_select(devices_, cfg_.distance_threshold, M, cursor_);
      break;
    case PilotPolicy::Dynamic: {
      const auto recs = records();
      plan = dynamic_select(recs, devices_, M, cfg_.W, model);
      break;
    }
  }
  bind_pilot_rus(plan, pru_mask_);
  return plan;
}

TopologySimulation::PendingAllocation TopologySimulation::allocate_for(int use_cycle, CycleOutcome* outcome) {
  const RequirementModel model = requirement_model();
  const std::size_t n = devices_.size();
  const auto C = static_cast<std::size_t>(cfg_.C);
  std::vector<int> need(n * C);
  std::vector<int> ages(n, -1), measured(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const int at = measured_at_[i];
    if (at >= 0) {
      const int age = use_cycle - at;
      if (age < cfg_.W || at > use_cycle - cfg_.W) {
        throw std::logic_error("CSI measured at cycle " + std::to_string(at) + " used for cycle " +
                               std::to_string(use_cycle) + " violates the pipeline depth");
      }
      ages[i] = age;
      measured[i] = at;
    }
    for (std::size_t c = 0; c < C; ++c) {
      const int ch = static_cast<int>(c);
      need[i * C + c] = at >= 0 ? model.with_csi(devices_[i].distance, ch, ages[i], measured_z_[i][c])
                                : model.no_csi(devices_[i].distance, ch);
    }
  }
  const RequirementProvider req = [&](const Device& d, int channel) {
    return need[static_cast<std::size_t>(d.id) * C + static_cast<std::size_t>(channel)];
  };

  auto schedule = CycleSchedule::empty(cfg_.T, cfg_.C, cfg_.delta, pru_mask_);
  const auto start = std::chrono::steady_clock::now();
  schedule = cfg_.allocator == AllocatorKind::Gba ? gba_allocate(devices_, std::move(schedule), req)
                                                  : bca_allocate(devices_, std::move(schedule), req);
  const auto stop = std::chrono::steady_clock::now();

  if (outcome != nullptr) {
    outcome->allocation_for_cycle = use_cycle;
    outcome->csi_age_used = std::move(ages);
    outcome->csi_measured_at = std::move(measured);
    outcome->allocation_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    if (cfg_.validate_schedules) outcome->schedule_violations = validate_schedule(schedule, devices_, req);
  }
  return {use_cycle, std::move(schedule)};
}

CycleOutcome TopologySimulation::run_cycle() {
  const int m = cycle_;
  CycleOutcome out;
  out.cycle = m;

  // (1) fading and, optionally, interference evolve.
  for (auto& h : fading_) h = evolve_fading(h, cfg_.gamma, fading_rng_);
  if (cfg_.interference_per_cycle) lambda_ = draw_interference(cfg_, topo_rng_).lambda;

  // (2) the allocation computed W cycles ago takes effect.
  if (pipeline_.empty() || pipeline_.front().use_cycle != m) {
    throw std::logic_error("allocation pipeline out of step at cycle " + std::to_string(m));
  }
  out.schedule = std::move(pipeline_.front().schedule);
  pipeline_.pop_front();
  for (const auto& [id, a] : out.schedule.assignments) {
    const auto i = static_cast<std::size_t>(id);
    const int k = static_cast<int>(a.slots.size());
    ++out.served;
    out.rus_used += k;
    const double h2 = fading_power(i, a.channel);
    if (!decode_success(devices_[i].distance, lambda_[static_cast<std::size_t>(a.channel)], h2, k, link_)) {
      ++out.decode_failures;
    }
  }
  out.excluded = static_cast<int>(out.schedule.excluded.size());
  if (out.served + out.excluded != cfg_.N) {
    throw std::logic_error("served + excluded != N at cycle " + std::to_string(m));
  }

  // (3) pilot devices measure their channels exactly.
  out.pilot_ids = next_pilots_.selected;
  for (int id : out.pilot_ids) {
    const auto i = static_cast<std::size_t>(id);
    for (int c = 0; c < cfg_.C; ++c) measured_z_[i][static_cast<std::size_t>(c)] = fading_power(i, c);
    measured_at_[i] = m;
  }
  cycle_ = m + 1;

  // (4) next cycle's pilots, (5) allocation for cycle m + W.
  const RequirementModel model = requirement_model();
  next_pilots_ = select_pilots(model);
  pipeline_.push_back(allocate_for(m + cfg_.W, &out));
  return out;
}

DistanceHistogram fairness_by_distance(std::span<const TopologyTrace> traces, double L, int n_bins) {
  if (n_bins < 1) throw ParameterError("n_bins must be >= 1");
  if (!(L > 0.0)) throw ParameterError("L must be positive");
  DistanceHistogram h;
  const double width = L / n_bins;
  h.bin_centers.resize(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) h.bin_centers[static_cast<std::size_t>(b)] = (b + 0.5) * width;
  h.trials.assign(static_cast<std::size_t>(n_bins), 0);
  std::vector<long> served(static_cast<std::size_t>(n_bins), 0);
  for (const auto& t : traces) {
    for (std::size_t i = 0; i < t.distances.size(); ++i) {
      const int b = std::clamp(static_cast<int>(t.distances[i] / width), 0, n_bins - 1);
      h.trials[static_cast<std::size_t>(b)] += t.window_cycles;
      served[static_cast<std::size_t>(b)] += t.served_cycles[i];
    }
  }
  h.served_fraction.resize(static_cast<std::size_t>(n_bins));
  for (std::size_t b = 0; b < served.size(); ++b) {
    h.served_fraction[b] = h.trials[b] > 0 ? static_cast<double>(served[b]) / static_cast<double>(h.trials[b])
                                           : std::numeric_limits<double>::quiet_NaN();
  }
  return h;
}

TopologyTrace run_topology(const SimConfig& cfg, const QuantileSource& quantiles, int topology_index) {
  TopologySimulation sim(cfg, quantiles, topology_seed(cfg.rng_seed, topology_index));
  TopologyTrace trace;
  trace.distances.reserve(sim.devices().size());
  for (const auto& d : sim.devices()) trace.distances.push_back(d.distance);
  trace.served_cycles.assign(sim.devices().size(), 0);

  const int window_start = cfg.n_cycles / 2;
  for (int m = 0; m < cfg.n_cycles; ++m) {
    const CycleOutcome out = sim.run_cycle();
    trace.allocation_ms_total += out.allocation_ms;
    ++trace.allocations;
    trace.schedule_violations += static_cast<long>(out.schedule_violations.size());
    if (m < window_start) continue;
    ++trace.window_cycles;
    trace.fraction_per_cycle.push_back(static_cast<double>(out.served) / cfg.N);
    trace.served_transmissions += out.served;
    trace.decode_failures += out.decode_failures;
    trace.rus_used += out.rus_used;
    for (const auto& [id, a] : out.schedule.assignments) ++trace.served_cycles[static_cast<std::size_t>(id)];
  }
  return trace;
}

SimulationRun simulate(const SimConfig& cfg, const QuantileSource* quantiles) {
  cfg.validate();
  std::unique_ptr<FTable> owned;
  if (quantiles == nullptr) {
    owned = std::make_unique<FTable>(build_f_table(cfg.gamma, cfg.rho, cfg.table_options()));
    quantiles = owned.get();
  }

  SimulationRun run;
  run.traces.resize(static_cast<std::size_t>(cfg.n_topologies));
  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1U, static_cast<unsigned>(cfg.n_topologies));

  // Each replication writes only its own slot, so the merge below does not
  // depend on completion order.
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int k = next++; k < cfg.n_topologies; k = next++) {
      try {
        run.traces[static_cast<std::size_t>(k)] = run_topology(cfg, *quantiles, k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  Metrics& m = run.metrics;
  long rus = 0, allocations = 0;
  double alloc_ms = 0.0;
  for (const auto& t : run.traces) {
    m.fraction_served.push_back(t.fraction_per_cycle);
    const double mean = std::accumulate(t.fraction_per_cycle.begin(), t.fraction_per_cycle.end(), 0.0) /
                        static_cast<double>(t.fraction_per_cycle.size());
    m.topology_mean.push_back(mean);
    m.served_transmissions += t.served_transmissions;
    m.reliability_violations += t.decode_failures;
    m.schedule_violations += t.schedule_violations;
    rus += t.rus_used;
    alloc_ms += t.allocation_ms_total;
    allocations += t.allocations;
  }
  const double n = static_cast<double>(m.topology_mean.size());
  m.mean_fraction_served = std::accumulate(m.topology_mean.begin(), m.topology_mean.end(), 0.0) / n;
  if (m.topology_mean.size() > 1) {
    double ss = 0.0;
    for (double x : m.topology_mean) ss += (x - m.mean_fraction_served) * (x - m.mean_fraction_served);
    m.std_fraction_served = std::sqrt(ss / (n - 1.0));
  }
  m.rus_per_served_device =
      m.served_transmissions > 0 ? static_cast<double>(rus) / static_cast<double>(m.served_transmissions) : 0.0;
  m.mean_allocation_ms = allocations > 0 ? alloc_ms / static_cast<double>(allocations) : 0.0;
  m.served_by_distance = fairness_by_distance(run.traces, cfg.L, cfg.fairness_bins);
  return run;
}

Metrics run_simulation(const SimConfig& cfg, const QuantileSource* quantiles) {
  return simulate(cfg, quantiles).metrics;
}

}  // namespace urllc
