// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "urllc/allocators.hpp"
#include "urllc/channel_model.hpp"
#include "urllc/f_table.hpp"
#include "urllc/matching.hpp"
#include "urllc/simulator.hpp"

using namespace urllc;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Schedule violations seen by the simulation criteria.
long g_violations = 0;
int g_validated_runs = 0;

Metrics run_validated(SimConfig cfg) {
  cfg.validate_schedules = true;
  const Metrics m = run_simulation(cfg);
  g_violations += m.schedule_violations;
  ++g_validated_runs;
  return m;
}

Verdict conditional_law_ks() {
  const auto t0 = Clock::now();
  const double gamma = 0.95;
  const std::size_t n = 100000;
  const double crit = oracle::ks_critical_1pct(n);
  Rng rng(101);
  bool ok = true;
  double worst = 0.0;
  for (double z : {0.2, 1.5, 3.0}) {
    for (int t : {1, 3, 10}) {
      const auto p = gm_params(gamma, t);
      std::vector<double> sample(n);
      for (auto& x : sample) {
        FadingCoefficient h(std::sqrt(z), 0.0);
        for (int s = 0; s < t; ++s) h = evolve_fading(h, gamma, rng);
        x = std::norm(h);
      }
      const double d = oracle::ks_statistic(sample, [&](double x) { return conditional_cdf(x, z, p); });
      worst = std::max(worst, d);
      ok = ok && d < crit;
    }
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 60.0, fmt("max KS D=%.5f < %.5f over 9 (z,t) cases, %.1f s", worst, crit, secs)};
}

Verdict closed_form_b() {
  double worst_b = 0.0, worst_sum = 0.0;
  for (int g100 = 50; g100 <= 99; ++g100) {
    const double g = g100 / 100.0;
    for (int t = 1; t <= 50; ++t) {
      const auto p = gm_params(g, t);
      double series = 0.0;
      for (int j = 0; j < t; ++j) series += std::pow(g, 2 * j);
      worst_b = std::max(worst_b, std::abs(p.b - (1 - g * g) * series));
      worst_sum = std::max(worst_sum, std::abs(p.a * p.a + p.b - 1.0));
    }
  }
  return {worst_b <= 1e-12 && worst_sum <= 1e-12,
          fmt("max |b - series| = %.2e, max |a^2 + b - 1| = %.2e", worst_b, worst_sum)};
}

Verdict quantile_limit() {
  const double rho = 0.99999;
  const double target = -std::log(rho);
  const auto p = gm_params(0.95, 500);
  double worst = 0.0;
  for (double z : {0.2, 1.5, 3.0}) worst = std::max(worst, std::abs(inverse_conditional_cdf(1 - rho, z, p) - target));
  return {worst <= 1e-6, fmt("max |F^-1 - (-ln rho)| = %.2e at t=500", worst)};
}

Verdict matching_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> side(1, 7);
  std::uniform_real_distribution<double> dens(0.2, 1.0);
  int agree = 0;
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    BipartiteGraph g{side(rng), side(rng), {}};
    std::uniform_int_distribution<int> w(1, k % 3 == 0 ? 4 : 100);
    std::bernoulli_distribution keep(dens(rng));
    for (int l = 0; l < g.n_left; ++l)
      for (int r = 0; r < g.n_right; ++r)
        if (keep(rng)) g.edges.push_back({l, r, w(rng)});
    const auto m = max_weight_matching(g);
    const auto ref = oracle::brute_force_matching(g);
    if (is_valid_matching(g, m) && matching_weight(g, m) == std::max<std::int64_t>(ref.weight, 0)) ++agree;
  }
  const double secs = seconds_since(t0);
  return {agree == trials && secs < 30.0, fmt("%d/%d optimal, %.2f s", agree, trials, secs)};
}

Verdict zeta_golden() {
  PruMask mask(1, 12);
  mask.set_pilot(0, 6);
  mask.set_pilot(0, 8);
  const auto zeta = compute_zeta(3, 3, mask.row(0), 4);
  // Reach beta = 3 through a real allocation, then place the F = 4 device.
  const std::vector<Device> devices{{0, 1.0, 1}, {1, 1.0, 3}};
  const RequirementProvider req = [](const Device& d, int) { return d.id == 0 ? 3 : 4; };
  const auto s = gba_allocate(devices, CycleSchedule::empty(12, 1, 25, mask), req);
  const bool slots_ok = s.is_served(1) && s.assignments.at(1).slots == std::vector<int>{4, 5, 7, 9};
  return {zeta == 6 && slots_ok, fmt("zeta=%d, slots %s", zeta.value_or(-1), slots_ok ? "{4,5,7,9}" : "wrong")};
}

Verdict reliability_calibration() {
  const auto t0 = Clock::now();
  SimConfig cfg;
  cfg.rho = 0.99;
  cfg.n_topologies = 90;
  const Metrics m = run_validated(cfg);
  const double rate = static_cast<double>(m.reliability_violations) / static_cast<double>(m.served_transmissions);
  const double secs = seconds_since(t0);
  return {m.served_transmissions >= 100000 && rate <= 0.015 && secs < 300.0,
          fmt("%ld failures / %ld served = %.5f, %.1f s", m.reliability_violations, m.served_transmissions, rate, secs)};
}

Verdict eta_trend() {
  const auto t0 = Clock::now();
  std::vector<double> f;
  for (int k = 0; k <= 9; ++k) {
    SimConfig cfg;
    cfg.eta = k / 10.0;
    f.push_back(run_validated(cfg).mean_fraction_served);
  }
  const auto peak_it = std::max_element(f.begin(), f.end());
  const int peak = static_cast<int>(peak_it - f.begin());
  bool declining = true;
  for (int k = peak + 1; k <= 9; ++k) declining = declining && f[k] < f[k - 1];
  const bool ok = peak >= 3 && peak <= 5 && f[0] < *peak_it && declining && f[9] < 0.5 * *peak_it;
  std::string curve;
  for (double x : f) curve += fmt("%.3f ", x);
  const double secs = seconds_since(t0);
  return {ok && secs < 600.0, fmt("peak at eta=0.%d, curve: %s(%.1f s)", peak, curve.c_str(), secs)};
}

Verdict gba_vs_bca() {
  const auto t0 = Clock::now();
  double worst = 1.0, sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimConfig cfg;
    cfg.N = 200;
    cfg.C = 10;
    cfg.rng_seed = seed;
    cfg.allocator = AllocatorKind::Gba;
    cfg.W = 3;
    const double gba = run_validated(cfg).mean_fraction_served;
    cfg.allocator = AllocatorKind::Bca;
    cfg.W = 2;
    const double bca = run_validated(cfg).mean_fraction_served;
    worst = std::min(worst, gba - bca);
    sum += gba - bca;
  }
  const double secs = seconds_since(t0);
  return {worst >= 0.08 && secs < 1200.0,
          fmt("GBA - BCA: min %.1f pp, mean %.1f pp over 10 seeds, %.1f s", 100 * worst, 10 * sum, secs)};
}

Verdict w_sensitivity() {
  auto curve = [](double gamma) {
    std::vector<double> f;
    for (int W = 1; W <= 4; ++W) {
      SimConfig cfg;
      cfg.gamma = gamma;
      cfg.W = W;
      f.push_back(run_validated(cfg).mean_fraction_served);
    }
    return f;
  };
  const auto slow = curve(0.99);
  const auto fast = curve(0.9);
  const double spread = *std::max_element(slow.begin(), slow.end()) - *std::min_element(slow.begin(), slow.end());
  bool strict = true;
  for (std::size_t k = 1; k < fast.size(); ++k) strict = strict && fast[k] < fast[k - 1];
  return {spread < 0.03 && strict,
          fmt("gamma=0.99 spread %.1f pp; gamma=0.9: %.3f %.3f %.3f %.3f", 100 * spread, fast[0], fast[1], fast[2],
              fast[3])};
}

Verdict fairness() {
  SimConfig cfg;
  cfg.N = 150;
  cfg.C = 7;
  cfg.gamma = 0.97;
  cfg.fairness_bins = 5;  // last bin is the outer 20% of the radius
  cfg.pilot_policy = PilotPolicy::RoundRobin;
  const Metrics rr = run_validated(cfg);
  cfg.pilot_policy = PilotPolicy::Dynamic;
  const Metrics dyn = run_validated(cfg);
  const double outer_rr = rr.served_by_distance.served_fraction.back();
  const double outer_dyn = dyn.served_by_distance.served_fraction.back();
  const bool ok = outer_dyn - outer_rr >= 0.05 && dyn.mean_fraction_served >= rr.mean_fraction_served - 0.01;
  return {ok, fmt("outer bin %.3f -> %.3f, overall %.3f -> %.3f", outer_rr, outer_dyn, rr.mean_fraction_served,
                  dyn.mean_fraction_served)};
}

Verdict allocator_cost() {
  // Median of three runs per point limits scheduler noise.
  auto time_ms = [](AllocatorKind kind, int N) {
    SimConfig cfg;
    cfg.N = N;
    cfg.C = 10;
    cfg.allocator = kind;
    cfg.threads = 1;
    cfg.n_topologies = 20;
    const FTable table = build_f_table(cfg.gamma, cfg.rho, cfg.table_options());
    std::vector<double> t;
    for (int rep = 0; rep < 3; ++rep) t.push_back(run_simulation(cfg, &table).mean_allocation_ms);
    std::sort(t.begin(), t.end());
    return t[1];
  };
  const double g1 = time_ms(AllocatorKind::Gba, 100), g2 = time_ms(AllocatorKind::Gba, 200);
  const double b1 = time_ms(AllocatorKind::Bca, 100), b2 = time_ms(AllocatorKind::Bca, 200);
  // "At most linearly within noise": a doubling of N may cost up to 2.6x.
  return {g2 / g1 >= 3.0 && b2 / b1 <= 2.6,
          fmt("GBA %.3f -> %.3f ms (x%.2f), BCA %.4f -> %.4f ms (x%.2f)", g1, g2, g2 / g1, b1, b2, b2 / b1)};
}

Verdict schedule_validity() {
  return {g_violations == 0 && g_validated_runs > 0,
          fmt("%ld violations across %d validated simulations", g_violations, g_validated_runs)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "conditional fading law vs Monte Carlo (KS)", conditional_law_ks},
      {2, "closed-form b", closed_form_b},
      {3, "quantile tends to the no-CSI value", quantile_limit},
      {4, "matching vs exhaustive optimum", matching_oracle},
      {5, "zeta golden case", zeta_golden},
      {6, "reliability calibration at rho=0.99", reliability_calibration},
      {7, "fraction served vs eta", eta_trend},
      {8, "GBA vs BCA at N=200", gba_vs_bca},
      {9, "W sensitivity", w_sensitivity},
      {10, "dynamic pilots help edge devices", fairness},
      {11, "relative allocator cost", allocator_cost},
      {12, "schedule validity", schedule_validity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
