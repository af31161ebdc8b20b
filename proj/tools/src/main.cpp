#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "urllc/errors.hpp"
#include "urllc/simulator.hpp"
#include "urllc_tools/config.hpp"
#include "urllc_tools/experiments.hpp"

namespace {

using namespace urllc;
using namespace urllc::tools;

// Config file plus per-key overrides shared by every simulating subcommand.
struct ConfigArgs {
  std::string path;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> flags;  // (key, value) in flag order
  bool validate = false;

  // Short flags mapped onto config keys.
  static const std::vector<std::pair<std::string, std::string>>& aliases() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"--N", "N"},           {"--C", "C"},
        {"--eta", "eta"},       {"--W", "W"},
        {"--gamma", "gamma"},   {"--rho", "rho"},
        {"--allocator", "allocator"}, {"--pilot-policy", "pilot_policy"},
        {"--seed", "rng_seed"}, {"--cycles", "n_cycles"},
        {"--topologies", "n_topologies"}, {"--threads", "threads"},
        {"--bins", "fairness_bins"},
    };
    return table;
  }

  std::vector<std::string> values = std::vector<std::string>(aliases().size());

  void attach(CLI::App* app) {
    app->add_option("-c,--config", path, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override any config key, key=value (repeatable)");
    for (std::size_t k = 0; k < aliases().size(); ++k) {
      app->add_option(aliases()[k].first, values[k], "sets " + aliases()[k].second);
    }
    app->add_flag("--validate", validate, "run the schedule validator on every allocation");
  }

  SimConfig build() const {
    SimConfig cfg = path.empty() ? SimConfig{} : parse_config_file(path);
    for (std::size_t k = 0; k < aliases().size(); ++k) {
      if (!values[k].empty()) apply_setting(cfg, aliases()[k].second, values[k]);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ParameterError("--set expects key=value, got '" + s + "'");
      apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (validate) cfg.validate_schedules = true;
    cfg.validate();
    return cfg;
  }
};

// Output stream for a path, or stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
    path_ = path;
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    if (!file_) return;
    file_->close();
    if (!*file_) throw std::runtime_error("failed writing '" + path_ + "'");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::string path_;
};

int report_violations(long violations) {
  if (violations == 0) return 0;
  std::cerr << "schedule validator reported " << violations << " violation(s)\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uplink URLLC resource allocation simulator"};
  app.require_subcommand(1);

  ConfigArgs run_args, sweep_args, fair_args, dump_args, show_args;
  std::string run_out, sweep_out, fair_out, table_out;

  auto* run = app.add_subcommand("run", "simulate one configuration and print a metrics row");
  run_args.attach(run);
  run->add_option("-o,--out", run_out, "CSV output path (default stdout)");

  SweepSpec spec;
  std::string sweep_values, sweep_allocators = "gba", sweep_policies = "round-robin";
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter over allocator/policy combinations");
  sweep_args.attach(sweep);
  sweep->add_option("-p,--param", spec.parameter, "eta | W | gamma | N")
      ->required()
      ->check(CLI::IsMember({"eta", "W", "gamma", "N"}));
  sweep->add_option("-v,--values", sweep_values, "comma list, a:b:step ranges allowed")->required();
  sweep->add_option("--allocators", sweep_allocators, "comma list of gba, bca");
  sweep->add_option("--policies", sweep_policies, "comma list of round-robin, distance-threshold, dynamic");
  sweep->add_flag("--delay-by-n", spec.delay_by_n, "N sweeps: GBA uses the N-dependent computational delay");
  sweep->add_option("-o,--out", sweep_out, "CSV output path (default stdout)");

  std::string fair_policies = "round-robin,dynamic";
  auto* fair = app.add_subcommand("fairness", "served fraction by distance bin, per pilot policy");
  fair_args.attach(fair);
  fair->add_option("--policies", fair_policies, "comma list of pilot policies");
  fair->add_option("-o,--out", fair_out, "CSV output path (default stdout)");

  double table_gamma = 0.95, table_rho = 0.99999;
  FTableOptions table_opts;
  auto* table = app.add_subcommand("build-table", "tabulate outage quantiles for aged CSI");
  table->add_option("--gamma", table_gamma, "fading correlation per cycle");
  table->add_option("--rho", table_rho, "reliability target");
  table->add_option("--bins", table_opts.n_bins, "z bins below z_max");
  table->add_option("--z-max", table_opts.z_max, "upper edge of the binned z range");
  table->add_option("--max-age", table_opts.max_age, "largest tabulated CSI age");
  table->add_option("-o,--out", table_out, "output path (default stdout)");

  int dump_topology = 0, dump_cycle = 0;
  auto* dump = app.add_subcommand("dump-schedule", "print the schedule effective in one cycle");
  dump_args.attach(dump);
  dump->add_option("--topology", dump_topology, "topology index")->check(CLI::NonNegativeNumber);
  dump->add_option("--cycle", dump_cycle, "cycle index")->check(CLI::NonNegativeNumber);

  auto* show = app.add_subcommand("show-config", "print the effective configuration");
  show_args.attach(show);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const SimConfig cfg = run_args.build();
      const Metrics m = run_simulation(cfg);
      Output out(run_out);
      out.stream() << kSweepHeader << '\n';
      write_metrics_row(out.stream(), "none", 0.0, cfg, m);
      out.close();
      return report_violations(m.schedule_violations);
    }
    if (sweep->parsed()) {
      spec.base = sweep_args.build();
      spec.values = parse_value_list(sweep_values);
      spec.variants = parse_variants(sweep_allocators, sweep_policies);
      spec.output_path = sweep_out;
      validate_sweep(spec);
      Output out(sweep_out);
      const long violations = run_sweep(spec, out.stream());
      out.close();
      return report_violations(violations);
    }
    if (fair->parsed()) {
      const SimConfig base = fair_args.build();
      Output out(fair_out);
      out.stream() << kFairnessHeader << '\n';
      long violations = 0;
      for (const auto& v : parse_variants(to_string(base.allocator), fair_policies)) {
        SimConfig cfg = base;
        cfg.pilot_policy = v.policy;
        const Metrics m = run_simulation(cfg);
        violations += m.schedule_violations;
        emit_fairness(out.stream(), cfg, m.served_by_distance);
      }
      out.close();
      return report_violations(violations);
    }
    if (table->parsed()) {
      const FTable t = build_f_table(table_gamma, table_rho, table_opts);
      Output out(table_out);
      write_f_table(out.stream(), t);
      out.close();
      return 0;
    }
    if (dump->parsed()) {
      const SimConfig cfg = dump_args.build();
      if (dump_topology >= cfg.n_topologies) throw ParameterError("--topology must be below n_topologies");
      if (dump_cycle >= cfg.n_cycles) throw ParameterError("--cycle must be below n_cycles");
      const FTable t = build_f_table(cfg.gamma, cfg.rho, cfg.table_options());
      TopologySimulation sim(cfg, t, topology_seed(cfg.rng_seed, dump_topology));
      CycleOutcome outcome;
      for (int m = 0; m <= dump_cycle; ++m) outcome = sim.run_cycle();
      write_schedule_dump(std::cout, outcome.schedule, sim.devices());
      return 0;
    }
    if (show->parsed()) {
      emit_config(std::cout, show_args.build());
      return 0;
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
