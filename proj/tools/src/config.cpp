#include "urllc_tools/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "urllc/errors.hpp"

namespace urllc::tools {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParameterError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParameterError("config key '" + key + "': expected true or false, got '" + text + "'");
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Field {
  std::string key;
  std::function<void(SimConfig&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

template <typename T>
Field numeric(const std::string& key, T SimConfig::*member) {
  return {key, [key, member](SimConfig& c, const std::string& v) { c.*member = parse_number<T>(key, v); },
          [member](const SimConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

Field boolean(const std::string& key, bool SimConfig::*member) {
  return {key, [key, member](SimConfig& c, const std::string& v) { c.*member = parse_bool(key, v); },
          [member](const SimConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      numeric("N", &SimConfig::N),
      numeric("C", &SimConfig::C),
      numeric("T", &SimConfig::T),
      numeric("delta", &SimConfig::delta),
      numeric("eta", &SimConfig::eta),
      numeric("W", &SimConfig::W),
      numeric("gamma", &SimConfig::gamma),
      numeric("rho", &SimConfig::rho),
      numeric("L", &SimConfig::L),
      numeric("alpha", &SimConfig::alpha),
      numeric("gamma_T_db", &SimConfig::gamma_T_db),
      numeric("ell", &SimConfig::ell),
      numeric("tau", &SimConfig::tau),
      numeric("B", &SimConfig::B),
      numeric("Y_M", &SimConfig::Y_M),
      numeric("n_cycles", &SimConfig::n_cycles),
      numeric("n_topologies", &SimConfig::n_topologies),
      numeric("rng_seed", &SimConfig::rng_seed),
      {"pilot_policy", [](SimConfig& c, const std::string& v) { c.pilot_policy = parse_pilot_policy(v); },
       [](const SimConfig& c) { return to_string(c.pilot_policy); }},
      {"allocator", [](SimConfig& c, const std::string& v) { c.allocator = parse_allocator(v); },
       [](const SimConfig& c) { return to_string(c.allocator); }},
      numeric("n_c", &SimConfig::n_c),
      numeric("n_t", &SimConfig::n_t),
      numeric("distance_threshold", &SimConfig::distance_threshold),
      boolean("interference_per_cycle", &SimConfig::interference_per_cycle),
      boolean("validate_schedules", &SimConfig::validate_schedules),
      numeric("fairness_bins", &SimConfig::fairness_bins),
      numeric("table_bins", &SimConfig::table_bins),
      numeric("table_z_max", &SimConfig::table_z_max),
      numeric("table_max_age", &SimConfig::table_max_age),
      numeric("threads", &SimConfig::threads),
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ParameterError("unknown config key '" + key + "'");
}

SimConfig parse_config(std::istream& in) {
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_config(in);
}

SimConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

void emit_config(std::ostream& out, const SimConfig& cfg) {
  for (const auto& f : fields()) out << f.key << " = " << f.get(cfg) << '\n';
}

std::string emit_config(const SimConfig& cfg) {
  std::ostringstream out;
  emit_config(out, cfg);
  return out.str();
}

}  // namespace urllc::tools
