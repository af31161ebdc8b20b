#include "urllc/f_table.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "urllc/channel_model.hpp"
#include "urllc/errors.hpp"

namespace urllc {
namespace {

void check_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw ParameterError("rho must lie in (0, 1), got " + std::to_string(rho));
  }
}

void check_age(int age_t, int max_age) {
  if (age_t < 1 || age_t > max_age) {
    throw ParameterError("age " + std::to_string(age_t) + " outside [1, " + std::to_string(max_age) + "]");
  }
}

}  // namespace

DirectQuantiles::DirectQuantiles(double gamma, double rho, int max_age)
    : gamma_(gamma), rho_(rho), max_age_(max_age) {
  check_rho(rho);
  gm_params(gamma, 1);  // validates gamma
  if (max_age < 1) throw ParameterError("max_age must be >= 1");
}

double DirectQuantiles::outage_quantile(int age_t, double z) const {
  check_age(age_t, max_age_);
  return inverse_conditional_cdf(1.0 - rho_, z, gm_params(gamma_, age_t));
}

FTable::FTable(double gamma, double rho, int n_bins, double z_max, int max_age,
               std::vector<double> entries)
    : gamma_(gamma), rho_(rho), n_bins_(n_bins), z_max_(z_max), max_age_(max_age),
      entries_(std::move(entries)) {
  check_rho(rho);
  if (n_bins < 2) throw ParameterError("n_bins must be >= 2");
  if (max_age < 1) throw ParameterError("max_age must be >= 1");
  if (!(z_max > 0.0)) throw ParameterError("z_max must be positive");
  const auto expected = static_cast<std::size_t>(max_age) * static_cast<std::size_t>(n_bins + 1);
  if (entries_.size() != expected) {
    throw ParameterError("FTable expects " + std::to_string(expected) + " entries, got " +
                         std::to_string(entries_.size()));
  }
}

double FTable::bin_z(int r) const {
  if (r < 0 || r > n_bins_) throw ParameterError("bin index out of range");
  if (r == n_bins_) return z_max_;
  return (static_cast<double>(r) + 0.5) * z_max_ / static_cast<double>(n_bins_);
}

int FTable::bin_index(double z) const {
  if (!(z >= 0.0)) throw ParameterError("z must be non-negative");
  if (z >= z_max_) return n_bins_;
  const int r = static_cast<int>(z * static_cast<double>(n_bins_) / z_max_);
  return r < n_bins_ ? r : n_bins_ - 1;
}

double FTable::entry(int age_t, int r) const {
  check_age(age_t, max_age_);
  if (r < 0 || r > n_bins_) throw ParameterError("bin index out of range");
  return entries_[static_cast<std::size_t>(age_t - 1) * static_cast<std::size_t>(n_bins_ + 1) +
                  static_cast<std::size_t>(r)];
}

double FTable::outage_quantile(int age_t, double z) const {
  return entry(age_t, bin_index(z));
}

FTable build_f_table(double gamma, double rho, int n_bins, double z_max, int max_age) {
  check_rho(rho);
  if (n_bins < 2) throw ParameterError("n_bins must be >= 2");
  if (max_age < 1) throw ParameterError("max_age must be >= 1");
  if (!(z_max > 0.0)) throw ParameterError("z_max must be positive");

  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(max_age) * static_cast<std::size_t>(n_bins + 1));
  const double width = z_max / static_cast<double>(n_bins);
  for (int t = 1; t <= max_age; ++t) {
    const GmParams params = gm_params(gamma, t);
    for (int r = 0; r <= n_bins; ++r) {
      const double z = r == n_bins ? z_max : (static_cast<double>(r) + 0.5) * width;
      entries.push_back(inverse_conditional_cdf(1.0 - rho, z, params));
    }
  }
  return FTable(gamma, rho, n_bins, z_max, max_age, std::move(entries));
}

void write_f_table(std::ostream& out, const FTable& table) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "# urllc-ftable v1\n";
  out << "gamma " << table.gamma() << "\n";
  out << "rho " << table.rho() << "\n";
  out << "n_bins " << table.n_bins() << "\n";
  out << "z_max " << table.z_max() << "\n";
  out << "max_age " << table.max_age() << "\n";
  out << "t bin value\n";
  for (int t = 1; t <= table.max_age(); ++t) {
    for (int r = 0; r <= table.n_bins(); ++r) {
      out << t << ' ' << r << ' ' << table.entry(t, r) << '\n';
    }
  }
  out.precision(old_precision);
}

FTable read_f_table(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') return line;
    }
    throw ParameterError("f-table: unexpected end of input");
  };
  auto header = [&](const std::string& key) -> std::string {
    std::istringstream ss(next_line());
    std::string k, v;
    ss >> k >> v;
    if (k != key || v.empty()) throw ParameterError("f-table: expected header '" + key + "', got '" + line + "'");
    return v;
  };

  const double gamma = std::stod(header("gamma"));
  const double rho = std::stod(header("rho"));
  const int n_bins = std::stoi(header("n_bins"));
  const double z_max = std::stod(header("z_max"));
  const int max_age = std::stoi(header("max_age"));
  if (next_line().rfind("t bin value", 0) != 0) {
    throw ParameterError("f-table: missing column header");
  }
  if (n_bins < 2 || max_age < 1) throw ParameterError("f-table: invalid dimensions");

  const std::size_t cols = static_cast<std::size_t>(n_bins) + 1;
  std::vector<double> entries(static_cast<std::size_t>(max_age) * cols,
                              std::numeric_limits<double>::quiet_NaN());
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int t = 0, r = 0;
    double value = 0.0;
    if (!(ss >> t >> r >> value)) throw ParameterError("f-table: malformed row '" + line + "'");
    if (t < 1 || t > max_age || r < 0 || r > n_bins) {
      throw ParameterError("f-table: row index out of range '" + line + "'");
    }
    entries[static_cast<std::size_t>(t - 1) * cols + static_cast<std::size_t>(r)] = value;
    ++rows;
  }
  if (rows != entries.size()) {
    throw ParameterError("f-table: expected " + std::to_string(entries.size()) + " rows, got " +
                         std::to_string(rows));
  }
  for (double v : entries) {
    if (std::isnan(v)) throw ParameterError("f-table: missing entries");
  }
  return FTable(gamma, rho, n_bins, z_max, max_age, std::move(entries));
}

}  // namespace urllc
