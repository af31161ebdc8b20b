#pragma once

#include <iosfwd>
#include <vector>

namespace urllc {

// Source of outage quantiles F_t^{-1}(1 - rho | z): the fading power that is
// exceeded with probability rho, given a measurement z taken t cycles ago.
class QuantileSource {
 public:
  virtual ~QuantileSource() = default;

  virtual double rho() const = 0;
  virtual double gamma() const = 0;
  // Largest age the source resolves; older CSI is treated as absent.
  virtual int max_age() const = 0;
  // Requires 1 <= age_t <= max_age() and z >= 0.
  virtual double outage_quantile(int age_t, double z) const = 0;
};

// Exact quantiles by numerical inversion of the conditional CDF.
class DirectQuantiles final : public QuantileSource {
 public:
  DirectQuantiles(double gamma, double rho, int max_age = 1 << 20);

  double rho() const override { return rho_; }
  double gamma() const override { return gamma_; }
  int max_age() const override { return max_age_; }
  double outage_quantile(int age_t, double z) const override;

 private:
  double gamma_;
  double rho_;
  int max_age_;
};

// Offline lookup table of outage quantiles over quantized z.
//
// z is quantized into n_bins uniform bins on [0, z_max); each bin is
// represented by its midpoint. Values z >= z_max fall into one extra
// overflow bin represented by z_max itself. Since quantiles are
// nondecreasing in z, the overflow representative never overstates the
// channel quality of a measurement in that bin.
class FTable final : public QuantileSource {
 public:
  FTable(double gamma, double rho, int n_bins, double z_max, int max_age,
         std::vector<double> entries);

  double rho() const override { return rho_; }
  double gamma() const override { return gamma_; }
  int max_age() const override { return max_age_; }
  double outage_quantile(int age_t, double z) const override;

  int n_bins() const { return n_bins_; }
  double z_max() const { return z_max_; }
  // Representative z of bin r, r in [0, n_bins]; r == n_bins is the overflow bin.
  double bin_z(int r) const;
  int bin_index(double z) const;
  double entry(int age_t, int r) const;
  const std::vector<double>& entries() const { return entries_; }

  friend bool operator==(const FTable& x, const FTable& y) {
    return x.gamma_ == y.gamma_ && x.rho_ == y.rho_ && x.n_bins_ == y.n_bins_ && x.z_max_ == y.z_max_ &&
           x.max_age_ == y.max_age_ && x.entries_ == y.entries_;
  }

 private:
  double gamma_;
  double rho_;
  int n_bins_;
  double z_max_;
  int max_age_;
  std::vector<double> entries_;  // row-major [age_t - 1][r], (n_bins + 1) columns
};

struct FTableOptions {
  int n_bins = 64;
  double z_max = 8.0;
  int max_age = 50;
};

FTable build_f_table(double gamma, double rho, int n_bins, double z_max, int max_age);
inline FTable build_f_table(double gamma, double rho, const FTableOptions& opt = {}) {
  return build_f_table(gamma, rho, opt.n_bins, opt.z_max, opt.max_age);
}

// Columnar text format:
//   # urllc-ftable v1
//   gamma <g>
//   rho <r>
//   n_bins <n>
//   z_max <zm>
//   max_age <A>
//   t bin value
//   <t> <r> <value>      (one row per entry, t = 1..A, r = 0..n_bins)
void write_f_table(std::ostream& out, const FTable& table);
FTable read_f_table(std::istream& in);

}  // namespace urllc
