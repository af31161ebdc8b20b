#pragma once

#include <vector>

#include "urllc/f_table.hpp"

namespace urllc {

struct LinkParams {
  double gamma_t = 1e10;   // linear transmit SNR P_T / N_0
  double alpha = 3.0;      // path-loss exponent
  int ell = 100;           // packet size, bits
  double bandwidth_hz = 180e3;
  double tau_s = 0.144e-3;

  // Bits carried per RU per unit spectral efficiency.
  double q() const { return bandwidth_hz * tau_s; }

  static LinkParams from_db(double gamma_t_db, double alpha, int ell, double bandwidth_hz, double tau_s);
  void validate() const;
};

double db_to_linear(double db);

// Per-channel equivalent interference coefficients Lambda_c = 1 + Y_c.
struct ChannelInterference {
  std::vector<double> lambda;
};

// Gamma_T d^-alpha h2 / Lambda_c.
double sinr(double distance, double lambda_c, double h2, const LinkParams& lp);

// Shannon condition: log2(1 + sinr) >= ell / (k q).
bool decode_success(double distance, double lambda_c, double h2, int k, const LinkParams& lp);

// RUs needed for outage <= 1 - rho when the fading power is known only to
// exceed `fading_quantile` with probability rho.
int required_rus_for_quantile(double distance, double lambda_c, double fading_quantile, const LinkParams& lp);

// Requirement with no CSI: fading power is unit-mean exponential.
int required_rus_no_csi(double distance, double lambda_c, double rho, const LinkParams& lp);

// Requirement given CSI z measured age_t cycles before use. Ages beyond the
// source's range fall back to required_rus_no_csi.
int required_rus_with_csi(double distance, double lambda_c, double rho, int age_t, double z,
                          const LinkParams& lp, const QuantileSource& quantiles);

// Requirement context for one topology: link constants, reliability target,
// per-channel interference and the quantile source used for aged CSI.
class RequirementModel {
 public:
  RequirementModel(LinkParams link, double rho, std::vector<double> lambda, const QuantileSource& quantiles);

  int channels() const { return static_cast<int>(lambda_.size()); }
  double rho() const { return rho_; }
  double gamma() const { return quantiles_->gamma(); }
  const LinkParams& link() const { return link_; }
  const std::vector<double>& lambda() const { return lambda_; }
  const QuantileSource& quantiles() const { return *quantiles_; }

  int no_csi(double distance, int channel) const;
  int with_csi(double distance, int channel, int age_t, double z) const;

 private:
  LinkParams link_;
  double rho_;
  std::vector<double> lambda_;
  const QuantileSource* quantiles_;
};

// Upper bound returned when the link is so poor the count is unbounded.
inline constexpr int kMaxRequiredRus = 1 << 20;

}  // namespace urllc
