#include "urllc/link_budget.hpp"

#include <cmath>
#include <string>

#include "urllc/errors.hpp"

namespace urllc {
namespace {

void check_link_geometry(double distance, double lambda_c) {
  if (!(distance > 0.0)) throw ParameterError("distance must be positive, got " + std::to_string(distance));
  if (!(lambda_c >= 1.0)) throw ParameterError("lambda_c must be >= 1, got " + std::to_string(lambda_c));
}

void check_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0, 1), got " + std::to_string(rho));
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

LinkParams LinkParams::from_db(double gamma_t_db, double alpha, int ell, double bandwidth_hz, double tau_s) {
  LinkParams lp;
  lp.gamma_t = db_to_linear(gamma_t_db);
  lp.alpha = alpha;
  lp.ell = ell;
  lp.bandwidth_hz = bandwidth_hz;
  lp.tau_s = tau_s;
  lp.validate();
  return lp;
}

void LinkParams::validate() const {
  if (!(gamma_t > 0.0)) throw ParameterError("gamma_T must be positive");
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  if (ell <= 0) throw ParameterError("ell must be positive");
  if (!(bandwidth_hz > 0.0)) throw ParameterError("B must be positive");
  if (!(tau_s > 0.0)) throw ParameterError("tau must be positive");
}

double sinr(double distance, double lambda_c, double h2, const LinkParams& lp) {
  check_link_geometry(distance, lambda_c);
  if (!(h2 >= 0.0)) throw ParameterError("h2 must be non-negative");
  return lp.gamma_t * std::pow(distance, -lp.alpha) * h2 / lambda_c;
}

bool decode_success(double distance, double lambda_c, double h2, int k, const LinkParams& lp) {
  if (k < 1) throw ParameterError("k must be >= 1, got " + std::to_string(k));
  const double capacity = std::log2(1.0 + sinr(distance, lambda_c, h2, lp));
  return static_cast<double>(k) * lp.q() * capacity >= static_cast<double>(lp.ell);
}

int required_rus_for_quantile(double distance, double lambda_c, double fading_quantile, const LinkParams& lp) {
  check_link_geometry(distance, lambda_c);
  if (!(fading_quantile >= 0.0)) throw ParameterError("fading quantile must be non-negative");
  const double snr_scale = lp.gamma_t / (lambda_c * std::pow(distance, lp.alpha));
  const double spectral = std::log2(1.0 + snr_scale * fading_quantile);
  const double k = static_cast<double>(lp.ell) / (lp.q() * spectral);
  if (!(k < static_cast<double>(kMaxRequiredRus))) return kMaxRequiredRus;
  return std::max(1, static_cast<int>(std::ceil(k)));
}

int required_rus_no_csi(double distance, double lambda_c, double rho, const LinkParams& lp) {
  check_rho(rho);
  return required_rus_for_quantile(distance, lambda_c, -std::log(rho), lp);
}

int required_rus_with_csi(double distance, double lambda_c, double rho, int age_t, double z,
                          const LinkParams& lp, const QuantileSource& quantiles) {
  check_rho(rho);
  if (age_t < 1) throw ParameterError("CSI age must be >= 1, got " + std::to_string(age_t));
  if (!(z >= 0.0)) throw ParameterError("z must be non-negative");
  if (std::abs(quantiles.rho() - rho) > 1e-12) {
    throw ParameterError("quantile source built for rho=" + std::to_string(quantiles.rho()) +
                         ", requested rho=" + std::to_string(rho));
  }
  if (age_t > quantiles.max_age()) return required_rus_no_csi(distance, lambda_c, rho, lp);
  return required_rus_for_quantile(distance, lambda_c, quantiles.outage_quantile(age_t, z), lp);
}

RequirementModel::RequirementModel(LinkParams link, double rho, std::vector<double> lambda,
                                   const QuantileSource& quantiles)
    : link_(link), rho_(rho), lambda_(std::move(lambda)), quantiles_(&quantiles) {
  link_.validate();
  check_rho(rho);
  if (std::abs(quantiles.rho() - rho) > 1e-12) throw ParameterError("quantile source rho does not match");
  for (double l : lambda_) {
    if (!(l >= 1.0)) throw ParameterError("interference coefficients must be >= 1");
  }
}

int RequirementModel::no_csi(double distance, int channel) const {
  return required_rus_no_csi(distance, lambda_.at(static_cast<std::size_t>(channel)), rho_, link_);
}

int RequirementModel::with_csi(double distance, int channel, int age_t, double z) const {
  return required_rus_with_csi(distance, lambda_.at(static_cast<std::size_t>(channel)), rho_, age_t, z, link_,
                               *quantiles_);
}

}  // namespace urllc
