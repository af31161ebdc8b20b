#include "urllc/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "urllc/errors.hpp"

namespace urllc {
namespace {

constexpr double kSeriesTail = 1e-15;

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw ParameterError("gamma must lie in [0, 1), got " + std::to_string(gamma));
  }
}

void check_nonnegative(double v, const char* name) {
  if (!(v >= 0.0)) {
    throw ParameterError(std::string(name) + " must be non-negative, got " + std::to_string(v));
  }
}

// Poisson(nu) pmf at k, in linear scale; may underflow to zero.
double poisson_pmf(long k, double nu) {
  return std::exp(-nu + static_cast<double>(k) * std::log(nu) - std::lgamma(static_cast<double>(k) + 1.0));
}

// sum_j Pois(j; mu) * P(j + 1, nu), with P the regularized lower incomplete
// gamma function. This is the CDF of a noncentral chi-square with two
// degrees of freedom and noncentrality 2*mu, evaluated at 2*nu.
//
// Summation starts at the Poisson mode and walks outwards. P(k, nu) is
// carried by the recurrences P(k+1) = P(k) - d_k and P(k-1) = P(k) + d_{k-1}
// where d_k is the Poisson(nu) pmf at k.
double poisson_mixture_gamma_cdf(double mu, double nu) {
  if (nu <= 0.0) return 0.0;
  if (mu <= 0.0) return -std::expm1(-nu);

  const long mode = static_cast<long>(std::floor(mu));
  const double w_mode = poisson_pmf(mode, mu);
  const double p_mode = boost::math::gamma_p(static_cast<double>(mode) + 1.0, nu);  // P(mode+1, nu)
  const double d_mode = poisson_pmf(mode, nu);

  double sum = w_mode * p_mode;

  // Upward: j = mode+1, mode+2, ...
  {
    double w = w_mode;
    double p = p_mode;      // P(j+1) for the previous j
    double d = d_mode;      // d_{j} for the previous j
    for (long j = mode + 1;; ++j) {
      w *= mu / static_cast<double>(j);
      d = d > 0.0 ? d * nu / static_cast<double>(j) : poisson_pmf(j, nu);
      p = std::max(0.0, p - d);
      sum += w * p;
      const double r = mu / static_cast<double>(j + 1);
      if (r < 1.0 && w * r / (1.0 - r) < kSeriesTail) break;
      if (p == 0.0 && static_cast<double>(j) > mu) break;
    }
  }

  // Downward: j = mode-1, ..., 0.
  {
    double w = w_mode;
    double p = p_mode;      // P(j+2) for the current j
    double d = d_mode;      // d_{j+1}
    for (long j = mode - 1; j >= 0; --j) {
      w *= static_cast<double>(j + 1) / mu;
      if (j + 1 < mode) {
        d = d > 0.0 ? d * static_cast<double>(j + 2) / nu : poisson_pmf(j + 1, nu);
      }
      p = std::min(1.0, p + d);
      sum += w * p;
      const double r = static_cast<double>(j) / mu;
      if (w * r / (1.0 - r) < kSeriesTail) break;
    }
  }
  return std::min(1.0, std::max(0.0, sum));
}

}  // namespace

FadingCoefficient draw_complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

FadingCoefficient evolve_fading(FadingCoefficient h, double gamma, Rng& rng) {
  check_gamma(gamma);
  const FadingCoefficient xi = draw_complex_gaussian(rng);
  return gamma * h + std::sqrt(1.0 - gamma * gamma) * xi;
}

GmParams gm_params(double gamma, int age_t) {
  check_gamma(gamma);
  if (age_t < 1) {
    throw ParameterError("CSI age must be >= 1 cycle, got " + std::to_string(age_t));
  }
  GmParams p;
  p.gamma = gamma;
  p.age_t = age_t;
  if (gamma == 0.0) {
    p.a = 0.0;
    p.b = 1.0;
  } else {
    const double log_gamma = std::log(gamma);
    p.a = std::exp(static_cast<double>(age_t) * log_gamma);
    p.b = -std::expm1(2.0 * static_cast<double>(age_t) * log_gamma);
  }
  return p;
}

double bessel_i0_scaled(double y) {
  check_nonnegative(y, "Bessel argument");
  if (y <= 50.0) {
    return std::cyl_bessel_i(0.0, y) * std::exp(-y);
  }
  // I0(y) e^{-y} ~ (2 pi y)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8y)^k)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd / (static_cast<double>(k) * 8.0 * y);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * y);
}

double conditional_pdf(double x, double z, const GmParams& params) {
  check_nonnegative(x, "x");
  check_nonnegative(z, "z");
  const double a = params.a;
  const double b = params.b;
  // exp(-x/b - a^2 z/b) I0(2a sqrt(xz)/b) = exp(-(sqrt(x) - a sqrt(z))^2 / b) * I0e(.)
  const double gap = std::sqrt(x) - a * std::sqrt(z);
  const double arg = 2.0 * a * std::sqrt(x * z) / b;
  return std::exp(-gap * gap / b) * bessel_i0_scaled(arg) / b;
}

double conditional_cdf(double x, double z, const GmParams& params) {
  check_nonnegative(x, "x");
  check_nonnegative(z, "z");
  if (std::isinf(x)) return 1.0;
  const double mu = params.a * params.a * z / params.b;
  const double nu = x / params.b;
  return poisson_mixture_gamma_cdf(mu, nu);
}

double inverse_conditional_cdf(double p, double z, const GmParams& params) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("probability must lie in (0, 1), got " + std::to_string(p));
  }
  check_nonnegative(z, "z");

  const double a2z = params.a * params.a * z;
  double lo = 0.0;
  double hi = std::max(8.0, a2z + params.b + 40.0 * params.b);
  int expansions = 0;
  while (conditional_cdf(hi, z, params) < p) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 60) {
      throw NumericError("inverse_conditional_cdf: could not bracket p=" + std::to_string(p));
    }
  }

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (conditional_cdf(mid, z, params) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  const double x = 0.5 * (lo + hi);
  const double residual = std::abs(conditional_cdf(x, z, params) - p);
  if (residual > 1e-9) {
    throw NumericError("inverse_conditional_cdf: residual " + std::to_string(residual) +
                       " exceeds 1e-9 (p=" + std::to_string(p) + ", z=" + std::to_string(z) +
                       ", t=" + std::to_string(params.age_t) + ")");
  }
  return x;
}

double conditional_mean(double z, const GmParams& params) {
  check_nonnegative(z, "z");
  return params.a * params.a * z + params.b;
}

}  // namespace urllc
