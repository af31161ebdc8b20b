#pragma once

#include <complex>
#include <random>

namespace urllc {

using Rng = std::mt19937_64;

// Complex fading coefficient h. Unconditionally each component is N(0, 1/2),
// so |h|^2 is a unit-mean exponential.
using FadingCoefficient = std::complex<double>;

// Parameters of the conditional law of |h_{m+t}|^2 given |h_m|^2 under a
// first-order Gauss-Markov fading process with per-cycle correlation gamma.
struct GmParams {
  double a = 0.0;    // gamma^t
  double b = 1.0;    // 1 - gamma^(2t)
  int age_t = 1;
  double gamma = 0.0;
};

// Draws a zero-mean, unit-variance circularly symmetric complex Gaussian.
FadingCoefficient draw_complex_gaussian(Rng& rng);

// One step of h <- gamma*h + sqrt(1-gamma^2)*xi.
FadingCoefficient evolve_fading(FadingCoefficient h, double gamma, Rng& rng);

GmParams gm_params(double gamma, int age_t);

// exp(-y) * I0(y) for y >= 0; asymptotic expansion for large y.
double bessel_i0_scaled(double y);

// Density of |h_{m+t}|^2 at x given |h_m|^2 = z.
double conditional_pdf(double x, double z, const GmParams& params);

// P[|h_{m+t}|^2 <= x | |h_m|^2 = z], evaluated as a noncentral chi-square
// CDF with two degrees of freedom (Poisson mixture of gamma CDFs). The
// series is truncated once the neglected Poisson mass is below 1e-15.
double conditional_cdf(double x, double z, const GmParams& params);

// Returns x with conditional_cdf(x, z, params) == p, by bisection. Throws
// NumericError if the bracket cannot be established or the final residual
// exceeds 1e-9.
double inverse_conditional_cdf(double p, double z, const GmParams& params);

// E[|h_{m+t}|^2 | |h_m|^2 = z] = a^2 z + b.
double conditional_mean(double z, const GmParams& params);

}  // namespace urllc
