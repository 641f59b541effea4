#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "jumppot/error.hpp"

namespace jumppot {

inline constexpr double pi = std::numbers::pi;

inline double tgamma(double x) { return boost::math::tgamma(x); }

// Normalizing constant of the fractional Laplacian -(-Delta)^{alpha/2}:
// c_{d,-alpha} = 2^alpha pi^{-d/2} Gamma((d+alpha)/2) / |Gamma(-alpha/2)|.
inline double c_d_minus_alpha(int d, double alpha) {
  require(d >= 1 && alpha > 0.0 && alpha < 2.0, "c_d_minus_alpha: need d >= 1, alpha in (0,2)");
  return std::pow(2.0, alpha) * std::pow(pi, -0.5 * d) * tgamma(0.5 * (d + alpha)) /
         std::abs(tgamma(-0.5 * alpha));
}

// Levy density constant of the beta-stable subordinator with Laplace exponent lambda^beta.
inline double c_beta_levy(double beta) {
  require(beta > 0.0 && beta < 1.0, "c_beta_levy: beta must lie in (0,1)");
  return beta / tgamma(1.0 - beta);
}

// Constant in the half-space Green function of the subordinate killed BM,
// G = A (|x-y|^{alpha-d} - |x-ybar|^{alpha-d}).
inline double halfspace_green_constant(int d, double beta) {
  require(d > 2.0 * beta, "halfspace_green_constant: needs d > alpha");
  return std::pow(4.0, -beta) * std::pow(pi, -0.5 * d) * tgamma(0.5 * d - beta) / tgamma(beta);
}

// Surface area of the unit sphere S^{k} in R^{k+1}.  sphere_area(0) = 2.
inline double sphere_area(int k) {
  return 2.0 * std::pow(pi, 0.5 * (k + 1)) / tgamma(0.5 * (k + 1));
}

namespace bessel {

namespace detail {
inline void silence_gsl() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}
}  // namespace detail

// Exponentially scaled modified Bessel functions.
inline double i0e(double x) {
  detail::silence_gsl();
  return gsl_sf_bessel_I0_scaled(x);
}
inline double k0e(double x) {
  detail::silence_gsl();
  return gsl_sf_bessel_K0_scaled(x);
}
inline double k1e(double x) {
  detail::silence_gsl();
  return gsl_sf_bessel_K1_scaled(x);
}

// rho[n] = I_n(x)/I_{n-1}(x) for n = 1..n_max by backward recurrence
// rho_n = 1/(2n/x + rho_{n+1}), seeded with the uniform asymptotic ratio.
// rho[0] is unused.
inline void i_ratios(double x, int n_max, std::vector<double>& rho) {
  rho.assign(n_max + 2, 0.0);
  if (x <= 0.0) return;
  const int start = n_max + 40 + static_cast<int>(x > 1.0 ? std::sqrt(x) : 0.0);
  double r = x / ((start + 1) + std::sqrt(double(start + 1) * (start + 1) + x * x));
  for (int n = start; n >= 1; --n) {
    r = 1.0 / (2.0 * n / x + r);
    if (n <= n_max + 1) rho[n] = r;
  }
}

}  // namespace bessel

}  // namespace jumppot
