#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "jumppot/error.hpp"

// Inner integrals of nested rules pass strict = false and report their
// error upward instead of throwing.
// Thin wrappers over Boost.Math quadrature returning (value, error) pairs
// and turning non-convergence into quadrature_failure.
namespace jumppot::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

// Boost reports the absolute difference between the last two levels; the
// stopping test is relative to the L1 norm, so that is what we check too.
inline void check(const Result& r, double l1, double tol, double abs_floor, const char* who) {
  if (!std::isfinite(r.value) || r.error > 100.0 * (tol * std::max(l1, std::abs(r.value)) + abs_floor))
    throw quadrature_failure(std::string(who) + ": no convergence", r.value, r.error);
}

// Double-exponential rule on a finite or half-infinite interval.  The
// integrand may take (x) or (x, xc) where xc is the signed distance to the
// nearer endpoint (Boost convention), which keeps endpoint singularities
// accurate.
template <class F>
Result tanh_sinh(F f, double a, double b, double tol = 1e-10, double abs_floor = 1e-15,
                 bool strict = true, std::size_t max_refinements = 15) {
  boost::math::quadrature::tanh_sinh<double> rule(max_refinements);
  Result r;
  double l1 = 0.0;
  r.value = rule.integrate(f, a, b, tol, &r.error, &l1);
  if (strict) check(r, l1, tol, abs_floor, "tanh_sinh");
  return r;
}

// Integral over [a, infinity) for integrands decaying at least algebraically.
template <class F>
Result exp_sinh(F f, double a, double tol = 1e-10, double abs_floor = 1e-15, bool strict = true) {
  boost::math::quadrature::exp_sinh<double> rule;
  Result r;
  double l1 = 0.0;
  r.value = rule.integrate([&](double t) { return f(a + t); }, 0.0,
                           std::numeric_limits<double>::infinity(), tol, &r.error, &l1);
  if (strict) check(r, l1, tol, abs_floor, "exp_sinh");
  return r;
}

// Adaptive 61-point Gauss-Kronrod for smooth integrands.
template <class F>
Result gauss_kronrod(F f, double a, double b, double tol = 1e-10, double abs_floor = 1e-14,
                     unsigned max_depth = 20) {
  Result r;
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol,
                                                                          &r.error, &l1);
  if (!std::isfinite(r.value) || r.error > tol * std::abs(r.value) + abs_floor)
    throw quadrature_failure("gauss_kronrod: no convergence", r.value, r.error);
  return r;
}

}  // namespace jumppot::quad
