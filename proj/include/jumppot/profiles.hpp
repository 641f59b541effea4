#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "jumppot/error.hpp"
#include "jumppot/quadrature.hpp"

namespace jumppot {

// Positive function on (0, inf), equal to 1 on [1, inf), with declared
// weak-scaling exponents:
//   c_L (r/s)^lower <= phi(r)/phi(s) <= c_U (r/s)^upper,  0 < s <= r <= 1.
struct ScalingProfile {
  std::function<double(double)> eval;
  double lower_index = 0.0;
  double upper_index = 0.0;
  double comparison_lo = 1.0;
  double comparison_hi = 1.0;
  std::string name;
  // Set by the power-log constructors: r^beta (log(1+1/r)/log 2)^log_power.
  bool power_log_family = false;
  double log_power = 0.0;

  double operator()(double r) const { return r >= 1.0 ? 1.0 : eval(r); }
};

// Slowly varying factor l with
//   c(e)^{-1} (r/s)^{-(e ^ b1)} <= l(r)/l(s) <= c(e) (r/s)^{e ^ b2}.
struct SlowFactor {
  std::function<double(double)> eval;
  double beta1_cap = 0.0;
  double beta2_cap = 0.0;
  std::function<double(double)> epsilon_constant;  // e -> c(e) >= 1
  std::string name;
  bool slowly_varying = false;  // known to vary slowly at zero

  double operator()(double r) const { return r >= 1.0 ? 1.0 : eval(r); }
};

struct BoundaryTriple {
  ScalingProfile phi1;
  ScalingProfile phi2;
  SlowFactor ell;
  double beta1 = 0.0;
  double beta2 = 0.0;

  // phi0 = phi1 * ell, with the indices and constants it inherits for a given e > 0.
  ScalingProfile phi0(double eps) const {
    require(eps > 0.0, "phi0: eps must be positive");
    const double c = ell.epsilon_constant(eps);
    ScalingProfile p;
    auto f1 = phi1;
    auto l = ell;
    p.eval = [f1, l](double r) { return f1(r) * l(r); };
    p.lower_index = std::max(0.0, beta1 - std::min(eps, beta1));
    p.upper_index = phi1.upper_index + std::min(eps, beta2);
    p.comparison_lo = phi1.comparison_lo / c;
    p.comparison_hi = phi1.comparison_hi * c;
    p.name = phi1.name + "*" + ell.name;
    return p;
  }
};

namespace detail {

inline double log_factor(double r, double k) {
  if (k == 0.0) return 1.0;
  return std::pow(std::log1p(1.0 / r) / std::log(2.0), k);
}

// inf over 0 < s <= r <= 1 of h(r)/h(s) for h(r) = r^e L(r)^k with
// L(r) = log(1+1/r)/log 2.  h is unimodal on (0,1] with h(1) = 1, so the
// infimum is 1/max h.  The maximiser solves k = e (1+r) log(1+1/r).
inline double log_factor_lower_constant(double k, double e) {
  if (k == 0.0) return 1.0;
  auto g = [&](double r) { return e * (1.0 + r) * std::log1p(1.0 / r) - k; };
  if (g(1.0) >= 0.0) return 1.0;  // h increasing up to 1
  double lo = 1e-300, hi = 1.0;
  if (g(lo) < 0.0) return 0.0;  // e too small to dominate the log
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double rs = std::sqrt(lo * hi);
  const double h = std::pow(rs, e) * log_factor(rs, k);
  return 1.0 / h;
}

}  // namespace detail

// r -> (r^1)^beta * (log(1+1/(r^1))/log 2)^log_power.  The log factor is
// decreasing, so c_U = 1; c_L is the worst ratio over the default grid
// (ratios down to 2^-30).  Use relax_lower_index for a certified c_L(e).
inline ScalingProfile make_power_log_profile(double beta, double log_power,
                                             bool slow_factor_only = false) {
  if (beta < 0.0 || log_power < 0.0)
    throw invalid_parameter("make_power_log_profile: beta and log_power must be >= 0");
  if (log_power > 0.0 && beta == 0.0 && !slow_factor_only)
    throw invalid_parameter(
        "make_power_log_profile: a log factor with beta = 0 is only allowed as a slow factor");
  ScalingProfile p;
  p.eval = [beta, log_power](double r) {
    const double m = std::min(r, 1.0);
    return std::pow(m, beta) * detail::log_factor(m, log_power);
  };
  p.lower_index = beta;
  p.upper_index = beta;
  p.comparison_hi = 1.0;
  p.comparison_lo = log_power > 0.0 ? detail::log_factor(1.0, log_power) /
                                          detail::log_factor(std::ldexp(1.0, -30), log_power)
                                    : 1.0;
  p.name = "power_log(" + std::to_string(beta) + "," + std::to_string(log_power) + ")";
  p.power_log_family = true;
  p.log_power = log_power;
  return p;
}

// Same profile with lower index beta - eps and the certified constant
// c_L(eps) = inf h(r)/h(s), valid for every 0 < s <= r <= 1.
inline ScalingProfile relax_lower_index(double beta, double log_power, double eps) {
  require(eps > 0.0 && eps <= beta, "relax_lower_index: need 0 < eps <= beta");
  auto p = make_power_log_profile(beta, log_power);
  p.lower_index = beta - eps;
  p.comparison_lo = detail::log_factor_lower_constant(log_power, eps);
  return p;
}

inline ScalingProfile make_constant_profile() {
  ScalingProfile p;
  p.eval = [](double) { return 1.0; };
  p.name = "constant";
  p.power_log_family = true;
  return p;
}

inline SlowFactor make_trivial_slow_factor() {
  SlowFactor l;
  l.eval = [](double) { return 1.0; };
  l.epsilon_constant = [](double) { return 1.0; };
  l.name = "one";
  l.slowly_varying = true;
  return l;
}

// l(r) = log(e/(r^1)).  For e' = e ^ beta1_cap the sharp constant is
// max(1, e^{e'-1}/e').
inline SlowFactor make_log_e_slow_factor(double beta1_cap, double beta2_cap) {
  require(beta1_cap > 0.0, "make_log_e_slow_factor: beta1_cap must be positive");
  SlowFactor l;
  l.eval = [](double r) { return 1.0 - std::log(std::min(r, 1.0)); };
  l.beta1_cap = beta1_cap;
  l.beta2_cap = beta2_cap;
  l.epsilon_constant = [beta1_cap](double e) {
    const double ee = std::min(e, beta1_cap);
    return std::max(1.0, std::exp(ee - 1.0) / ee);
  };
  l.name = "log(e/r)";
  l.slowly_varying = true;
  return l;
}

// l(r) = (log(1+1/(r^1))/log 2)^k.
inline SlowFactor make_log_slow_factor(double k, double beta1_cap, double beta2_cap) {
  require(k >= 0.0, "make_log_slow_factor: k must be >= 0");
  require(k == 0.0 || beta1_cap > 0.0, "make_log_slow_factor: beta1_cap must be positive");
  SlowFactor l;
  l.eval = [k](double r) { return detail::log_factor(std::min(r, 1.0), k); };
  l.beta1_cap = beta1_cap;
  l.beta2_cap = beta2_cap;
  l.epsilon_constant = [k, beta1_cap](double e) {
    const double c = detail::log_factor_lower_constant(k, std::min(e, beta1_cap));
    return c > 0.0 ? std::max(1.0, 1.0 / c) : std::numeric_limits<double>::infinity();
  };
  l.name = "log^" + std::to_string(k);
  l.slowly_varying = true;
  return l;
}

struct ScalingPairResult {
  double r = 0.0, s = 0.0;
  double ratio = 0.0;
  double lower_bound = 0.0, upper_bound = 0.0;
  bool pass = false;
};

struct ScalingReport {
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();  // >= 1 on pass
  std::vector<ScalingPairResult> violations;
  std::size_t checked = 0;
};

// All ordered pairs s <= r from {2^-k : 0 <= k <= 30}.  A finite grid can
// only falsify the inequality, never certify it.
inline std::vector<std::pair<double, double>> default_scaling_grid(int kmax = 30) {
  std::vector<std::pair<double, double>> g;
  for (int i = 0; i <= kmax; ++i)
    for (int j = i; j <= kmax; ++j) g.emplace_back(std::ldexp(1.0, -i), std::ldexp(1.0, -j));
  return g;
}

namespace detail {
inline void record_pair(ScalingReport& rep, double r, double s, double ratio, double lo,
                        double hi) {
  constexpr double slack = 1e-12;
  const double margin = std::min(ratio / lo, hi / ratio);
  rep.worst_margin = std::min(rep.worst_margin, margin);
  ++rep.checked;
  if (ratio < lo * (1.0 - slack) || ratio > hi * (1.0 + slack)) {
    rep.pass = false;
    rep.violations.push_back({r, s, ratio, lo, hi, false});
  }
}
}  // namespace detail

inline ScalingReport validate_scaling(const ScalingProfile& p,
                                      const std::vector<std::pair<double, double>>& grid) {
  if (grid.empty()) throw invalid_parameter("validate_scaling: empty grid");
  ScalingReport rep;
  for (auto [r, s] : grid) {
    if (!(s > 0.0 && s <= r && r <= 1.0))
      throw invalid_parameter("validate_scaling: grid pairs must satisfy 0 < s <= r <= 1");
    const double q = r / s;
    detail::record_pair(rep, r, s, p(r) / p(s), p.comparison_lo * std::pow(q, p.lower_index),
                        p.comparison_hi * std::pow(q, p.upper_index));
  }
  return rep;
}

inline ScalingReport validate_scaling(const ScalingProfile& p) {
  return validate_scaling(p, default_scaling_grid());
}

inline ScalingReport validate_slow_factor(const SlowFactor& l, const std::vector<double>& eps_grid,
                                          const std::vector<std::pair<double, double>>& grid) {
  if (grid.empty() || eps_grid.empty()) throw invalid_parameter("validate_slow_factor: empty grid");
  ScalingReport rep;
  for (double e : eps_grid) {
    const double c = l.epsilon_constant(e);
    for (auto [r, s] : grid) {
      if (!(s > 0.0 && s <= r && r <= 1.0))
        throw invalid_parameter("validate_slow_factor: grid pairs must satisfy 0 < s <= r <= 1");
      const double q = r / s;
      detail::record_pair(rep, r, s, l(r) / l(s), std::pow(q, -std::min(e, l.beta1_cap)) / c,
                          c * std::pow(q, std::min(e, l.beta2_cap)));
    }
  }
  return rep;
}

// Green-envelope integral int_{t^1}^2 u^{2a-2p-1} phi1(u) phi2(u) du.
// [1,2] is done in closed form, [t^1,1] on a log scale.
inline double upsilon(double t, double alpha, double p, const ScalingProfile& phi1,
                      const ScalingProfile& phi2, double rel_tol = 1e-8) {
  require(t > 0.0, "upsilon: t must be positive");
  require(alpha > 0.0 && alpha < 2.0, "upsilon: alpha must lie in (0,2)");
  const double k = 2.0 * alpha - 2.0 * p - 1.0;
  const double top = (std::abs(k + 1.0) < 1e-15) ? std::log(2.0)
                                                 : (std::pow(2.0, k + 1.0) - 1.0) / (k + 1.0);
  if (t >= 1.0) return top;
  auto f = [&](double v) {
    const double u = std::exp(v);
    return std::exp((k + 1.0) * v) * phi1(u) * phi2(u);
  };
  const auto r = quad::gauss_kronrod(f, std::log(t), 0.0, rel_tol, 1e-14);
  return top + r.value;
}

// Closed form that upsilon is comparable to in the two explicit regimes.
inline double upsilon_closed_form_constant() { return 1.0; }
inline double upsilon_closed_form_power(double t, double alpha, double p,
                                        const ScalingProfile& phi1, const ScalingProfile& phi2) {
  const double m = std::min(t, 1.0);
  return std::pow(m, 2.0 * alpha - 2.0 * p) * phi1(m) * phi2(m);
}

enum class UpsilonRegime { constant, power, intermediate };

inline const char* to_string(UpsilonRegime r) {
  switch (r) {
    case UpsilonRegime::constant: return "constant";
    case UpsilonRegime::power: return "power";
    default: return "intermediate";
  }
}

// The upper end p = alpha + beta1 is accepted so that the boundary case of
// the trichotomy can be classified.
inline UpsilonRegime upsilon_regime(double alpha, double p, double beta1, double beta2,
                                    double beta1_up, double beta2_up) {
  const double lo = std::max(alpha - 1.0, 0.0);
  if (!(p >= lo && p > 0.0 && p <= alpha + beta1))
    throw invalid_parameter("upsilon_regime: p outside [(alpha-1)_+, alpha+beta1]");
  if (p < alpha + 0.5 * (beta1 + beta2)) return UpsilonRegime::constant;
  if (p > alpha + 0.5 * (beta1_up + beta2_up)) return UpsilonRegime::power;
  return UpsilonRegime::intermediate;
}

struct PresetTriple {
  BoundaryTriple triple;
  double b = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
};

// Profiles of the subordinate killed gamma-stable process with a beta-stable subordinator.
inline PresetTriple preset_gamma_beta(double gamma, double beta) {
  if (!(gamma > 0.0 && gamma <= 2.0)) throw invalid_parameter("preset_gamma_beta: gamma in (0,2]");
  if (!(beta > 0.0 && beta < 1.0)) throw invalid_parameter("preset_gamma_beta: beta in (0,1)");
  const double alpha = gamma * beta;
  if (alpha >= 2.0) throw invalid_parameter("preset_gamma_beta: alpha = gamma*beta must be < 2");
  PresetTriple out;
  out.gamma = gamma;
  out.beta = beta;
  out.alpha = alpha;
  const bool full = gamma == 2.0;
  out.b = (full || beta < 0.5) ? gamma / 2.0 : gamma - alpha;

  BoundaryTriple& t = out.triple;
  t.phi1 = make_power_log_profile(out.b, 0.0);
  t.beta1 = out.b;
  if (full) {
    t.phi2 = make_power_log_profile(1.0, 0.0);
    t.beta2 = 1.0;
  } else if (beta < 0.5) {
    t.phi2 = make_power_log_profile(gamma / 2.0 - alpha, 0.0);
    t.beta2 = gamma / 2.0 - alpha;
  } else {
    t.phi2 = make_constant_profile();
    t.beta2 = 0.0;
  }
  if (!full && beta == 0.5)
    t.ell = make_log_e_slow_factor(t.beta1, t.beta2);
  else
    t.ell = make_trivial_slow_factor();
  t.ell.beta1_cap = t.beta1;
  t.ell.beta2_cap = t.beta2;
  return out;
}

}  // namespace jumppot
