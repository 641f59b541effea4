#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/sobol.hpp>

#include "jumppot/error.hpp"
#include "jumppot/kernels.hpp"
#include "jumppot/parallel.hpp"
#include "jumppot/quadrature.hpp"
#include "jumppot/special.hpp"

namespace jumppot {

class admissibility_error : public invalid_parameter {
 public:
  admissibility_error(const std::string& what, std::vector<std::pair<double, double>> probes)
      : invalid_parameter(what), probes_(std::move(probes)) {}
  const std::vector<std::pair<double, double>>& probes() const { return probes_; }

 private:
  std::vector<std::pair<double, double>> probes_;
};

struct KillingConstantOptions {
  int d = 2;
  double beta0 = 1.0;  // admissible q lie in [(alpha-1)_+, alpha + beta0)
  double tol = 1e-10;
  std::size_t qmc_points = std::size_t{1} << 20;  // non-isotropic F only
  std::uint64_t qmc_seed = 12345;
};

struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

inline void check_q(double alpha, double q, double beta0) {
  require(alpha > 0.0 && alpha < 2.0, "killing_constant: alpha must lie in (0,2)");
  const double lo = std::max(alpha - 1.0, 0.0);
  if (!(q >= lo && q < alpha + beta0))
    throw invalid_parameter("killing_constant: q outside [(alpha-1)_+, alpha+beta0)");
}

// s-integral of (s^q-1)(1-s^{alpha-1-q})(1-s)^{-1-alpha} F(((s-1)u~, s-1)).
// With m = q-alpha+1 >= 0 the product is (1-s^q)(1-s^m)s^{-m}, evaluated in
// log form.  s in (1/2,1) is integrated in u = 1-s; s in (0,1/2) in v = -log s,
// where the integrand decays like exp(-(alpha+beta0-q) v) since F ~ s^beta0.
// Past v = 700 that exponential tail is added in closed form.
template <class Fs>
quad::Result s_integral(double alpha, double q, double beta0, Fs&& F_at, double tol) {
  const double m = q - alpha + 1.0;
  auto term = [&](double u, double s, double ls, double jac_log) -> double {
    if (s <= 0.0 || u <= 0.0) return 0.0;
    const double f = F_at(u, s);
    if (!(f > 0.0)) return 0.0;
    const double a = -std::expm1(q * ls);
    const double b = -std::expm1(m * ls);
    if (a <= 0.0 || b <= 0.0) return 0.0;
    return std::exp(std::log(a) + std::log(b) + std::log(f) - m * ls - (1.0 + alpha) * std::log(u) +
                    jac_log);
  };
  auto near = [&](double u) { return term(u, 1.0 - u, std::log1p(-u), 0.0); };
  auto far = [&](double v) {
    if (!std::isfinite(v)) return 0.0;
    return term(-std::expm1(-v), std::exp(-v), -v, -v);
  };
  const auto r1 = quad::tanh_sinh(near, 0.0, 0.5, tol, 1e-300, false);
  constexpr double v_max = 700.0;
  const auto r2 = quad::tanh_sinh(far, std::log(2.0), v_max, tol, 1e-300, false);
  const double tail = far(v_max) / (alpha + beta0 - q);
  return {r1.value + r2.value + tail, r1.error + r2.error};
}

}  // namespace detail

// C(alpha, q, F): isotropic F uses the radial reduction with weight
// |S^{d-2}| rho^{d-2} (rho^2+1)^{-(d+alpha)/2}; otherwise randomly shifted
// Sobol points over u~ drawn from that weight.
inline ValueWithError killing_constant(double alpha, double q, const BoundaryProfileF& F,
                                       const KillingConstantOptions& opt = {}) {
  detail::check_q(alpha, q, opt.beta0);
  const int d = opt.d;
  require(d >= 2, "killing_constant: d >= 2");
  const double inner_tol = opt.tol * 0.1;
  if (F.horizontally_isotropic) {
    double worst_inner = 0.0;
    auto g = [&](double rho) {
      if (!std::isfinite(rho)) return 0.0;
      const double w = std::pow(rho, d - 2) * std::pow(rho * rho + 1.0, -0.5 * (d + alpha));
      if (w == 0.0) return 0.0;
      auto Fat = [&](double u, double s) { return F.radial(d, u * rho, -u, s); };
      const auto r = detail::s_integral(alpha, q, opt.beta0, Fat, inner_tol);
      worst_inner = std::max(worst_inner, w * r.error);
      return w * r.value;
    };
    const auto outer = quad::tanh_sinh(g, 0.0, std::numeric_limits<double>::infinity(), opt.tol,
                                       1e-300);
    const double omega = sphere_area(d - 2);
    ValueWithError out;
    out.value = omega * outer.value;
    // Inner errors enter through the largest weighted node error; the
    // radial weight has unit-order effective width.
    out.error = omega * (outer.error + 2.0 * worst_inner);
    return out;
  }

  // u~ = Z / sqrt(W), Z ~ N(0, I_{d-1}), W ~ chi^2_{alpha+1}, has density
  // proportional to (|u|^2+1)^{-(d+alpha)/2}; M is its total mass.
  const double nu = alpha + 1.0;
  const double M = std::pow(pi, 0.5 * (d - 1)) * tgamma(0.5 * (1.0 + alpha)) /
                   tgamma(0.5 * (d + alpha));
  const int shifts = 8;
  const std::size_t per_shift = std::max<std::size_t>(opt.qmc_points / shifts, 16);
  std::vector<double> means(shifts, 0.0);
  std::mt19937_64 shift_rng(opt.qmc_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<double>> shift_vecs(shifts, std::vector<double>(d));
  for (auto& v : shift_vecs)
    for (auto& c : v) c = unif(shift_rng);
  boost::math::normal_distribution<double> normal;
  for (int k = 0; k < shifts; ++k) {
    boost::random::sobol gen(static_cast<unsigned>(d));
    std::vector<double> sums(per_shift, 0.0);
    std::vector<std::vector<double>> pts(per_shift, std::vector<double>(d));
    for (std::size_t i = 0; i < per_shift; ++i)
      for (int j = 0; j < d; ++j) {
        double x = static_cast<double>(gen()) / 4294967296.0 + shift_vecs[k][j];
        x -= std::floor(x);
        pts[i][j] = std::clamp(x, 1e-15, 1.0 - 1e-15);
      }
    parallel_for(per_shift, [&](std::size_t i) {
      Point ut(d - 1);
      for (int j = 0; j < d - 1; ++j) ut(j) = boost::math::quantile(normal, pts[i][j]);
      const double W = 2.0 * boost::math::gamma_p_inv(0.5 * nu, pts[i][d - 1]);
      ut /= std::sqrt(W);
      Point z(d);
      // A generic profile sees z only, so 1 + z_d = s is lost once s < 2^-53.
      auto Fat = [&](double u, double s) {
        z.head(d - 1) = -u * ut;
        z(d - 1) = s < 0.5 ? s - 1.0 : -u;
        if (!(z(d - 1) > -1.0)) return 0.0;
        return F(z);
      };
      sums[i] = detail::s_integral(alpha, q, opt.beta0, Fat, inner_tol).value;
    });
    double acc = 0.0;
    for (double v : sums) acc += v;
    means[k] = M * acc / static_cast<double>(per_shift);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= shifts;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (shifts - 1);
  return {mean, std::sqrt(var / shifts)};
}

struct KillingConstantEntry {
  double q = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct KillingConstantTable {
  double alpha = 1.0;
  double beta0 = 1.0;
  BoundaryProfileF F;
  std::vector<KillingConstantEntry> entries;  // sorted by q

  bool strictly_increasing() const {
    for (std::size_t i = 1; i < entries.size(); ++i)
      if (!(entries[i].value > entries[i - 1].value)) return false;
    return true;
  }
};

// Entries are computed independently (in parallel) and stored by q index.
inline KillingConstantTable killing_constant_table(double alpha, std::vector<double> q_grid,
                                                   const BoundaryProfileF& F,
                                                   const KillingConstantOptions& opt = {}) {
  std::sort(q_grid.begin(), q_grid.end());
  KillingConstantTable t;
  t.alpha = alpha;
  t.beta0 = opt.beta0;
  t.F = symmetrize_F0(F);
  t.entries.resize(q_grid.size());
  parallel_for(q_grid.size(), [&](std::size_t i) {
    const auto r = killing_constant(alpha, q_grid[i], t.F, opt);
    t.entries[i] = {q_grid[i], r.value, r.error};
  });
  return t;
}

struct SolvePResult {
  double p = 0.0;
  double C_at_p = 0.0;
  int iterations = 0;
  std::vector<std::pair<double, double>> probes;  // (q, C) near the upper end
};

// Unique p with C(alpha, p, F) = C9, by bisection on the monotone map q -> C.
inline SolvePResult solve_p(double alpha, double C9, const BoundaryProfileF& F,
                            const KillingConstantOptions& opt = {}, double tol = 1e-8) {
  if (!(C9 > 0.0)) throw invalid_parameter("solve_p: C9 must be positive (C9 = 0 gives p = alpha-1)");
  const auto Fs = symmetrize_F0(F);
  const double top = alpha + opt.beta0;
  SolvePResult res;
  double sup = 0.0;
  for (double e : {0.1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    const double q = top - e;
    if (q <= std::max(alpha - 1.0, 0.0)) continue;
    const double c = killing_constant(alpha, q, Fs, opt).value;
    res.probes.emplace_back(q, c);
    sup = std::max(sup, c);
  }
  if (C9 >= sup)
    throw admissibility_error("solve_p: C9 is not below the observed supremum of C(alpha,.,F)",
                              res.probes);
  double lo = std::max(alpha - 1.0, 0.0) + 1e-9;
  double hi = top - 1e-6;
  auto C = [&](double q) { return killing_constant(alpha, q, Fs, opt).value; };
  double mid = 0.5 * (lo + hi), cm = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    cm = C(mid);
    res.iterations = it + 1;
    if (std::abs(cm - C9) <= tol * std::max(C9, 1.0)) break;
    (cm < C9 ? lo : hi) = mid;
  }
  res.p = mid;
  res.C_at_p = cm;
  return res;
}

namespace detail {
inline void check_isotropic(const BoundaryProfileF& F, const char* who) {
  if (!F.horizontally_isotropic)
    throw unsupported_error(std::string(who) + ": needs a horizontally isotropic profile");
}
}  // namespace detail

// Truncated generator I(q, delta) = int_{H, |x-y|>delta} (y_d^q - x_d^q) F((y-x)/x_d)
// |x-y|^{-d-alpha} dy at x = (0, x_d).  The z_d-slices below and above x are
// paired in w = |z_d - 1| so the leading singular parts cancel pointwise;
// the symmetry of F is not used.
inline ValueWithError pv_generator_halfspace(double alpha, const BoundaryProfileF& F, double q,
                                             double x_d, double delta, int d = 2,
                                             double tol = 1e-11) {
  detail::check_isotropic(F, "pv_generator_halfspace");
  require(alpha > 0.0 && alpha < 2.0, "pv_generator_halfspace: alpha in (0,2)");
  require(x_d > 0.0, "pv_generator_halfspace: x_d must be positive");
  if (!(delta > 0.0 && delta < 0.5 * std::min(x_d, 1.0)))
    throw invalid_parameter("pv_generator_halfspace: need 0 < delta < (x_d ^ 1)/2");
  const double rel = delta / x_d;
  double worst_inner = 0.0;
  auto radial = [&](double rho) {
    if (!std::isfinite(rho)) return 0.0;
    const double w = std::pow(rho, d - 2) * std::pow(rho * rho + 1.0, -0.5 * (d + alpha));
    if (w == 0.0) return 0.0;
    const double eps = rel / std::sqrt(1.0 + rho * rho);
    // w in [eps, 1]: below (z_d = 1-w) and above (z_d = 1+w).
    auto near = [&](double u, double uc) -> double {
      const double below_zd1 = (u <= 0.5 * (1.0 + eps)) ? 1.0 - u : uc;  // = z_d
      double below = 0.0;
      if (below_zd1 > 0.0) {
        const double lb = (u <= 0.5) ? std::log1p(-u) : std::log(below_zd1);
        below = std::expm1(q * lb) * F.radial(d, u * rho, -u, below_zd1);
      }
      const double above = std::expm1(q * std::log1p(u)) * F.radial(d, u * rho, u, 1.0 + u);
      return (below + above) * std::pow(u, -1.0 - alpha);
    };
    const auto a = quad::tanh_sinh(near, eps, 1.0, tol * 0.1, 1e-300, false);
    auto far = [&](double t) {
      return std::expm1(q * std::log1p(t)) * F.radial(d, t * rho, t, 1.0 + t) *
             std::pow(t, -1.0 - alpha);
    };
    const auto b = quad::exp_sinh(far, 1.0, tol * 0.1, 1e-300, false);
    worst_inner = std::max(worst_inner, w * (a.error + b.error));
    return w * (a.value + b.value);
  };
  const auto outer = quad::tanh_sinh(radial, 0.0, std::numeric_limits<double>::infinity(), tol,
                                     1e-300);
  const double scale = std::pow(x_d, q - alpha) * sphere_area(d - 2);
  ValueWithError out;
  out.value = scale * outer.value;
  out.error = scale * (outer.error + 2.0 * worst_inner);
  return out;
}

// p.v. int_H (f(y) - f(x)) F((y-x)/x_d) |x-y|^{-2-alpha} dy in polar
// coordinates around x = (x1, x_d), pairing opposite rays; d = 2 only.
// f must be smooth along rays (no cut-offs).
template <class Fn>
ValueWithError pv_generator_polar(double alpha, const BoundaryProfileF& F, Fn&& f, double x1,
                                  double x_d, double cutoff, double tol = 1e-9) {
  detail::check_isotropic(F, "pv_generator_polar");
  require(cutoff > 0.0 && cutoff < 0.5 * x_d, "pv_generator_polar: need 0 < cutoff < x_d/2");
  const double fx = f(x1, x_d);
  auto ray = [&](double rho, double c, double s) -> double {
    const double y1 = x1 + rho * c, y2 = x_d + rho * s;
    if (!(y2 > 0.0)) return 0.0;
    const double zt = std::abs(rho * c) / x_d, zd = rho * s / x_d;
    return (f(y1, y2) - fx) * F.radial(2, zt, zd, y2 / x_d);
  };
  auto angular = [&](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    // phi in (0, pi): ray phi goes up, ray phi+pi goes down and stops at x_d/s.
    const double stop = (s > 0.0) ? x_d / s : std::numeric_limits<double>::infinity();
    auto both = [&](double rho) {
      return (ray(rho, c, s) + ray(rho, -c, -s)) * std::pow(rho, -1.0 - alpha);
    };
    auto up = [&](double rho) { return ray(rho, c, s) * std::pow(rho, -1.0 - alpha); };
    double v = 0.0;
    if (std::isfinite(stop) && stop > cutoff) {
      v += quad::tanh_sinh(both, cutoff, stop, tol * 0.1, 1e-300, false).value;
      v += quad::exp_sinh(up, stop, tol * 0.1, 1e-300, false).value;
    } else {
      v += quad::exp_sinh(both, cutoff, tol * 0.1, 1e-300, false).value;
    }
    return v;
  };
  const auto r = quad::tanh_sinh(angular, 0.0, pi, tol, 1e-300);
  return {r.value, r.error};
}

// Half-space kernel of the form B(x,y) = c F((y-x)/x_d).
struct HalfSpaceFKernel {
  double alpha = 1.0;
  double c = 1.0;
  BoundaryProfileF F;
  double beta0 = 1.0;
};

struct BarrierResult {
  double ratio = 0.0;   // L h(x) x_d^{alpha-q}
  double limit = 0.0;   // c C(alpha, q, F)
  double tail = 0.0;    // c x_d^{alpha-q} int_{H \ U(3r)} y_d^q F |x-y|^{-2-alpha} dy
  double error = 0.0;
};

// Generator of h = 1_{U(3r)} y_d^q at x in U(r/4) on the half-space (d = 2):
// the p.v. part over all of H is C(alpha,q,F) x_d^{q-alpha}, minus the exact
// contribution of H \ U(3r), where h vanishes.
inline BarrierResult barrier_ratio(const HalfSpaceFKernel& k, double q, double r, const Point& x,
                                   double tol = 1e-10) {
  detail::check_isotropic(k.F, "barrier_ratio");
  if (x.size() != 2) throw unsupported_error("barrier_ratio: only d = 2 is implemented");
  require(q > 0.0, "barrier_ratio: q must be positive");
  const double x1 = x(0), xd = x(1);
  if (!(std::abs(x1) < r / 4.0 && xd > 0.0 && xd < r / 4.0))
    throw invalid_parameter("barrier_ratio: x must lie in U(r/4)");
  KillingConstantOptions opt;
  opt.d = 2;
  opt.beta0 = k.beta0;
  opt.tol = tol;
  const auto C = killing_constant(k.alpha, q, k.F, opt);
  const double a = 3.0 * r;
  const double alpha = k.alpha;
  auto integrand = [&](double t, double y2) {  // t = |y1 - x1|
    const double dist2 = t * t + (y2 - xd) * (y2 - xd);
    return std::pow(y2, q) * k.F.radial(2, t / xd, (y2 - xd) / xd, y2 / xd) *
           std::pow(dist2, -0.5 * (2.0 + alpha));
  };
  // Top: y2 > a, all y1 (two half-lines in t).
  auto top = [&](double y2) {
    return 2.0 *
           quad::exp_sinh([&](double t) { return integrand(t, y2); }, 0.0, tol, 1e-300, false).value;
  };
  const double T = quad::exp_sinh(top, a, tol).value;
  // Sides: 0 < y2 < a and y1 beyond +-a.
  auto side = [&](double edge) {
    auto g = [&](double y2) {
      return quad::exp_sinh([&](double t) { return integrand(t, y2); }, edge, tol, 1e-300, false)
          .value;
    };
    return quad::tanh_sinh(g, 0.0, a, tol, 1e-300).value;
  };
  const double S = side(a - x1) + side(a + x1);
  BarrierResult out;
  out.limit = k.c * C.value;
  out.tail = k.c * std::pow(xd, alpha - q) * (T + S);
  out.ratio = out.limit - out.tail;
  out.error = k.c * C.error;
  return out;
}

}  // namespace jumppot
