#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "jumppot/error.hpp"
#include "jumppot/geometry.hpp"
#include "jumppot/profiles.hpp"

namespace jumppot {

// Symmetric coefficient a(x,y) with C12^{-1} <= a <= C12 and a Hoelder bound.
struct CoefficientA {
  std::function<double(const Point&, const Point&)> eval;
  double bound = 1.0;            // C12
  double holder_exponent = 1.0;  // theta0'
  double holder_constant = 0.0;  // C13
  std::string name;

  double operator()(const Point& x, const Point& y) const { return eval(x, y); }
};

inline CoefficientA constant_coefficient(double c) {
  require(c > 0.0, "constant_coefficient: c must be positive");
  CoefficientA a;
  a.eval = [c](const Point&, const Point&) { return c; };
  a.bound = std::max(c, 1.0 / c);
  a.holder_exponent = 1.0;
  a.holder_constant = 0.0;
  a.name = "constant";
  return a;
}

// a(x,y) = 1.5 + 0.5 cos(x_1 + y_1): symmetric, in [1,2], Lipschitz with constant 0.5.
inline CoefficientA cosine_coefficient() {
  CoefficientA a;
  a.eval = [](const Point& x, const Point& y) { return 1.5 + 0.5 * std::cos(x(0) + y(0)); };
  a.bound = 2.0;
  a.holder_exponent = 1.0;
  a.holder_constant = 0.5;
  a.name = "cosine";
  return a;
}

struct JumpKernelSpec {
  double alpha = 1.0;
  DomainC11 domain;
  BoundaryTriple triple;
  CoefficientA coeff;
};

struct KernelRatios {
  double r1, r2, r3;
};

// r1 = (d ^ d')/|x-y|, r2 = (d v d')/|x-y|, r3 = (d ^ d')/((d v d') ^ |x-y|).
inline KernelRatios kernel_ratios(double dx, double dy, double dist) {
  const double lo = std::min(dx, dy), hi = std::max(dx, dy);
  return {lo / dist, hi / dist, lo / std::min(hi, dist)};
}

inline double eval_B(const JumpKernelSpec& k, const Point& x, const Point& y) {
  if (!k.domain.contains(x) || !k.domain.contains(y))
    throw domain_error("eval_B: points must lie in the domain");
  const double a = k.coeff(x, y);
  const double dist = (x - y).norm();
  if (dist == 0.0) return a;
  const auto r = kernel_ratios(dist_to_boundary(k.domain, x), dist_to_boundary(k.domain, y), dist);
  return a * k.triple.phi1(r.r1) * k.triple.phi2(r.r2) * k.triple.ell(r.r3);
}

inline double eval_J(const JumpKernelSpec& k, const Point& x, const Point& y) {
  const double dist = (x - y).norm();
  if (dist == 0.0) throw domain_error("eval_J: x = y");
  return eval_B(k, x, y) * std::pow(dist, -(k.domain.d + k.alpha));
}

enum class Perturbation { none, plus, minus };

struct KillingSpec {
  double alpha = 1.0;
  double c9 = 0.0;
  double c8 = 0.0;
  double eta0 = 1.0;
  std::function<double(const Point&)> base_B_diag = [](const Point&) { return 1.0; };
};

// kappa = C9 B(x,x) delta^{-alpha} +/- C8 delta^{-alpha+eta0} for delta < 1, and
// the delta = 1 value capped at C8 beyond.
inline double eval_kappa(const KillingSpec& k, const Point& x, double delta, Perturbation mode) {
  require(delta > 0.0, "eval_kappa: delta must be positive");
  const double b = k.base_B_diag(x);
  auto formula = [&](double dl) {
    double v = k.c9 * b * std::pow(dl, -k.alpha);
    const double pert = k.c8 * std::pow(dl, -k.alpha + k.eta0);
    if (mode == Perturbation::plus) v += pert;
    if (mode == Perturbation::minus) v -= pert;
    return std::max(v, 0.0);
  };
  if (delta < 1.0) return formula(delta);
  return std::min(formula(1.0), k.c8);
}

inline double eval_kappa(const KillingSpec& k, double delta, Perturbation mode) {
  return eval_kappa(k, Point(), delta, mode);
}

// Profile F0 on H_{-1} = {z_d > -1}.  When horizontally isotropic, `iso`
// evaluates F0 from (|z~|, z_d, z_d + 1); the last argument is passed
// separately so callers can keep it accurate near z_d = -1.
struct BoundaryProfileF {
  std::function<double(const Point&)> f0;
  std::function<double(double, double, double)> iso;
  bool horizontally_isotropic = false;
  bool symmetrized = false;
  std::string name;

  double operator()(const Point& z) const { return f0(z); }
  double radial(int d, double zt, double zd, double zd1) const {
    if (iso) return iso(zt, zd, zd1);
    Point z = Point::Zero(d);
    z(0) = zt;
    z(d - 1) = zd;
    return f0(z);
  }
};

inline void check_h_minus1(const Point& z) {
  if (!(z(z.size() - 1) > -1.0)) throw domain_error("profile evaluated outside H_{-1}");
}

inline BoundaryProfileF symmetrize_F0(const BoundaryProfileF& F) {
  if (F.symmetrized) return F;
  BoundaryProfileF S;
  auto f0 = F.f0;
  S.f0 = [f0](const Point& z) {
    check_h_minus1(z);
    const double zd1 = 1.0 + z(z.size() - 1);
    return 0.5 * (f0(z) + f0(Point(-z / zd1)));
  };
  if (F.iso) {
    auto iso = F.iso;
    S.iso = [iso](double zt, double zd, double zd1) {
      if (!(zd1 > 0.0)) throw domain_error("profile evaluated outside H_{-1}");
      return 0.5 * (iso(zt, zd, zd1) + iso(zt / zd1, -zd / zd1, 1.0 / zd1));
    };
  }
  S.horizontally_isotropic = F.horizontally_isotropic;
  S.symmetrized = true;
  S.name = "sym(" + F.name + ")";
  return S;
}

namespace detail {
// 1 - (|z|/|(z~, z_d+2)|)^{d+alpha} via |(z~,z_d+2)|^2 = |z|^2 + 4(z_d+1).
inline double skbm_profile(int d, double alpha, double z2, double zd1) {
  if (!(zd1 > 0.0)) throw domain_error("profile evaluated outside H_{-1}");
  if (z2 == 0.0) return 1.0;
  const double e = 4.0 * zd1 / z2;
  return -std::expm1(-0.5 * (d + alpha) * std::log1p(e));
}
}  // namespace detail

inline double f0_skbm_halfspace(int d, double beta, const Point& z) {
  require(d >= 2 && beta > 0.0 && beta < 1.0, "f0_skbm_halfspace: d >= 2, beta in (0,1)");
  if (z.size() != d) throw invalid_parameter("f0_skbm_halfspace: dimension mismatch");
  const double zd = z(d - 1);
  return detail::skbm_profile(d, 2.0 * beta, z.squaredNorm(), 1.0 + zd);
}

// Profile of the subordinate killed Brownian motion on the half-space,
// already symmetric under z -> -z/(1+z_d).
inline BoundaryProfileF skbm_profile_F(int d, double beta) {
  require(d >= 2 && beta > 0.0 && beta < 1.0, "skbm_profile_F: d >= 2, beta in (0,1)");
  BoundaryProfileF F;
  F.f0 = [d, beta](const Point& z) { return f0_skbm_halfspace(d, beta, z); };
  const double alpha = 2.0 * beta;
  F.iso = [d, alpha](double zt, double zd, double zd1) {
    return detail::skbm_profile(d, alpha, zt * zt + zd * zd, zd1);
  };
  F.horizontally_isotropic = true;
  F.symmetrized = true;
  F.name = "skbm(d=" + std::to_string(d) + ",beta=" + std::to_string(beta) + ")";
  return F;
}

inline double censored_profile(const std::function<double(double)>& theta, const Point& z) {
  check_h_minus1(z);
  const auto d = z.size();
  const double z2 = z.squaredNorm();
  const double w2 = z2 + 4.0 * (1.0 + z(d - 1));
  return theta(std::sqrt(z2 / w2));
}

inline BoundaryProfileF constant_profile_F(double c = 1.0) {
  BoundaryProfileF F;
  F.f0 = [c](const Point& z) {
    check_h_minus1(z);
    return c;
  };
  F.iso = [c](double, double, double) { return c; };
  F.horizontally_isotropic = true;
  F.symmetrized = true;
  F.name = "constant";
  return F;
}

// |B(x,y) - B(x,x) F0((y-x)/x_d)| with B(x,y) = |x-y|^{d+alpha} J(x,y) and
// x, y in frame coordinates of the frame's boundary point.
inline double b5_residual(const std::function<double(const Point&, const Point&)>& oracleJ,
                          double diagB, const BoundaryProfileF& F0, double alpha,
                          const DomainC11& D, const LocalFrame& frame, const Point& x,
                          const Point& y, double nu = 0.5) {
  const double r = D.R_hat / 8.0;
  const EnuRegion E{nu, r};
  if (!region_membership(D, frame, x, E).inside || !region_membership(D, frame, y, E).inside)
    throw invalid_parameter("b5_residual: points must lie in E_nu(R/8)");
  const Point xl = frame.to_local(x);
  const Point yl = frame.to_local(y);
  const double dist = (x - y).norm();
  if (dist == 0.0) return std::abs(diagB - diagB * F0(Point(Point::Zero(x.size()))));
  const double B = std::pow(dist, D.d + alpha) * oracleJ(x, y);
  const double xd = xl(xl.size() - 1);
  return std::abs(B - diagB * F0(Point((yl - xl) / xd)));
}

}  // namespace jumppot
