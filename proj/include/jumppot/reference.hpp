#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "jumppot/error.hpp"
#include "jumppot/geometry.hpp"
#include "jumppot/profiles.hpp"
#include "jumppot/quadrature.hpp"
#include "jumppot/special.hpp"

namespace jumppot {

// Dirichlet eigendata of the disk of radius R: zeros j_{n,k} of J_n and the
// mode weights c_n / (pi R^2 J_{n+1}(j)^2) with c_0 = 1, c_n = 2 (cos and sin
// modes combined).
struct DiskEigenData {
  struct Mode {
    int n = 0;
    int k = 0;
    double zero = 0.0;
    double norm = 0.0;
  };
  double R = 1.0;
  int n_ang = 60;
  int n_rad = 60;
  std::vector<Mode> modes;
  double t0 = 0.0;  // series tail below 1e-10 for t >= t0

  static constexpr char kMagic[8] = {'J', 'P', 'D', 'I', 'S', 'K', 'E', 'V'};
  static constexpr std::uint32_t kVersion = 1;

  static DiskEigenData compute(double R, int n_ang = 60, int n_rad = 60) {
    require(R > 0.0 && n_ang >= 0 && n_rad >= 1, "DiskEigenData: bad truncation");
    DiskEigenData e;
    e.R = R;
    e.n_ang = n_ang;
    e.n_rad = n_rad;
    for (int n = 0; n <= n_ang; ++n) {
      std::vector<double> zeros;
      boost::math::cyl_bessel_j_zero(double(n), 1, n_rad, std::back_inserter(zeros));
      for (int k = 1; k <= n_rad; ++k) {
        const double j = zeros[k - 1];
        const double jn1 = boost::math::cyl_bessel_j(n + 1, j);
        e.modes.push_back({n, k, j, (n == 0 ? 1.0 : 2.0) / (pi * R * R * jn1 * jn1)});
      }
    }
    e.set_t0();
    return e;
  }

  // Smallest omitted eigenvalue bounds the tail by roughly
  // (#modes) * max|phi|^2 * exp(-lambda_omit t); solve for 1e-10.
  void set_t0() {
    const double j_ang = boost::math::cyl_bessel_j_zero(double(n_ang + 1), 1);
    const double j_rad = boost::math::cyl_bessel_j_zero(0.0, n_rad + 1);
    const double lam = std::pow(std::min(j_ang, j_rad) / R, 2);
    const double scale = 4.0 * (n_ang + 1.0) * (n_rad + 1.0) * lam / (pi * R * R);
    t0 = std::log(scale / 1e-10) / lam;
  }

  static std::string cache_name(double R, int n_ang, int n_rad) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "disk_eigen_R%.6g_%dx%d.bin", R, n_ang, n_rad);
    return buf;
  }

  void save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw io_error("DiskEigenData::save: cannot open " + file.string());
    out.write(kMagic, 8);
    put_u32(out, kVersion);
    put_f64(out, R);
    put_u32(out, static_cast<std::uint32_t>(n_ang));
    put_u32(out, static_cast<std::uint32_t>(n_rad));
    put_u64(out, modes.size());
    for (const auto& m : modes) {
      put_f64(out, m.n);
      put_f64(out, m.k);
      put_f64(out, m.zero);
      put_f64(out, m.norm);
    }
    if (!out) throw io_error("DiskEigenData::save: write failed for " + file.string());
  }

  static DiskEigenData load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("DiskEigenData::load: cannot open " + file.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
      throw io_error("DiskEigenData::load: bad header in " + file.string());
    if (get_u32(in) != kVersion) throw io_error("DiskEigenData::load: unsupported version");
    DiskEigenData e;
    e.R = get_f64(in);
    e.n_ang = static_cast<int>(get_u32(in));
    e.n_rad = static_cast<int>(get_u32(in));
    const auto count = get_u64(in);
    if (count != static_cast<std::uint64_t>(e.n_ang + 1) * e.n_rad)
      throw io_error("DiskEigenData::load: record count mismatch");
    e.modes.resize(count);
    for (auto& m : e.modes) {
      m.n = static_cast<int>(get_f64(in));
      m.k = static_cast<int>(get_f64(in));
      m.zero = get_f64(in);
      m.norm = get_f64(in);
    }
    if (!in) throw io_error("DiskEigenData::load: truncated file " + file.string());
    e.set_t0();
    return e;
  }

  // Loads from dir if a matching file exists, otherwise computes and writes it.
  static DiskEigenData load_or_compute(const std::filesystem::path& dir, double R, int n_ang = 60,
                                       int n_rad = 60) {
    const auto file = dir / cache_name(R, n_ang, n_rad);
    if (std::filesystem::exists(file)) {
      auto e = load(file);
      if (e.R == R && e.n_ang == n_ang && e.n_rad == n_rad) return e;
    }
    auto e = compute(R, n_ang, n_rad);
    std::filesystem::create_directories(dir);
    e.save(file);
    return e;
  }

  // w_{nk}(x,y) = norm J_n(j r1/R) J_n(j r2/R) cos(n dtheta); q(t) = sum w e^{-lambda t}.
  std::vector<double> pair_weights(double r1, double r2, double dtheta) const {
    std::vector<double> w(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const auto& m = modes[i];
      w[i] = m.norm * boost::math::cyl_bessel_j(m.n, m.zero * r1 / R) *
             boost::math::cyl_bessel_j(m.n, m.zero * r2 / R) * std::cos(m.n * dtheta);
    }
    return w;
  }
  double lambda(std::size_t i) const { return std::pow(modes[i].zero / R, 2); }

 private:
  template <class T>
  static void put_le(std::ostream& out, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    out.write(reinterpret_cast<const char*>(b), sizeof(T));
  }
  template <class T>
  static T get_le(std::istream& in) {
    unsigned char b[sizeof(T)] = {};
    in.read(reinterpret_cast<char*>(b), sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
  static void put_f64(std::ostream& o, double v) { put_le(o, v); }
  static void put_u32(std::ostream& o, std::uint32_t v) { put_le(o, v); }
  static void put_u64(std::ostream& o, std::uint64_t v) { put_le(o, v); }
  static double get_f64(std::istream& i) { return get_le<double>(i); }
  static std::uint32_t get_u32(std::istream& i) { return get_le<std::uint32_t>(i); }
  static std::uint64_t get_u64(std::istream& i) { return get_le<std::uint64_t>(i); }
};

// Dirichlet heat kernel of Delta (not Delta/2) on the half-space or a disk.
struct HeatKernelOracle {
  DomainC11 domain;
  std::shared_ptr<const DiskEigenData> eigen;  // disk only

  static HeatKernelOracle half_space(int d) { return {make_half_space(d), nullptr}; }
  static HeatKernelOracle disk(double R, std::shared_ptr<const DiskEigenData> data = nullptr) {
    if (!data) data = std::make_shared<DiskEigenData>(DiskEigenData::compute(R));
    require(data->R == R, "HeatKernelOracle::disk: eigendata radius mismatch");
    return {make_ball(Point::Zero(2), R), std::move(data)};
  }
  double radius() const { return std::get<Ball>(domain.shape).radius; }
};

namespace detail {

inline void check_disk(const HeatKernelOracle& o) {
  if (!o.domain.is_ball() || o.domain.d != 2 || !o.eigen)
    throw unsupported_error("oracle: only the half-space and the 2-d disk are supported");
}

struct PolarPair {
  double r1, r2, dtheta;
};
inline PolarPair polar_pair(const Point& x, const Point& y) {
  return {x.norm(), y.norm(), std::atan2(y(1), y(0)) - std::atan2(x(1), x(0))};
}

// Distance to the image of y in the circle |z| = R, scaled so that
// d*^2 = |x-y|^2 + (R^2-|x|^2)(R^2-|y|^2)/R^2.
inline double disk_image_dist2(const Point& x, const Point& y, double R) {
  return (x - y).squaredNorm() + (R * R - x.squaredNorm()) * (R * R - y.squaredNorm()) / (R * R);
}

inline double disk_image_kernel(double t, const Point& x, const Point& y, double R) {
  const double a = (x - y).squaredNorm();
  const double b = disk_image_dist2(x, y, R);
  return std::exp(-a / (4.0 * t) - std::log(4.0 * pi * t)) * -std::expm1(-(b - a) / (4.0 * t));
}

inline double halfspace_heat(int d, double t, const Point& x, const Point& y) {
  const double a = (x - y).squaredNorm();
  const double gap = 4.0 * x(d - 1) * y(d - 1);  // |x - ybar|^2 - |x - y|^2
  return std::exp(-a / (4.0 * t) - 0.5 * d * std::log(4.0 * pi * t)) *
         -std::expm1(-gap / (4.0 * t));
}

}  // namespace detail

inline double heat_kernel(const HeatKernelOracle& o, double t, const Point& x, const Point& y) {
  require(t > 0.0, "heat_kernel: t must be positive");
  if (!o.domain.contains(x) || !o.domain.contains(y))
    throw domain_error("heat_kernel: points must lie in the domain");
  if (o.domain.is_half_space()) return detail::halfspace_heat(o.domain.d, t, x, y);
  detail::check_disk(o);
  if (t < o.eigen->t0) return detail::disk_image_kernel(t, x, y, o.radius());
  const auto p = detail::polar_pair(x, y);
  const auto w = o.eigen->pair_weights(p.r1, p.r2, p.dtheta);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::exp(-o.eigen->lambda(i) * t);
  return std::max(s, 0.0);
}

// P(BM with generator Delta started at height h stays positive up to t).
inline double survival_halfspace(double t, double h) {
  require(t > 0.0 && h > 0.0, "survival_halfspace: t, h > 0");
  return std::erf(h / (2.0 * std::sqrt(t)));
}

struct SkbmOracle {
  double beta = 0.5;
  double alpha = 1.0;
  HeatKernelOracle heat;
  double c_beta = 0.0;

  SkbmOracle(double beta_, HeatKernelOracle heat_)
      : beta(beta_), alpha(2.0 * beta_), heat(std::move(heat_)), c_beta(c_beta_levy(beta_)) {}
  int d() const { return heat.domain.d; }
  double sin_factor() const { return std::sin(pi * beta) / pi; }
};

namespace detail {

// C(k) = (1/2pi) sum_n eps_n cos(n th) I_n(k r1) I_n(k r2) K_n(k R)/I_n(k R):
// the regular part of the disk resolvent (mu - Delta)^{-1}, mu = k^2.  Terms
// are built from T_0 (scaled Bessel functions) by ratio recurrences.
inline double disk_resolvent_correction(double k, double r1, double r2, double dtheta, double R) {
  if (k <= 0.0) return 0.0;
  const double a = k * r1, b = k * r2, c = k * R;
  const double T0 = bessel::i0e(a) * bessel::i0e(b) * bessel::k0e(c) / bessel::i0e(c) *
                    std::exp(a + b - 2.0 * c);
  if (a == 0.0 || b == 0.0 || T0 == 0.0) return T0 / (2.0 * pi);
  const double q0 = r1 * r2 / (R * R);
  int N = static_cast<int>(std::min(4.0e5, 60.0 / std::max(-std::log(q0), 1e-12) + 8.0 * std::sqrt(c) + 50.0));
  std::vector<double> ra, rb, rc;
  for (int attempt = 0; attempt < 4; ++attempt, N *= 2) {
    bessel::i_ratios(a, N, ra);
    bessel::i_ratios(b, N, rb);
    bessel::i_ratios(c, N, rc);
    double kap = bessel::k1e(c) / bessel::k0e(c);  // K_1/K_0
    double T = T0, sum = T0;
    const double cr = std::cos(dtheta), sr = std::sin(dtheta);
    double cn = 1.0, sn = 0.0;  // cos(n th), sin(n th) by rotation
    bool done = false;
    for (int n = 1; n <= N; ++n) {
      if (n > 1) kap = 1.0 / kap + 2.0 * (n - 1) / c;
      const double ratio = ra[n] * rb[n] * kap / rc[n];
      T *= ratio;
      const double cn1 = cn * cr - sn * sr;
      sn = sn * cr + cn * sr;
      cn = cn1;
      sum += 2.0 * cn * T;
      if (ratio < 1.0 && 2.0 * T / (1.0 - ratio) < 1e-17 * std::abs(T0)) {
        done = true;
        break;
      }
    }
    if (done) return sum / (2.0 * pi);
  }
  throw quadrature_failure("disk_resolvent_correction: series did not converge", 0.0, 0.0);
}

// (sin pi b/pi) int_0^inf 2 k^{power} C(k) dk with the natural decay scale.
inline quad::Result disk_resolvent_integral(double power, double r1, double r2, double dtheta,
                                            double R, double tol) {
  const double scale = 2.0 * R - r1 - r2;
  auto f = [&](double v) {
    const double k = v / scale;
    if (k == 0.0 || !std::isfinite(k)) return 0.0;
    return 2.0 * std::pow(k, power) * disk_resolvent_correction(k, r1, r2, dtheta, R) / scale;
  };
  return quad::exp_sinh(f, 0.0, tol, 1e-300);
}

inline double free_green_2d(double beta, double r) {
  return std::sin(pi * beta) / pi / (2.0 * pi) * std::pow(2.0, 1.0 - 2.0 * beta) *
         std::pow(tgamma(1.0 - beta), 2) * std::pow(r, 2.0 * beta - 2.0);
}

}  // namespace detail

// J(x,y) = c_beta int_0^inf q(t,x,y) t^{-1-beta} dt.
inline double skbm_jump_kernel(const SkbmOracle& o, const Point& x, const Point& y,
                               double tol = 1e-10) {
  const double dist = (x - y).norm();
  if (dist == 0.0) throw domain_error("skbm_jump_kernel: x = y");
  if (!o.heat.domain.contains(x) || !o.heat.domain.contains(y))
    throw domain_error("skbm_jump_kernel: points must lie in the domain");
  const int d = o.d();
  const double cda = c_d_minus_alpha(d, o.alpha);
  if (o.heat.domain.is_half_space()) {
    Point yb = y;
    yb(d - 1) = -yb(d - 1);
    const double ratio = dist / (x - yb).norm();
    return cda * std::pow(dist, -(d + o.alpha)) * -std::expm1((d + o.alpha) * std::log(ratio));
  }
  detail::check_disk(o.heat);
  const auto p = detail::polar_pair(x, y);
  const auto corr =
      detail::disk_resolvent_integral(2.0 * o.beta + 1.0, p.r1, p.r2, p.dtheta, o.heat.radius(), tol);
  return cda * std::pow(dist, -(2.0 + o.alpha)) - o.sin_factor() * corr.value;
}

// Same quantity by direct t-quadrature (half-space) or the small-t image
// kernel plus the eigen-series with incomplete Gamma tails (disk).
namespace detail {

// int_0^inf f(t) dt for a half-space heat-kernel integrand, in w = log t and
// split at the time scales |x-y|^2, x_d y_d and |x-y*|^2.
template <class F>
double halfspace_time_integral(F f, const Point& x, const Point& y, double tol) {
  const int d = static_cast<int>(x.size());
  std::vector<double> cuts{(x - y).squaredNorm(), x(d - 1) * y(d - 1)};
  Point yb = y;
  yb(d - 1) = -yb(d - 1);
  cuts.push_back((x - yb).squaredNorm());
  std::sort(cuts.begin(), cuts.end());
  auto fw = [&](double w) {
    if (!std::isfinite(w)) return 0.0;
    const double t = std::exp(w);
    if (t == 0.0 || !std::isfinite(t)) return 0.0;
    const double v = f(t);
    return v == 0.0 ? 0.0 : v * t;
  };
  double a = std::log(cuts.front());
  auto r = quad::exp_sinh([&](double u) { return fw(a - u); }, 0.0, tol, 1e-300, false);
  double total = r.value, err = r.error;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double c = std::log(cuts[k]);
    if (c <= a + 1e-12) continue;
    r = quad::tanh_sinh(fw, a, c, tol, 1e-300, false);
    total += r.value;
    err += r.error;
    a = c;
  }
  r = quad::exp_sinh([&](double u) { return fw(a + u); }, 0.0, tol, 1e-300, false);
  total += r.value;
  err += r.error;
  if (!(err <= tol * std::abs(total)))
    throw quadrature_failure("half-space time integral: no convergence", total, err);
  return total;
}

}  // namespace detail

inline double skbm_jump_kernel_quadrature(const SkbmOracle& o, const Point& x, const Point& y,
                                          double tol = 1e-11) {
  const double beta = o.beta;
  if (o.heat.domain.is_half_space()) {
    auto f = [&](double t) {
      if (t <= 0.0 || !std::isfinite(t)) return 0.0;
      const double q = detail::halfspace_heat(o.d(), t, x, y);
      return q == 0.0 ? 0.0 : q * std::pow(t, -1.0 - beta);
    };
    return o.c_beta * detail::halfspace_time_integral(f, x, y, tol);
  }
  detail::check_disk(o.heat);
  const auto& E = *o.heat.eigen;
  const double R = o.heat.radius();
  auto f = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double q = detail::disk_image_kernel(t, x, y, R);
    return q == 0.0 ? 0.0 : q * std::pow(t, -1.0 - beta);
  };
  const double small = quad::tanh_sinh(f, 0.0, E.t0, tol, 1e-300, false).value;
  const auto p = detail::polar_pair(x, y);
  const auto w = E.pair_weights(p.r1, p.r2, p.dtheta);
  double big = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double lam = E.lambda(i), z = lam * E.t0;
    // lambda^beta Gamma(-beta, z), Gamma(-b,z) = (z^{-b} e^{-z} - Gamma(1-b,z))/b
    const double g = (std::pow(z, -beta) * std::exp(-z) - boost::math::tgamma(1.0 - beta, z)) / beta;
    big += w[i] * std::pow(lam, beta) * g;
  }
  return o.c_beta * (small + big);
}

// kappa(x) = c_beta int_0^inf (1 - P_x(zeta > t)) t^{-1-beta} dt.
inline double skbm_kappa(const SkbmOracle& o, const Point& x, double tol = 1e-10) {
  if (!o.heat.domain.contains(x)) throw domain_error("skbm_kappa: x must lie in the domain");
  const double beta = o.beta;
  if (o.heat.domain.is_half_space()) {
    const double h = x(o.d() - 1);
    auto f = [&](double t) {
      if (t <= 0.0 || !std::isfinite(t)) return 0.0;
      const double q = std::erfc(h / (2.0 * std::sqrt(t)));
      return q == 0.0 ? 0.0 : q * std::pow(t, -1.0 - beta);
    };
    const double s = h * h;
    return o.c_beta * (quad::tanh_sinh(f, 0.0, s, tol, 1e-300).value +
                       quad::exp_sinh(f, s, tol, 1e-300).value);
  }
  detail::check_disk(o.heat);
  // Resolvent form: (sin pi b/pi) int_0^inf 2 k^{2b-1} I0(k r)/I0(k R) dk.
  const double R = o.heat.radius(), r = x.norm();
  const double scale = R - r;
  auto f = [&](double v) {
    const double k = v / scale;
    if (k == 0.0 || !std::isfinite(k)) return 0.0;
    const double ratio = bessel::i0e(k * r) / bessel::i0e(k * R) * std::exp(-k * scale);
    return 2.0 * std::pow(k, 2.0 * beta - 1.0) * ratio / scale;
  };
  return o.sin_factor() * quad::exp_sinh(f, 0.0, tol, 1e-300).value;
}

// G(x,y) = int_0^inf q(s,x,y) s^{beta-1}/Gamma(beta) ds.
inline double skbm_green(const SkbmOracle& o, const Point& x, const Point& y, double tol = 1e-10) {
  const double dist = (x - y).norm();
  if (dist == 0.0) throw domain_error("skbm_green: x = y");
  if (!o.heat.domain.contains(x) || !o.heat.domain.contains(y))
    throw domain_error("skbm_green: points must lie in the domain");
  const int d = o.d();
  if (o.heat.domain.is_half_space()) {
    if (!(d > o.alpha)) throw unsupported_error("skbm_green: half-space needs d > alpha");
    Point yb = y;
    yb(d - 1) = -yb(d - 1);
    const double ratio = dist / (x - yb).norm();
    return halfspace_green_constant(d, o.beta) * std::pow(dist, o.alpha - d) *
           -std::expm1((d - o.alpha) * std::log(ratio));
  }
  detail::check_disk(o.heat);
  const auto p = detail::polar_pair(x, y);
  const auto corr =
      detail::disk_resolvent_integral(1.0 - 2.0 * o.beta, p.r1, p.r2, p.dtheta, o.heat.radius(), tol);
  return detail::free_green_2d(o.beta, dist) - o.sin_factor() * corr.value;
}

inline double skbm_green_quadrature(const SkbmOracle& o, const Point& x, const Point& y,
                                    double tol = 1e-11) {
  const double beta = o.beta;
  const double gb = tgamma(beta);
  if (o.heat.domain.is_half_space()) {
    auto f = [&](double s) {
      if (s <= 0.0 || !std::isfinite(s)) return 0.0;
      const double q = detail::halfspace_heat(o.d(), s, x, y);
      return q == 0.0 ? 0.0 : q * std::pow(s, beta - 1.0) / gb;
    };
    return detail::halfspace_time_integral(f, x, y, tol);
  }
  detail::check_disk(o.heat);
  const auto& E = *o.heat.eigen;
  const double R = o.heat.radius();
  auto f = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double q = detail::disk_image_kernel(s, x, y, R);
    return q == 0.0 ? 0.0 : q * std::pow(s, beta - 1.0) / gb;
  };
  const double small = quad::tanh_sinh(f, 0.0, E.t0, tol, 1e-300, false).value;
  const auto p = detail::polar_pair(x, y);
  const auto w = E.pair_weights(p.r1, p.r2, p.dtheta);
  double big = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double lam = E.lambda(i);
    big += w[i] * std::pow(lam, -beta) * boost::math::tgamma(beta, lam * E.t0) / gb;
  }
  return small + big;
}

// I = int_{B(0,R) cap H} G(x,y) y_d^g dy at x = (0, x_d), d = 2, in polar
// coordinates around x; the left half is mirrored.
inline quad::Result halfspace_green_potential(const SkbmOracle& o, double x_d, double R, double g,
                                              double tol = 1e-10) {
  if (!o.heat.domain.is_half_space() || o.d() != 2)
    throw unsupported_error("halfspace_green_potential: 2-d half-space only");
  require(x_d > 0.0 && x_d < R, "halfspace_green_potential: need 0 < x_d < R");
  const double alpha = o.alpha;
  const double A = halfspace_green_constant(2, o.beta);
  auto ray_integrand = [&](double rho, double s) {
    const double yd = x_d + rho * s;
    if (!(yd > 0.0) || rho <= 0.0) return 0.0;
    const double red = -std::expm1(-(2.0 - alpha) / 2.0 * std::log1p(4.0 * x_d * yd / (rho * rho)));
    return A * std::pow(rho, alpha - 1.0) * red * std::pow(yd, g);
  };
  auto ray = [&](double phi) {
    const double s = std::sin(phi);
    // |x + rho e| = R and, going down, y_d = 0.
    double rmax = -x_d * s + std::sqrt(x_d * x_d * s * s - x_d * x_d + R * R);
    if (s < 0.0) rmax = std::min(rmax, x_d / -s);
    const double a = std::min(10.0 * x_d, rmax);
    double v = quad::tanh_sinh([&](double r) { return ray_integrand(r, s); }, 0.0, a, tol, 1e-300,
                               false)
                   .value;
    if (rmax > a) {
      auto f = [&](double t) {
        const double r = std::exp(t);
        return ray_integrand(r, s) * r;
      };
      v += quad::tanh_sinh(f, std::log(a), std::log(rmax), tol, 1e-300, false).value;
    }
    return v;
  };
  const double phi1 = pi + std::atan(x_d / R);
  quad::Result out;
  for (auto [lo, hi] : {std::pair{0.5 * pi, pi}, std::pair{pi, phi1}, std::pair{phi1, 1.5 * pi}}) {
    const auto r = quad::tanh_sinh(ray, lo, hi, 10.0 * tol, 1e-300, false);
    out.value += 2.0 * r.value;
    out.error += 2.0 * r.error;
  }
  return out;
}

// ((d^/|x-y|) ^ 1)^p ((dv/|x-y|) ^ 1)^p Upsilon(dv/|x-y|) |x-y|^{alpha-d}.
inline double green_envelope(const Point& x, const Point& y, double p, double alpha,
                             const ScalingProfile& phi1, const ScalingProfile& phi2,
                             const DomainC11& D) {
  const double dist = (x - y).norm();
  if (dist == 0.0) throw domain_error("green_envelope: x = y");
  const double dx = dist_to_boundary(D, x), dy = dist_to_boundary(D, y);
  const double lo = std::min(dx, dy) / dist, hi = std::max(dx, dy) / dist;
  return std::pow(std::min(lo, 1.0), p) * std::pow(std::min(hi, 1.0), p) *
         upsilon(hi, alpha, p, phi1, phi2) * std::pow(dist, alpha - D.d);
}

// Density of T_t for the 1/2-stable subordinator: t (4 pi s^3)^{-1/2} e^{-t^2/(4s)}.
inline double half_stable_density(double t, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 0.0;
  return std::exp(std::log(t) - 0.5 * std::log(4.0 * pi) - 1.5 * std::log(s) - t * t / (4.0 * s));
}

// p^Y(t,x,y) = int q(s,x,y) eta_t(s) ds for beta = 1/2.
inline double skbm_transition_half(const HeatKernelOracle& heat, double t, const Point& x,
                                   const Point& y, double tol = 1e-9) {
  auto f = [&](double s) {
    if (s <= 0.0 || !std::isfinite(s)) return 0.0;
    const double q = heat_kernel(heat, s, x, y);
    return q == 0.0 ? 0.0 : q * half_stable_density(t, s);
  };
  const double split = std::max((x - y).squaredNorm(), t * t) / 4.0;
  return quad::tanh_sinh(f, 0.0, split, tol, 1e-300, false).value +
         quad::exp_sinh(f, split, tol, 1e-300, false).value;
}

struct EnvelopeCheck {
  double fitted_constant = 0.0;  // sup of p^Y / (t^{-d/alpha} ^ t|x-y|^{-d-alpha})
  double half_sample_constant = 0.0;
  bool pass = false;
};

struct TransitionSample {
  double t;
  Point x, y;
};

// beta = 1/2 only (closed-form subordinator density).  Pass if the sup is
// finite and moves by less than a factor 1.5 between half and full sample.
inline EnvelopeCheck heat_kernel_envelope_check(const HeatKernelOracle& heat,
                                                const std::vector<TransitionSample>& samples) {
  require(samples.size() >= 2, "heat_kernel_envelope_check: need samples");
  const int d = heat.domain.d;
  const double alpha = 1.0;
  EnvelopeCheck out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double dist = (s.x - s.y).norm();
    double env = std::pow(s.t, -d / alpha);
    if (dist > 0.0) env = std::min(env, s.t * std::pow(dist, -d - alpha));
    const double r = skbm_transition_half(heat, s.t, s.x, s.y) / env;
    out.fitted_constant = std::max(out.fitted_constant, r);
    if (i < samples.size() / 2) out.half_sample_constant = out.fitted_constant;
  }
  out.pass = std::isfinite(out.fitted_constant) && out.half_sample_constant > 0.0 &&
             out.fitted_constant <= 1.5 * out.half_sample_constant;
  return out;
}

}  // namespace jumppot
