#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "jumppot/error.hpp"
#include "jumppot/geometry.hpp"
#include "jumppot/parallel.hpp"
#include "jumppot/special.hpp"

namespace jumppot {

// Reproducible random stream identified by (seed, stream_id).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x6a707074u};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on the open interval (0,1).
  double uniform() {
    double u;
    do {
      u = std::generate_canonical<double, 53>(engine_);
    } while (u <= 0.0 || u >= 1.0);
    return u;
  }
  double normal() { return normal_(engine_); }
  double exponential() { return -std::log(uniform()); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_, stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Increment of the beta-stable subordinator (Laplace exponent lambda^beta)
// over dt, by Kanter's representation.
inline double sample_subordinator_increment(double beta, double dt, RngStream& rng) {
  require(beta > 0.0 && beta < 1.0, "sample_subordinator_increment: beta must lie in (0,1)");
  require(dt > 0.0, "sample_subordinator_increment: dt must be positive");
  const double u = pi * rng.uniform();
  const double e = rng.exponential();
  const double a = std::pow(std::sin(beta * u), beta / (1.0 - beta)) * std::sin((1.0 - beta) * u) /
                   std::pow(std::sin(u), 1.0 / (1.0 - beta));
  const double s = std::pow(a / e, (1.0 - beta) / beta);
  return std::pow(dt, 1.0 / beta) * s;
}

struct KilledStep {
  Point y;
  bool killed = false;
};

// Exact transition of Brownian motion with generator Delta killed on leaving
// {x_d > 0}, over operational time dt.
inline KilledStep step_killed_bm_halfspace(const Point& x, double dt, RngStream& rng) {
  require(dt > 0.0, "step_killed_bm_halfspace: dt must be positive");
  const auto d = x.size();
  if (!(x(d - 1) > 0.0)) throw domain_error("step_killed_bm_halfspace: x must lie in the half-space");
  KilledStep out;
  out.y.resize(d);
  const double sd = std::sqrt(2.0 * dt);
  for (Eigen::Index i = 0; i < d; ++i) out.y(i) = x(i) + sd * rng.normal();
  const double yd = out.y(d - 1);
  if (yd <= 0.0) {
    out.killed = true;
    return out;
  }
  const double expo = x(d - 1) * yd / dt;
  if (expo < 40.0 && rng.uniform() < std::exp(-expo)) out.killed = true;
  return out;
}

struct SimulationOptions {
  int substeps = 1;  // Brownian sub-steps per operational increment (ball only)
};

namespace detail {

// One killed-BM increment inside a ball: endpoint test plus the tangent
// half-space bridge at the nearest boundary point of the midpoint.
inline KilledStep step_killed_bm_ball(const Ball& B, const Point& x, double dt, int substeps,
                                      RngStream& rng) {
  KilledStep out;
  Point cur = x;
  const double h = dt / substeps;
  const double sd = std::sqrt(2.0 * h);
  const auto d = x.size();
  for (int k = 0; k < substeps; ++k) {
    Point nxt(d);
    for (Eigen::Index i = 0; i < d; ++i) nxt(i) = cur(i) + sd * rng.normal();
    const double rn = (nxt - B.center).norm();
    if (rn >= B.radius) {
      out.y = nxt;
      out.killed = true;
      return out;
    }
    const Point mid = 0.5 * (cur + nxt) - B.center;
    const double mid_dist = B.radius - mid.norm();
    if (mid_dist < 3.0 * sd && mid.norm() > 0.0) {
      const Point n = mid / mid.norm();  // outward normal at the nearest boundary point
      const double ha = B.radius - (cur - B.center).dot(n);
      const double hb = B.radius - (nxt - B.center).dot(n);
      if (ha <= 0.0 || hb <= 0.0 || rng.uniform() < std::exp(-ha * hb / h)) {
        out.y = nxt;
        out.killed = true;
        return out;
      }
    }
    cur = nxt;
  }
  out.y = cur;
  return out;
}

}  // namespace detail

// One step of the subordinate killed Brownian motion over real time dt.
inline KilledStep step_skbm(const DomainC11& D, double beta, const Point& x, double dt,
                            RngStream& rng, const SimulationOptions& opt = {}) {
  const double s = sample_subordinator_increment(beta, dt, rng);
  if (D.is_half_space()) {
    if (!std::isfinite(s)) return {x, true};
    return step_killed_bm_halfspace(x, s, rng);
  }
  if (const auto* B = std::get_if<Ball>(&D.shape)) {
    if (!std::isfinite(s)) return {x, true};
    return detail::step_killed_bm_ball(*B, x, s, std::max(1, opt.substeps), rng);
  }
  throw unsupported_error("simulate_skbm: only half-space and ball domains are supported");
}

struct PathRecord {
  std::vector<double> times;
  std::vector<Point> positions;
  std::optional<double> death_time;  // empty: survived the grid
  std::optional<std::size_t> exit_index;
};

// Path on the grid k*dt, k = 0..n_steps; stops at death.
inline PathRecord simulate_skbm(const DomainC11& D, double beta, const Point& x0, double dt,
                                std::size_t n_steps, RngStream& rng,
                                const SimulationOptions& opt = {}) {
  require(dt > 0.0, "simulate_skbm: dt must be positive");
  if (!D.is_half_space() && !D.is_ball())
    throw unsupported_error("simulate_skbm: only half-space and ball domains are supported");
  if (!D.contains(x0)) throw domain_error("simulate_skbm: x0 must lie in the domain");
  PathRecord p;
  p.times.push_back(0.0);
  p.positions.push_back(x0);
  Point x = x0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    auto st = step_skbm(D, beta, x, dt, rng, opt);
    if (st.killed) {
      p.death_time = k * dt;
      break;
    }
    x = st.y;
    p.times.push_back(k * dt);
    p.positions.push_back(x);
  }
  return p;
}

using PointPredicate = std::function<bool(const Point&)>;

// {|x~|_inf < a, 0 < x_d < h} in half-space coordinates.
inline PointPredicate halfspace_box(double a, double h) {
  require(a > 0.0 && h > 0.0, "halfspace_box: sides must be positive");
  return [a, h](const Point& x) {
    const auto d = x.size();
    for (Eigen::Index i = 0; i + 1 < d; ++i)
      if (std::abs(x(i)) >= a) return false;
    return x(d - 1) > 0.0 && x(d - 1) < h;
  };
}

struct TargetSpec {
  enum class Kind { anywhere, region, empty } kind = Kind::anywhere;
  PointPredicate region;

  static TargetSpec anywhere() { return {}; }
  static TargetSpec empty() { return {Kind::empty, {}}; }
  static TargetSpec in(PointPredicate p) { return {Kind::region, std::move(p)}; }
  bool hit(const Point& y) const {
    if (kind == Kind::anywhere) return true;
    if (kind == Kind::empty) return false;
    return region(y);
  }
};

struct ExitOptions {
  double dt = 0.002;
  double horizon = 20.0;
  int substeps = 1;
  std::uint64_t seed = 1;
  std::uint64_t stream_offset = 0;
  unsigned workers = 0;  // 0: worker_count()
};

struct ExitEstimate {
  double probability = 0.0;  // at the finest grid
  double standard_error = 0.0;
  double p_half = 0.0;      // exits detected on every 2nd grid point
  double p_quarter = 0.0;   // every 4th
  double order = 1.0;       // fitted convergence order in dt
  double extrapolated = 0.0;
  double extrapolated_se = 0.0;
  std::size_t n_paths = 0;
};

// Fraction of paths whose first grid-detected exit from the box lands in the
// target, dying first counting as a miss.  The same paths are read on three
// nested grids (dt, 2dt, 4dt) and Richardson-extrapolated in dt.
inline ExitEstimate exit_probability_estimate(const DomainC11& D, double beta, const Point& x0,
                                              const PointPredicate& box, const TargetSpec& target,
                                              std::size_t n_paths, const ExitOptions& opt = {}) {
  if (n_paths == 0) throw invalid_parameter("exit_probability_estimate: zero paths");
  require(opt.dt > 0.0 && opt.horizon > 0.0, "exit_probability_estimate: dt, horizon > 0");
  if (!D.contains(x0)) throw domain_error("exit_probability_estimate: x0 must lie in the domain");
  const auto n_steps = static_cast<std::size_t>(std::ceil(opt.horizon / opt.dt));
  std::vector<std::uint8_t> hits(n_paths, 0);  // bit 0: fine, 1: half, 2: quarter
  SimulationOptions so{opt.substeps};
  parallel_for(
      n_paths,
      [&](std::size_t i) {
        RngStream rng(opt.seed, opt.stream_offset + i);
        Point x = x0;
        std::uint8_t done = 0, res = 0;
        if (!box(x)) {
          if (target.hit(x)) res = 7;
          done = 7;
        }
        for (std::size_t k = 1; k <= n_steps && done != 7; ++k) {
          auto st = step_skbm(D, beta, x, opt.dt, rng, so);
          if (st.killed) break;
          x = st.y;
          if (box(x)) continue;
          const bool in_target = target.hit(x);
          for (int lvl = 0; lvl < 3; ++lvl) {
            const std::uint8_t bit = static_cast<std::uint8_t>(1u << lvl);
            if ((done & bit) || k % (std::size_t(1) << lvl) != 0) continue;
            done |= bit;
            if (in_target) res |= bit;
          }
        }
        hits[i] = res;
      },
      opt.workers ? opt.workers : worker_count());

  double s1 = 0, s2 = 0, s4 = 0;
  for (auto h : hits) {
    s1 += h & 1;
    s2 += (h >> 1) & 1;
    s4 += (h >> 2) & 1;
  }
  const double n = static_cast<double>(n_paths);
  ExitEstimate e;
  e.n_paths = n_paths;
  e.probability = s1 / n;
  e.p_half = s2 / n;
  e.p_quarter = s4 / n;
  e.standard_error = std::sqrt(std::max(e.probability * (1.0 - e.probability), 0.0) / n);
  const double d12 = e.p_half - e.probability, d24 = e.p_quarter - e.p_half;
  e.order = (d12 != 0.0 && d24 != 0.0 && d12 / d24 > 0.0) ? std::log2(d24 / d12) : 1.0;
  e.order = std::clamp(e.order, 0.5, 2.0);
  const double w = 1.0 / (std::pow(2.0, e.order) - 1.0);
  e.extrapolated = e.probability - w * d12;
  // Per-path estimator (1+w) e1 - w e2 with the order held fixed.
  double m = 0, m2 = 0;
  for (auto h : hits) {
    const double v = (1.0 + w) * (h & 1) - w * ((h >> 1) & 1);
    m += v;
    m2 += v * v;
  }
  m /= n;
  e.extrapolated_se = n > 1 ? std::sqrt(std::max(m2 / n - m * m, 0.0) / (n - 1)) : 0.0;
  return e;
}

struct OccupationOptions {
  double dt = 0.005;
  double horizon = 20.0;
  int substeps = 1;
  std::uint64_t seed = 1;
  std::uint64_t stream_offset = 0;
  unsigned workers = 0;
};

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

// (1/|A|) E sum_k 1_A(Y_{t_k}) dt up to death or the horizon, A = B(center, radius).
inline Estimate occupation_green_estimate(const DomainC11& D, double beta, const Point& x0,
                                          const Point& center, double radius,
                                          std::size_t n_paths, const OccupationOptions& opt = {}) {
  if (n_paths == 0) throw invalid_parameter("occupation_green_estimate: zero paths");
  require(radius > 0.0 && opt.dt > 0.0 && opt.horizon >= 0.0,
          "occupation_green_estimate: radius, dt > 0 and horizon >= 0");
  if ((x0 - center).norm() < radius)
    throw invalid_parameter("occupation_green_estimate: x0 must lie outside the cell");
  if (!D.contains(x0)) throw domain_error("occupation_green_estimate: x0 must lie in the domain");
  const int d = D.d;
  const double vol = std::pow(radius, d) * sphere_area(d - 1) / d;
  const auto n_steps = static_cast<std::size_t>(std::floor(opt.horizon / opt.dt + 1e-9));
  std::vector<double> occ(n_paths, 0.0);
  SimulationOptions so{opt.substeps};
  parallel_for(
      n_paths,
      [&](std::size_t i) {
        RngStream rng(opt.seed, opt.stream_offset + i);
        Point x = x0;
        std::size_t count = 0;
        for (std::size_t k = 1; k <= n_steps; ++k) {
          auto st = step_skbm(D, beta, x, opt.dt, rng, so);
          if (st.killed) break;
          x = st.y;
          if ((x - center).norm() < radius) ++count;
        }
        occ[i] = count * opt.dt / vol;
      },
      opt.workers ? opt.workers : worker_count());
  double m = 0, m2 = 0;
  for (double v : occ) {
    m += v;
    m2 += v * v;
  }
  const double n = static_cast<double>(n_paths);
  m /= n;
  Estimate e;
  e.value = m;
  e.standard_error = n > 1 ? std::sqrt(std::max(m2 / n - m * m, 0.0) / (n - 1)) : 0.0;
  return e;
}

struct SlopePoint {
  double scale, value, weight = 1.0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double confidence_halfwidth = 0.0;  // 95% Student-t
};

// Weighted least squares of log(value) on log(scale).
inline SlopeFit power_slope_fit(const std::vector<SlopePoint>& pts) {
  if (pts.size() < 3) throw invalid_parameter("power_slope_fit: need at least 3 points");
  double sw = 0, sx = 0, sy = 0;
  for (const auto& p : pts) {
    if (!(p.scale > 0.0 && p.value > 0.0 && p.weight > 0.0))
      throw invalid_parameter("power_slope_fit: scales, values and weights must be positive");
    sw += p.weight;
    sx += p.weight * std::log(p.scale);
    sy += p.weight * std::log(p.value);
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    const double dx = std::log(p.scale) - mx;
    sxx += p.weight * dx * dx;
    sxy += p.weight * dx * (std::log(p.value) - my);
  }
  if (!(sxx > 0.0)) throw invalid_parameter("power_slope_fit: scales must not all coincide");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (const auto& p : pts) {
    const double r = std::log(p.value) - f.intercept - f.slope * std::log(p.scale);
    rss += p.weight * r * r;
  }
  const double dof = static_cast<double>(pts.size()) - 2.0;
  const double se = std::sqrt(rss / dof / sxx);
  boost::math::students_t t(dof);
  f.confidence_halfwidth = boost::math::quantile(boost::math::complement(t, 0.025)) * se;
  return f;
}

}  // namespace jumppot
