#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "jumppot/error.hpp"

namespace jumppot {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Point make_point(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double v : xs) p(i++) = v;
  return p;
}

struct HalfSpace {};

struct Ball {
  Point center;
  double radius = 1.0;
};

// {x : x_d > psi(x~)} with psi(0) = 0, grad psi(0) = 0 and
// |grad psi(u) - grad psi(v)| <= grad_lipschitz |u - v|.
struct GraphDomain {
  std::function<double(const Point&)> psi;
  std::function<Point(const Point&)> grad;
  std::function<Matrix(const Point&)> hessian;
  double grad_lipschitz = 0.0;
  std::string preset;
};

struct DomainC11 {
  int d = 2;
  std::variant<HalfSpace, Ball, GraphDomain> shape;
  double R_hat = 1.0;   // localization radius
  double Lambda = 0.0;  // C^{1,1} characteristic

  bool is_half_space() const { return std::holds_alternative<HalfSpace>(shape); }
  bool is_ball() const { return std::holds_alternative<Ball>(shape); }
  bool is_graph() const { return std::holds_alternative<GraphDomain>(shape); }
  // Lipschitz constant of the boundary graph in local frames.
  double lambda0() const { return Lambda * R_hat; }

  bool contains(const Point& x) const {
    if (x.size() != d) throw invalid_parameter("DomainC11: dimension mismatch");
    if (is_half_space()) return x(d - 1) > 0.0;
    if (const auto* b = std::get_if<Ball>(&shape)) return (x - b->center).norm() < b->radius;
    const auto& g = std::get<GraphDomain>(shape);
    return x(d - 1) > g.psi(x.head(d - 1));
  }
};

inline DomainC11 make_half_space(int d) {
  require(d >= 2, "make_half_space: d >= 2");
  DomainC11 D;
  D.d = d;
  D.shape = HalfSpace{};
  D.R_hat = 1.0;
  D.Lambda = 0.0;
  return D;
}

// Localization radius R^1/4; Lambda is the largest curvature of the local
// spherical-cap graph on |u| <= R_hat, which keeps R_hat <= 1/(2 Lambda).
inline DomainC11 make_ball(const Point& center, double radius) {
  require(radius > 0.0, "make_ball: radius must be positive");
  require(center.size() >= 2, "make_ball: d >= 2");
  DomainC11 D;
  D.d = static_cast<int>(center.size());
  D.shape = Ball{center, radius};
  D.R_hat = std::min(1.0, radius / 4.0);
  const double h = radius * radius - D.R_hat * D.R_hat;
  D.Lambda = radius * radius / std::pow(h, 1.5);
  return D;
}

inline DomainC11 make_flat_graph(int d) {
  require(d >= 2, "make_flat_graph: d >= 2");
  GraphDomain g;
  g.psi = [](const Point&) { return 0.0; };
  g.grad = [](const Point& u) { return Point(Point::Zero(u.size())); };
  g.hessian = [](const Point& u) { return Matrix(Matrix::Zero(u.size(), u.size())); };
  g.grad_lipschitz = 0.0;
  g.preset = "flat";
  DomainC11 D;
  D.d = d;
  D.shape = g;
  D.R_hat = 1.0;
  D.Lambda = 0.0;
  return D;
}

// x_d > c |x~|^2, Lambda = 2c.
inline DomainC11 make_paraboloid_graph(int d, double c) {
  require(d >= 2 && c >= 0.0, "make_paraboloid_graph: d >= 2, c >= 0");
  GraphDomain g;
  g.psi = [c](const Point& u) { return c * u.squaredNorm(); };
  g.grad = [c](const Point& u) { return Point(2.0 * c * u); };
  g.hessian = [c](const Point& u) {
    return Matrix(2.0 * c * Matrix::Identity(u.size(), u.size()));
  };
  g.grad_lipschitz = 2.0 * c;
  g.preset = "paraboloid";
  DomainC11 D;
  D.d = d;
  D.shape = g;
  D.Lambda = 2.0 * c;
  D.R_hat = c > 0.0 ? std::min(1.0, 1.0 / (2.0 * D.Lambda)) : 1.0;
  return D;
}

// Orthonormal frame at a boundary point Q; the last column of `axes` is the
// inward normal.  `psi_local` describes the boundary as a graph over the
// tangent plane in frame coordinates.
struct LocalFrame {
  Point origin;
  Matrix axes;
  std::function<double(const Point&)> psi_local;

  Point to_local(const Point& x) const { return axes.transpose() * (x - origin); }
  Point to_global(const Point& v) const { return origin + axes * v; }
  Point normal() const { return axes.col(axes.cols() - 1); }
};

namespace detail {

// Columns: an orthonormal basis of n^perp followed by n.
inline Matrix frame_axes(const Point& n) {
  const auto d = n.size();
  Matrix A(d, d);
  const Matrix nm = n;
  Eigen::HouseholderQR<Matrix> qr(nm);
  Matrix Q = qr.householderQ() * Matrix::Identity(d, d);
  for (Eigen::Index i = 1; i < d; ++i) A.col(i - 1) = Q.col(i);
  A.col(d - 1) = n;
  return A;
}

inline const GraphDomain& graph(const DomainC11& D) { return std::get<GraphDomain>(D.shape); }

// Minimise |x - (u, psi(u))|^2 over u by damped Newton on the first-order
// condition, falling back to backtracking gradient descent.
inline Point graph_project(const DomainC11& D, const Point& x) {
  const auto& g = graph(D);
  const int d = D.d;
  const Point xt = x.head(d - 1);
  const double xd = x(d - 1);
  auto obj = [&](const Point& u) {
    const double h = g.psi(u) - xd;
    return 0.5 * ((u - xt).squaredNorm() + h * h);
  };
  auto grad = [&](const Point& u) { return Point((u - xt) + (g.psi(u) - xd) * g.grad(u)); };
  Point u = xt;
  for (int it = 0; it < 100; ++it) {
    const Point gr = grad(u);
    if (gr.norm() < 1e-14 * (1.0 + x.norm())) return u;
    const Point gp = g.grad(u);
    Matrix H = Matrix::Identity(d - 1, d - 1) + gp * gp.transpose() + (g.psi(u) - xd) * g.hessian(u);
    Point step = H.ldlt().solve(-gr);
    if (!step.allFinite() || step.dot(gr) >= 0.0) step = -gr;
    double t = 1.0;
    const double f0 = obj(u);
    while (t > 1e-12 && obj(u + t * step) > f0 + 1e-4 * t * step.dot(gr)) t *= 0.5;
    const Point un = u + t * step;
    if ((un - u).norm() < 1e-12 * (1.0 + u.norm())) return un;
    u = un;
  }
  for (int it = 0; it < 20000; ++it) {
    const Point gr = grad(u);
    if (gr.norm() < 1e-13 * (1.0 + x.norm())) return u;
    double t = 1.0;
    const double f0 = obj(u);
    while (t > 1e-16 && obj(u - t * gr) > f0 - 1e-4 * t * gr.squaredNorm()) t *= 0.5;
    u -= t * gr;
  }
  throw geometry_failure("graph_project: projection did not converge");
}

}  // namespace detail

inline double dist_to_boundary(const DomainC11& D, const Point& x) {
  if (x.size() != D.d) throw invalid_parameter("dist_to_boundary: dimension mismatch");
  if (D.is_half_space()) return std::max(0.0, x(D.d - 1));
  if (const auto* b = std::get_if<Ball>(&D.shape))
    return std::max(0.0, b->radius - (x - b->center).norm());
  if (!D.contains(x)) return 0.0;
  const auto& g = detail::graph(D);
  const Point u = detail::graph_project(D, x);
  Point q(D.d);
  q.head(D.d - 1) = u;
  q(D.d - 1) = g.psi(u);
  const double delta = (x - q).norm();
  const double rho = x(D.d - 1) - g.psi(x.head(D.d - 1));
  if (delta > rho * (1.0 + 1e-12) + 1e-15)
    throw geometry_failure("dist_to_boundary: projection worse than the vertical proxy");
  return delta;
}

namespace detail {

// Boundary of a graph domain in the frame at Q = (u0, psi(u0)) with normal
// n: for tangent coordinates v~ find t with Q + T v~ + n t on the graph.
inline double graph_local_psi(const DomainC11& D, const Point& origin, const Matrix& axes,
                              const Point& vt) {
  const auto& g = graph(D);
  const int d = D.d;
  const Point base = origin + axes.leftCols(d - 1) * vt;
  const Point n = axes.col(d - 1);
  auto h = [&](double t) {
    const Point p = base + t * n;
    return p(d - 1) - g.psi(p.head(d - 1));
  };
  double t = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double f = h(t);
    const double eps = 1e-7 * (1.0 + std::abs(t));
    const double df = (h(t + eps) - h(t - eps)) / (2.0 * eps);
    const double dt = f / df;
    t -= dt;
    if (std::abs(dt) < 1e-15 * (1.0 + std::abs(t))) break;
  }
  return t;
}

}  // namespace detail

struct BoundaryPoint {
  Point Q;
  LocalFrame frame;
};

inline LocalFrame frame_at(const DomainC11& D, const Point& Q) {
  const int d = D.d;
  LocalFrame f;
  f.origin = Q;
  if (D.is_half_space()) {
    f.axes = Matrix::Identity(d, d);
    f.psi_local = [](const Point&) { return 0.0; };
    return f;
  }
  if (const auto* b = std::get_if<Ball>(&D.shape)) {
    const Point n = -(Q - b->center) / (Q - b->center).norm();
    f.axes = detail::frame_axes(n);
    const double R = b->radius;
    f.psi_local = [R](const Point& u) {
      const double s = u.squaredNorm();
      return s / (R + std::sqrt(std::max(0.0, R * R - s)));  // R - sqrt(R^2 - |u|^2)
    };
    return f;
  }
  const auto& g = detail::graph(D);
  const Point gp = g.grad(Q.head(d - 1));
  if (gp.norm() == 0.0 && Q.head(d - 1).norm() == 0.0) {
    f.axes = Matrix::Identity(d, d);
    auto psi = g.psi;
    f.psi_local = psi;
    return f;
  }
  Point n(d);
  n.head(d - 1) = -gp;
  n(d - 1) = 1.0;
  n.normalize();
  f.axes = detail::frame_axes(n);
  DomainC11 Dc = D;
  Point origin = Q;
  Matrix axes = f.axes;
  f.psi_local = [Dc, origin, axes](const Point& vt) {
    return detail::graph_local_psi(Dc, origin, axes, vt);
  };
  return f;
}

inline BoundaryPoint nearest_boundary_point(const DomainC11& D, const Point& x) {
  if (x.size() != D.d) throw invalid_parameter("nearest_boundary_point: dimension mismatch");
  const int d = D.d;
  Point Q;
  if (D.is_half_space()) {
    Q = x;
    Q(d - 1) = 0.0;
  } else if (const auto* b = std::get_if<Ball>(&D.shape)) {
    const Point v = x - b->center;
    const double r = v.norm();
    if (r == 0.0) throw geometry_failure("nearest_boundary_point: x is the ball centre");
    Q = b->center + v * (b->radius / r);
  } else {
    const double delta = dist_to_boundary(D, x);
    if (!(delta < D.R_hat / 8.0))
      throw geometry_failure("nearest_boundary_point: outside the uniqueness regime delta < R/8");
    const auto& g = detail::graph(D);
    const Point u = detail::graph_project(D, x);
    Q.resize(d);
    Q.head(d - 1) = u;
    Q(d - 1) = g.psi(u);
  }
  return {Q, frame_at(D, Q)};
}

struct BoxRegion {
  double a, b;
};
struct EnuRegion {
  double nu, r;
};
struct TangentBallRegion {
  double r;
};
struct ExteriorTangentBallRegion {
  double r;
};
using RegionSpec = std::variant<BoxRegion, EnuRegion, TangentBallRegion, ExteriorTangentBallRegion>;

struct Membership {
  bool inside = false;
  double rho = 0.0;  // vertical distance x_d - Psi(x~) in the frame
};

inline Membership region_membership(const DomainC11& D, const LocalFrame& frame, const Point& x,
                                    const RegionSpec& spec) {
  const int d = D.d;
  const Point v = frame.to_local(x);
  const Point vt = v.head(d - 1);
  Membership m;
  m.rho = v(d - 1) - frame.psi_local(vt);
  if (const auto* box = std::get_if<BoxRegion>(&spec)) {
    const double cap = D.R_hat / (2.0 + D.lambda0());
    if (!(box->a > 0.0 && box->b > 0.0 && box->a <= cap * (1 + 1e-12) && box->b <= cap * (1 + 1e-12)))
      throw invalid_parameter("region_membership: box sides must lie in (0, R/(2+Lambda0)]");
    m.inside = vt.norm() < box->a && m.rho > 0.0 && m.rho < box->b;
  } else if (const auto* e = std::get_if<EnuRegion>(&spec)) {
    if (!(e->nu > 0.0 && e->nu <= 1.0 && e->r > 0.0 && e->r <= D.R_hat / 4.0 * (1 + 1e-12)))
      throw invalid_parameter("region_membership: E_nu needs nu in (0,1], r in (0, R/4]");
    const double yt = vt.norm();
    const double yd = v(d - 1);
    m.inside = yt < e->r / 4.0 && 4.0 * std::pow(e->r, -e->nu) * std::pow(yt, 1.0 + e->nu) < yd &&
               yd < e->r / 2.0;
  } else if (const auto* s = std::get_if<TangentBallRegion>(&spec)) {
    require(s->r > 0.0, "region_membership: r must be positive");
    Point c = Point::Zero(d);
    c(d - 1) = s->r;
    m.inside = (v - c).norm() < s->r;
  } else {
    const auto& s2 = std::get<ExteriorTangentBallRegion>(spec);
    require(s2.r > 0.0, "region_membership: r must be positive");
    Point c = Point::Zero(d);
    c(d - 1) = -s2.r;
    m.inside = (v - c).norm() < s2.r;
  }
  return m;
}

// f^(r)(v) = (r v~, r v_d + Psi(r v~)) in frame coordinates, mapped to ambient space.
inline Point box_diffeo(const DomainC11& D, const LocalFrame& frame, double r, const Point& v) {
  const int d = D.d;
  if (!(r > 0.0 && r <= D.R_hat / (6.0 + 3.0 * D.lambda0()) * (1 + 1e-12)))
    throw invalid_parameter("box_diffeo: need 0 < r <= R/(6+3 Lambda0)");
  if (v.size() != d || !(v.head(d - 1).norm() < 3.0 && v(d - 1) > 0.0 && v(d - 1) < 3.0))
    throw invalid_parameter("box_diffeo: v must lie in U_H(3)");
  Point w(d);
  w.head(d - 1) = r * v.head(d - 1);
  w(d - 1) = r * v(d - 1) + frame.psi_local(w.head(d - 1));
  return frame.to_global(w);
}

inline Point box_diffeo_inverse(const DomainC11& D, const LocalFrame& frame, double r,
                                const Point& x) {
  const int d = D.d;
  require(r > 0.0, "box_diffeo_inverse: r must be positive");
  const Point w = frame.to_local(x);
  Point v(d);
  v.head(d - 1) = w.head(d - 1) / r;
  v(d - 1) = (w(d - 1) - frame.psi_local(w.head(d - 1))) / r;
  return v;
}

struct LipschitzCheck {
  double min_ratio = 0.0;  // min |f(v)-f(w)| / (r |v-w|)
  double max_ratio = 0.0;
  bool pass = false;       // both within [(1+Lambda0)^{-1}, 1+Lambda0]
};

// Samples pairs in U_H(3) with a caller-supplied generator of points.
template <class Gen>
LipschitzCheck box_diffeo_lipschitz(const DomainC11& D, const LocalFrame& frame, double r,
                                    int n_pairs, Gen&& sample_v) {
  LipschitzCheck c;
  c.min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_pairs; ++i) {
    const Point v = sample_v();
    const Point w = sample_v();
    const double dv = (v - w).norm();
    if (dv == 0.0) continue;
    const double q = (box_diffeo(D, frame, r, v) - box_diffeo(D, frame, r, w)).norm() / (r * dv);
    c.min_ratio = std::min(c.min_ratio, q);
    c.max_ratio = std::max(c.max_ratio, q);
  }
  const double L = 1.0 + D.lambda0();
  c.pass = c.min_ratio >= 1.0 / L - 1e-12 && c.max_ratio <= L + 1e-12;
  return c;
}

}  // namespace jumppot
