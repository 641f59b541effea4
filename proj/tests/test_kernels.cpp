#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "jumppot/kernels.hpp"
#include "jumppot/reference.hpp"

namespace jp = jumppot;
using jp::make_point;
using jp::Point;

namespace {
Point random_h_minus1(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  std::uniform_real_distribution<double> V(-0.999, 4.0);
  Point z(d);
  for (int i = 0; i + 1 < d; ++i) z(i) = U(rng);
  z(d - 1) = V(rng);
  return z;
}
}  // namespace

TEST(SkbmProfile, InvariantUnderBoundaryInversion) {
  std::mt19937_64 rng(1);
  for (int d : {2, 3}) {
    const auto F = jp::skbm_profile_F(d, 0.4);
    for (int i = 0; i < 2000; ++i) {
      const Point z = random_h_minus1(rng, d);
      const Point w = -z / (1.0 + z(d - 1));
      EXPECT_NEAR(F(z), F(w), 1e-14);
    }
  }
}

TEST(SkbmProfile, CensoredComplementSumsToOne) {
  std::mt19937_64 rng(2);
  const int d = 2;
  const double beta = 0.35, alpha = 2 * beta;
  auto theta = [&](double r) { return std::pow(r, d + alpha); };
  for (int i = 0; i < 2000; ++i) {
    const Point z = random_h_minus1(rng, d);
    EXPECT_NEAR(jp::f0_skbm_halfspace(d, beta, z) + jp::censored_profile(theta, z), 1.0, 1e-12);
  }
}

TEST(SkbmProfile, ClosedFormMatchesSubordinatedHeatKernel) {
  // F(z) = J(e_d, e_d + z) / (c_{d,-alpha} |z|^{-d-alpha}) with J from t-quadrature.
  std::mt19937_64 rng(5);
  for (int d : {2, 3}) {
    const double beta = 0.6;
    const jp::SkbmOracle o(beta, jp::HeatKernelOracle::half_space(d));
    const auto F = jp::skbm_profile_F(d, beta);
    const double c = jp::c_d_minus_alpha(d, 2 * beta);
    for (int i = 0; i < 20; ++i) {
      Point z = random_h_minus1(rng, d);
      if (z.norm() < 0.05) continue;
      Point x = Point::Zero(d);
      x(d - 1) = 1.0;
      const double J = jp::skbm_jump_kernel_quadrature(o, x, Point(x + z));
      EXPECT_NEAR(J / (c * std::pow(z.norm(), -d - 2 * beta)) / F(z), 1.0, 1e-8);
    }
  }
}

TEST(SkbmProfile, RejectsPointsOutsideDomain) {
  const auto F = jp::skbm_profile_F(2, 0.5);
  EXPECT_THROW(F(make_point({0.0, -1.0})), jp::domain_error);
  EXPECT_THROW(jp::constant_profile_F()(make_point({0.0, -1.5})), jp::domain_error);
}

TEST(Symmetrize, ProducesInversionInvariantProfile) {
  jp::BoundaryProfileF F;
  F.f0 = [](const Point& z) { return 1.0 + 0.5 * std::tanh(z(1)); };
  F.name = "tanh";
  const auto S = jp::symmetrize_F0(F);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    const Point z = random_h_minus1(rng, 2);
    EXPECT_NEAR(S(z), S(Point(-z / (1.0 + z(1)))), 1e-14);
  }
}

TEST(JumpKernel, SymmetricInArguments) {
  const auto pre = jp::preset_gamma_beta(1.5, 0.5);
  jp::JumpKernelSpec k{pre.alpha, jp::make_ball(make_point({0, 0}), 1.0), pre.triple,
                       jp::cosine_coefficient()};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-0.7, 0.7);
  for (int i = 0; i < 1000; ++i) {
    const Point x = make_point({U(rng), U(rng)}), y = make_point({U(rng), U(rng)});
    EXPECT_EQ(jp::eval_B(k, x, y), jp::eval_B(k, y, x));
  }
}

TEST(JumpKernel, RatiosAndDiagonal) {
  const auto r = jp::kernel_ratios(0.1, 0.4, 0.2);
  EXPECT_DOUBLE_EQ(r.r1, 0.5);
  EXPECT_DOUBLE_EQ(r.r2, 2.0);
  EXPECT_DOUBLE_EQ(r.r3, 0.5);
  const auto pre = jp::preset_gamma_beta(2.0, 0.5);
  jp::JumpKernelSpec k{pre.alpha, jp::make_half_space(2), pre.triple, jp::constant_coefficient(2.0)};
  EXPECT_DOUBLE_EQ(jp::eval_B(k, make_point({0, 1}), make_point({0, 1})), 2.0);
  EXPECT_THROW(jp::eval_J(k, make_point({0, 1}), make_point({0, 1})), jp::domain_error);
}

TEST(Killing, ExpansionAndCap) {
  jp::KillingSpec ks;
  ks.alpha = 1.0;
  ks.c9 = 4.0;
  ks.c8 = 0.5;
  ks.eta0 = 1.0;
  EXPECT_DOUBLE_EQ(jp::eval_kappa(ks, 0.5, jp::Perturbation::none), 8.0);
  EXPECT_DOUBLE_EQ(jp::eval_kappa(ks, 0.5, jp::Perturbation::plus), 8.5);
  EXPECT_DOUBLE_EQ(jp::eval_kappa(ks, 0.5, jp::Perturbation::minus), 7.5);
  EXPECT_LE(jp::eval_kappa(ks, 3.0, jp::Perturbation::none), 0.5);
  EXPECT_THROW(jp::eval_kappa(ks, 0.0, jp::Perturbation::none), jp::invalid_parameter);
}

TEST(B5Residual, VanishesForHalfSpaceKernel) {
  const double beta = 0.5, alpha = 1.0;
  const jp::SkbmOracle o(beta, jp::HeatKernelOracle::half_space(2));
  const auto H = jp::make_half_space(2);
  const auto frame = jp::frame_at(H, make_point({0, 0}));
  auto J = [&](const Point& x, const Point& y) { return jp::skbm_jump_kernel(o, x, y); };
  const double c = jp::c_d_minus_alpha(2, alpha);
  for (double s : {1.0 / 64, 1.0 / 256}) {
    const double res = jp::b5_residual(J, c, jp::skbm_profile_F(2, beta), alpha, H, frame,
                                       make_point({0, s}), make_point({s / 2, 2 * s}));
    EXPECT_NEAR(res / c, 0.0, 1e-12);
  }
}
