#include <gtest/gtest.h>

#include <cmath>

#include "jumppot/constants.hpp"

namespace jp = jumppot;
using jp::make_point;

namespace {
jp::KillingConstantOptions opts(double beta0, double tol = 1e-10) {
  jp::KillingConstantOptions o;
  o.d = 2;
  o.beta0 = beta0;
  o.tol = tol;
  return o;
}
}  // namespace

TEST(KillingConstant, VanishesAtLeftEndpoint) {
  for (double alpha : {0.6, 1.0, 1.4}) {
    const auto F = jp::skbm_profile_F(2, alpha / 2);
    const double q = std::max(alpha - 1.0, 0.0);
    EXPECT_LT(std::abs(jp::killing_constant(alpha, q, F, opts(1.0)).value), 1e-9) << alpha;
  }
}

TEST(KillingConstant, SkbmValueAtQEqualsOne) {
  // Half-space killing density 2/pi divided by c_{2,-1} = 1/(2 pi).
  const auto r = jp::killing_constant(1.0, 1.0, jp::skbm_profile_F(2, 0.5), opts(1.0));
  EXPECT_NEAR(r.value, 4.0, 1e-8);
  EXPECT_LT(r.error, 1e-6);
}

TEST(KillingConstant, StrictlyIncreasingTable) {
  std::vector<double> q;
  for (int i = 0; i < 8; ++i) q.push_back(0.2 * i);
  const auto t = jp::killing_constant_table(1.0, q, jp::skbm_profile_F(2, 0.5), opts(1.0));
  EXPECT_TRUE(t.strictly_increasing());
  const auto tc = jp::killing_constant_table(1.4, {0.4, 0.6, 0.8, 1.0, 1.2, 1.3},
                                             jp::constant_profile_F(), opts(0.0));
  EXPECT_TRUE(tc.strictly_increasing());
}

TEST(KillingConstant, BlowsUpLikeInverseGapAtUpperEnd) {
  const auto F = jp::skbm_profile_F(2, 0.5);
  const double c3 = jp::killing_constant(1.0, 2.0 - 1e-3, F, opts(1.0)).value;
  const double c4 = jp::killing_constant(1.0, 2.0 - 1e-4, F, opts(1.0)).value;
  EXPECT_NEAR(c4 / c3, 10.0, 0.05);
}

TEST(KillingConstant, QuasiMonteCarloPathAgreesWithRadialPath) {
  const auto F = jp::skbm_profile_F(2, 0.5);
  jp::BoundaryProfileF G;
  G.f0 = F.f0;
  G.symmetrized = true;
  G.name = "skbm-as-generic";
  auto o = opts(1.0);
  o.qmc_points = 4096;
  const auto iso = jp::killing_constant(1.0, 0.7, F, o);
  const auto qmc = jp::killing_constant(1.0, 0.7, G, o);
  EXPECT_NEAR(qmc.value, iso.value, 4.0 * qmc.error + 1e-6);
}

TEST(KillingConstant, RejectsInadmissibleQ) {
  const auto F = jp::skbm_profile_F(2, 0.5);
  EXPECT_THROW(jp::killing_constant(1.0, 2.0, F, opts(1.0)), jp::invalid_parameter);
  EXPECT_THROW(jp::killing_constant(1.4, 0.3, F, opts(1.0)), jp::invalid_parameter);
}

TEST(SolveP, RoundTripsThroughTheConstant) {
  const auto F = jp::skbm_profile_F(2, 0.5);
  const auto r = jp::solve_p(1.0, 4.0, F, opts(1.0));
  EXPECT_NEAR(r.p, 1.0, 1e-6);
  const double C = jp::killing_constant(1.0, 0.8, F, opts(1.0)).value;
  EXPECT_NEAR(jp::solve_p(1.0, C, F, opts(1.0)).p, 0.8, 1e-6);
  EXPECT_THROW(jp::solve_p(1.0, 0.0, F, opts(1.0)), jp::invalid_parameter);
}

TEST(PrincipalValue, ConvergesToConstant) {
  const auto F = jp::skbm_profile_F(2, 0.5);
  const double C = jp::killing_constant(1.0, 1.0, F, opts(1.0)).value;
  double prev = INFINITY;
  for (double delta : {0.1, 0.03, 0.01}) {
    const double err = std::abs(jp::pv_generator_halfspace(1.0, F, 1.0, 1.0, delta).value - C);
    EXPECT_LT(err, 0.05 * delta);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_THROW(jp::pv_generator_halfspace(1.0, F, 1.0, 1.0, 0.6), jp::invalid_parameter);
}

TEST(Barrier, RatioApproachesLimit) {
  jp::HalfSpaceFKernel k;
  k.alpha = 1.0;
  k.c = jp::c_d_minus_alpha(2, 1.0);
  k.F = jp::skbm_profile_F(2, 0.5);
  double prev = INFINITY;
  for (double s : {0.1, 0.01, 0.001}) {
    const auto r = jp::barrier_ratio(k, 1.0, 1.0, make_point({0.0, s}));
    const double gap = std::abs(r.ratio - r.limit);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 0.02 * k.c * 4.0);
}
