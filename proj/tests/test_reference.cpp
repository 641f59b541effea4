#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "jumppot/reference.hpp"

namespace jp = jumppot;
using jp::make_point;
using jp::Point;

namespace {
std::shared_ptr<const jp::DiskEigenData> disk_data(int n = 60) {
  return std::make_shared<jp::DiskEigenData>(jp::DiskEigenData::compute(1.0, n, n));
}
}  // namespace

TEST(HalfSpaceHeat, ChapmanKolmogorov) {
  const auto o = jp::HeatKernelOracle::half_space(2);
  const Point x = make_point({0.1, 0.4}), y = make_point({-0.3, 0.7});
  const double s = 0.05, t = 0.08;
  auto inner = [&](double z2) {
    auto f = [&](double z1) {
      const Point z = make_point({z1, z2});
      return jp::heat_kernel(o, s, x, z) * jp::heat_kernel(o, t, z, y);
    };
    return jp::quad::tanh_sinh(f, -4.0, 4.0, 1e-12, 1e-300, false).value;
  };
  const double ck = jp::quad::tanh_sinh(inner, 0.0, 5.0, 1e-11, 1e-300, false).value;
  EXPECT_NEAR(ck / jp::heat_kernel(o, s + t, x, y), 1.0, 1e-8);
}

TEST(HalfSpaceHeat, SurvivalIsTotalMass) {
  const auto o = jp::HeatKernelOracle::half_space(2);
  const double t = 0.3, h = 0.5;
  auto f = [&](double z2) {
    // Horizontal Gaussian integrates to one; only the vertical factor remains.
    const double g = std::exp(-(z2 - h) * (z2 - h) / (4 * t)) - std::exp(-(z2 + h) * (z2 + h) / (4 * t));
    return g / std::sqrt(4 * jp::pi * t);
  };
  EXPECT_NEAR(jp::quad::tanh_sinh(f, 0.0, 20.0, 1e-12).value, jp::survival_halfspace(t, h), 1e-11);
  const Point x = make_point({0.0, h}), y = make_point({0.3, 0.2});
  EXPECT_NEAR(jp::heat_kernel(o, t, x, y), jp::heat_kernel(o, t, y, x), 1e-16);
}

TEST(HalfSpaceClosedForms, KnownValues) {
  const jp::SkbmOracle o(0.5, jp::HeatKernelOracle::half_space(2));
  const Point x = make_point({0, 1}), y = make_point({0, 2});
  EXPECT_NEAR(jp::skbm_green(o, x, y), 1.0 / (3.0 * jp::pi), 1e-12);
  EXPECT_NEAR(jp::skbm_jump_kernel(o, x, y), 26.0 / (27.0 * 2.0 * jp::pi), 1e-12);
  EXPECT_NEAR(jp::skbm_kappa(o, x), 2.0 / jp::pi, 1e-9);
}

TEST(HalfSpaceClosedForms, AgreeWithQuadratureInHigherDimensions) {
  for (auto [d, beta] : std::vector<std::pair<int, double>>{{3, 0.3}, {3, 0.8}, {4, 0.6}}) {
    const jp::SkbmOracle o(beta, jp::HeatKernelOracle::half_space(d));
    Point x = Point::Zero(d), y = Point::Zero(d);
    x(d - 1) = 0.3;
    y(0) = 0.5;
    y(d - 1) = 1.1;
    EXPECT_NEAR(jp::skbm_green_quadrature(o, x, y) / jp::skbm_green(o, x, y), 1.0, 1e-9);
    EXPECT_NEAR(jp::skbm_jump_kernel_quadrature(o, x, y) / jp::skbm_jump_kernel(o, x, y), 1.0, 1e-9);
  }
}

TEST(HalfSpaceClosedForms, KappaMatchesCoefficientFormula) {
  for (double beta : {0.3, 0.7}) {
    const jp::SkbmOracle o(beta, jp::HeatKernelOracle::half_space(2));
    const double h = 0.4;
    const double c1 = std::pow(4.0, beta) * std::tgamma(beta + 0.5) / (std::sqrt(jp::pi) * std::tgamma(1.0 - beta));
    EXPECT_NEAR(jp::skbm_kappa(o, make_point({0.2, h})) / (c1 * std::pow(h, -2 * beta)), 1.0, 1e-8);
  }
}

TEST(DiskEigen, FirstEigenvalueAndNormalization) {
  const auto E = jp::DiskEigenData::compute(1.0, 10, 10);
  double lmin = INFINITY;
  for (std::size_t i = 0; i < E.modes.size(); ++i) lmin = std::min(lmin, E.lambda(i));
  const double j01 = boost::math::cyl_bessel_j_zero(0.0, 1);
  EXPECT_NEAR(lmin, j01 * j01, 1e-10);
  EXPECT_NEAR(lmin, 5.7832, 1e-4);
  // Radial mode normalization: int |phi|^2 = 1 on the unit disk.
  const auto& m = E.modes.front();
  auto f = [&](double r) {
    const double j = boost::math::cyl_bessel_j(m.n, m.zero * r);
    return 2 * jp::pi * r * m.norm * j * j;
  };
  EXPECT_NEAR(jp::quad::tanh_sinh(f, 0.0, 1.0, 1e-12).value, 1.0, 1e-10);
}

TEST(DiskEigen, CacheRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "jumppot_cache_test";
  std::filesystem::remove_all(dir);
  const auto a = jp::DiskEigenData::load_or_compute(dir, 1.5, 12, 9);
  EXPECT_TRUE(std::filesystem::exists(dir / jp::DiskEigenData::cache_name(1.5, 12, 9)));
  const auto b = jp::DiskEigenData::load_or_compute(dir, 1.5, 12, 9);
  ASSERT_EQ(a.modes.size(), b.modes.size());
  for (std::size_t i = 0; i < a.modes.size(); ++i) {
    EXPECT_EQ(a.modes[i].zero, b.modes[i].zero);
    EXPECT_EQ(a.modes[i].norm, b.modes[i].norm);
  }
  EXPECT_EQ(a.t0, b.t0);
  std::filesystem::remove_all(dir);
}

TEST(DiskHeat, SymmetricAndContinuousAcrossSplit) {
  const auto o = jp::HeatKernelOracle::disk(1.0, disk_data());
  const Point x = make_point({0.2, -0.1}), y = make_point({-0.3, 0.4});
  for (double t : {0.003, 0.05, 0.4}) EXPECT_NEAR(jp::heat_kernel(o, t, x, y) / jp::heat_kernel(o, t, y, x), 1.0, 1e-12);
  const double t0 = o.eigen->t0;
  EXPECT_NEAR(jp::heat_kernel(o, t0 * (1 - 1e-9), x, y) / jp::heat_kernel(o, t0 * (1 + 1e-9), x, y), 1.0, 1e-6);
}

TEST(DiskOracles, ResolventAgreesWithHybridInInterior) {
  const jp::SkbmOracle o(0.5, jp::HeatKernelOracle::disk(1.0, disk_data()));
  const Point x = make_point({0.3, 0.0}), y = make_point({0.5 * std::cos(0.7), 0.5 * std::sin(0.7)});
  EXPECT_NEAR(jp::skbm_jump_kernel(o, x, y) / jp::skbm_jump_kernel_quadrature(o, x, y), 1.0, 1e-6);
  EXPECT_NEAR(jp::skbm_green(o, x, y) / jp::skbm_green_quadrature(o, x, y), 1.0, 1e-6);
  EXPECT_NEAR(jp::skbm_green(o, x, y), jp::skbm_green(o, y, x), 1e-12);
}

TEST(DiskOracles, ResolventAgreesWithFineHybridNearBoundary) {
  const jp::SkbmOracle o(0.5, jp::HeatKernelOracle::disk(1.0, disk_data(240)));
  const Point x = make_point({0.95, 0.0}), y = make_point({0.9 * std::cos(0.1), 0.9 * std::sin(0.1)});
  EXPECT_NEAR(jp::skbm_jump_kernel(o, x, y) / jp::skbm_jump_kernel_quadrature(o, x, y), 1.0, 1e-4);
  EXPECT_NEAR(jp::skbm_green(o, x, y) / jp::skbm_green_quadrature(o, x, y), 1.0, 1e-5);
}

TEST(DiskOracles, KillingApproachesHalfSpaceNearBoundary) {
  const jp::SkbmOracle disk(0.5, jp::HeatKernelOracle::disk(1.0, disk_data()));
  const double k = jp::skbm_kappa(disk, make_point({0.99, 0.0}));
  // Half-space value (2/pi) delta^{-1} at delta = 0.01; curvature shifts it slightly.
  EXPECT_NEAR(k / (2.0 / jp::pi / 0.01), 1.0, 0.01);
  EXPECT_THROW(jp::skbm_kappa(disk, make_point({1.0, 0.1})), jp::domain_error);
}

TEST(GreenPotential, LogarithmicCoefficientAtCriticalExponent) {
  const jp::SkbmOracle o(0.5, jp::HeatKernelOracle::half_space(2));
  const double d1 = 1e-5, d2 = 1e-4;
  const double I1 = jp::halfspace_green_potential(o, d1, 1.0, 0.0).value / d1;
  const double I2 = jp::halfspace_green_potential(o, d2, 1.0, 0.0).value / d2;
  EXPECT_NEAR((I1 - I2) / std::log(d2 / d1), 2.0 / jp::pi, 1e-3);
}

TEST(Subordinator, HalfStableDensityIsProbability) {
  auto f = [](double s) { return jp::half_stable_density(0.7, s); };
  EXPECT_NEAR(jp::quad::exp_sinh(f, 0.0, 1e-12).value, 1.0, 1e-10);
}

TEST(Envelope, HeatKernelEnvelopeConstantIsStable) {
  const auto heat = jp::HeatKernelOracle::half_space(2);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<jp::TransitionSample> samples;
  for (int i = 0; i < 60; ++i) {
    const double t = std::exp(std::log(1e-2) + U(rng) * std::log(1e3));
    samples.push_back({t, make_point({U(rng), 0.05 + 2 * U(rng)}), make_point({U(rng), 0.05 + 2 * U(rng)})});
  }
  const auto c = jp::heat_kernel_envelope_check(heat, samples);
  EXPECT_TRUE(c.pass) << c.fitted_constant << " " << c.half_sample_constant;
}
