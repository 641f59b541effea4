#include <gtest/gtest.h>

#include <cmath>

#include "jumppot/montecarlo.hpp"
#include "jumppot/reference.hpp"

namespace jp = jumppot;
using jp::make_point;
using jp::Point;

TEST(RngStream, Reproducible) {
  jp::RngStream a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    differs |= (u != c.uniform());
  }
  EXPECT_TRUE(differs);
}

TEST(Subordinator, LaplaceTransform) {
  const int n = 200000;
  for (double beta : {0.3, 0.5, 0.7}) {
    jp::RngStream rng(3, 0);
    const double dt = 0.5;
    std::vector<double> s(n);
    for (auto& v : s) v = jp::sample_subordinator_increment(beta, dt, rng);
    for (double lambda : {0.5, 1.0, 2.0}) {
      double m = 0, m2 = 0;
      for (double v : s) {
        const double e = std::exp(-lambda * v);
        m += e;
        m2 += e * e;
      }
      m /= n;
      const double se = std::sqrt((m2 / n - m * m) / (n - 1));
      EXPECT_NEAR(m, std::exp(-dt * std::pow(lambda, beta)), 4 * se) << beta << " " << lambda;
    }
  }
  jp::RngStream rng(1, 1);
  EXPECT_THROW(jp::sample_subordinator_increment(1.0, 0.1, rng), jp::invalid_parameter);
}

TEST(KilledBrownianStep, SurvivalMatchesErf) {
  const int n = 200000;
  const double h = 0.3, dt = 0.05;
  jp::RngStream rng(5, 0);
  int alive = 0;
  for (int i = 0; i < n; ++i) alive += !jp::step_killed_bm_halfspace(make_point({0.0, h}), dt, rng).killed;
  const double p = jp::survival_halfspace(dt, h);
  EXPECT_NEAR(static_cast<double>(alive) / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(Simulation, PathIsDeterministicAndStaysInDomain) {
  const auto H = jp::make_half_space(2);
  jp::RngStream a(9, 3), b(9, 3);
  const auto pa = jp::simulate_skbm(H, 0.5, make_point({0, 1}), 0.01, 500, a);
  const auto pb = jp::simulate_skbm(H, 0.5, make_point({0, 1}), 0.01, 500, b);
  ASSERT_EQ(pa.positions.size(), pb.positions.size());
  for (std::size_t i = 0; i < pa.positions.size(); ++i) {
    EXPECT_EQ(pa.positions[i], pb.positions[i]);
    EXPECT_TRUE(H.contains(pa.positions[i]));
  }
  const auto B = jp::make_ball(make_point({0, 0}), 1.0);
  jp::RngStream c(9, 4);
  for (const auto& x : jp::simulate_skbm(B, 0.5, make_point({0.2, 0.1}), 0.01, 300, c).positions)
    EXPECT_TRUE(B.contains(x));
}

TEST(Occupation, MatchesGreenFunction) {
  const auto H = jp::make_half_space(2);
  jp::OccupationOptions opt;
  opt.dt = 0.005;
  opt.horizon = 20.0;
  opt.seed = 11;
  const auto e = jp::occupation_green_estimate(H, 0.5, make_point({0, 1}), make_point({0, 2}), 0.15, 3000, opt);
  const double G = 1.0 / (3.0 * jp::pi);
  EXPECT_NEAR(e.value, G, 4 * e.standard_error + 0.05 * G) << e.value << " +- " << e.standard_error;
  EXPECT_THROW(jp::occupation_green_estimate(H, 0.5, make_point({0, 1}), make_point({0, 1.1}), 0.2, 10, opt),
               jp::invalid_parameter);
}

TEST(ExitProbability, ReproducibleAndWorkerIndependent) {
  const auto H = jp::make_half_space(2);
  jp::ExitOptions opt;
  opt.dt = 0.002;
  opt.horizon = 5.0;
  opt.seed = 21;
  opt.workers = 1;
  const auto box = jp::halfspace_box(0.5, 0.5);
  const auto a = jp::exit_probability_estimate(H, 0.5, make_point({0, 0.1}), box, jp::TargetSpec::anywhere(), 500, opt);
  opt.workers = 3;
  const auto b = jp::exit_probability_estimate(H, 0.5, make_point({0, 0.1}), box, jp::TargetSpec::anywhere(), 500, opt);
  EXPECT_EQ(a.probability, b.probability);
  EXPECT_EQ(a.p_half, b.p_half);
  EXPECT_GT(a.probability, 0.0);
  EXPECT_LT(a.probability, 1.0);
  const auto none = jp::exit_probability_estimate(H, 0.5, make_point({0, 0.1}), box, jp::TargetSpec::empty(), 100, opt);
  EXPECT_EQ(none.probability, 0.0);
}

TEST(SlopeFit, ExactOnPowerData) {
  std::vector<jp::SlopePoint> pts;
  for (double s : {0.01, 0.02, 0.05, 0.1, 0.2}) pts.push_back({s, 3.0 * std::pow(s, 0.7), 1.0});
  const auto f = jp::power_slope_fit(pts);
  EXPECT_NEAR(f.slope, 0.7, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(f.confidence_halfwidth, 0.0, 1e-9);
  pts.resize(2);
  EXPECT_THROW(jp::power_slope_fit(pts), jp::invalid_parameter);
}
