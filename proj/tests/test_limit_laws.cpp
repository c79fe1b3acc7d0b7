#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "gaplab/limit_laws.hpp"

using namespace gaplab;
using boost::math::quadrature::gauss_kronrod;

TEST(LimitLaw, DensityIntegratesToOne) {
  for (int q : {3, 4})
    for (int k = 1; k <= 5; ++k) {
      const LimitLaw law(q, k);
      auto f = [&](double x) { return law.density(x); };
      const double mass = gauss_kronrod<double, 61>::integrate(f, 0.0, 4.0, 15, 1e-14);
      EXPECT_NEAR(mass, 1.0, 1e-8) << q << " " << k;
      EXPECT_NEAR(law.normalization(), q / std::tgamma(k), 1e-14);
    }
}

TEST(LimitLaw, CdfIsIntegralOfDensity) {
  for (int q : {3, 4})
    for (int k = 1; k <= 5; ++k) {
      const LimitLaw law(q, k);
      auto f = [&](double x) { return law.density(x); };
      for (double x : {0.3, 0.8, 1.2, 2.0}) {
        const double integral = gauss_kronrod<double, 61>::integrate(f, 0.0, x, 10, 1e-14);
        EXPECT_NEAR(law.cdf(x), integral, 1e-10);
        const double h = 1e-5;
        EXPECT_NEAR((law.cdf(x + h) - law.cdf(x - h)) / (2 * h), law.density(x), 1e-6);
      }
    }
}

TEST(LimitLaw, KnownValues) {
  const LimitLaw l14(4, 1), l13(3, 1), l23(3, 2);
  EXPECT_NEAR(kth_gap_cdf(l14, std::pow(std::log(2.0), 0.25)), 0.5, 1e-14);
  EXPECT_NEAR(std::pow(std::log(2.0), 0.25), 0.91244, 1e-5);
  EXPECT_EQ(kth_gap_cdf(l13, 0.0), 0.0);
  for (double x : {0.2, 1.0, 1.7}) {
    EXPECT_NEAR(kth_gap_cdf(l23, x), 1 - (1 + x * x * x) * std::exp(-x * x * x), 1e-14);
    auto f = [](double t) { return 3 * std::pow(t, 5) * std::exp(-t * t * t); };
    EXPECT_NEAR(kth_gap_cdf(l23, x), (gauss_kronrod<double, 61>::integrate(f, 0.0, x, 10, 1e-14)), 1e-12);
  }
  EXPECT_THROW(kth_gap_cdf(l14, -0.1), std::invalid_argument);
}

TEST(LimitLaw, MonotoneWithLimits) {
  const LimitLaw law(3, 3);
  double prev = 0.0;
  for (double x = 0.0; x < 4.0; x += 0.01) {
    const double c = law.cdf(x);
    EXPECT_GE(c, prev);
    prev = c;
  }
  EXPECT_NEAR(law.cdf(5.0), 1.0, 1e-14);
}

TEST(Intensity, FullDiskFormulas) {
  const double s = 1.7;
  IntensityQuery g{IntensityEnsemble::Ginibre, LengthSet::interval(0, s), Region::disk(0.0, 3.0)};
  EXPECT_NEAR(poisson_intensity(g), std::pow(s, 4) / 4, 1e-13);
  g.region = Region::everything();
  EXPECT_NEAR(poisson_intensity(g), std::pow(s, 4) / 4, 1e-13);
  IntensityQuery d{IntensityEnsemble::IidDisk, LengthSet::interval(0, s), Region::everything()};
  EXPECT_NEAR(poisson_intensity(d), s * s / 2, 1e-13);
  g.lengths = LengthSet();
  EXPECT_EQ(poisson_intensity(g), 0.0);
}

TEST(Intensity, PartialRegions) {
  IntensityQuery g{IntensityEnsemble::Ginibre, LengthSet::interval(0, std::pow(6.25, 0.25)), Region::disk(0.0, 0.8)};
  EXPECT_NEAR(poisson_intensity(g), 1.0, 1e-13);
  g.region = Region::rect(0.0, 2.0, 0.0, 2.0);  // a quarter of the disk
  EXPECT_NEAR(poisson_intensity(g), 0.25 * 6.25 / 4, 1e-13);
}

TEST(Intensity, WishartByQuadrature) {
  const auto g = DensityFn::marchenko_pastur(2.0);
  IntensityQuery w{IntensityEnsemble::Wishart, LengthSet::interval(0, 1.0), Region::interval(0.5, 2.0), 2.0};
  auto g4 = [&](double x) { return std::pow(g(x), 4); };
  const double want = std::numbers::pi * std::numbers::pi / 3 / 3 *
                      gauss_kronrod<double, 61>::integrate(g4, 0.5, 2.0, 10, 1e-14);
  EXPECT_NEAR(poisson_intensity(w), want, 1e-10 * want);
  w.region = Region::interval(g.lower(), 2.0);
  EXPECT_THROW(poisson_intensity(w), std::invalid_argument);
  IntensityQuery u{IntensityEnsemble::UUE, LengthSet::interval(0, 1.0), Region::interval(-1, 1)};
  EXPECT_THROW(poisson_intensity(u), std::invalid_argument);
  u.psi = DensityFn::semicircle();
  EXPECT_GT(poisson_intensity(u), 0.0);
}

TEST(JointBox, Examples) {
  EXPECT_NEAR(joint_box_probability({0.3, 0.9}, 4), std::exp(-std::pow(0.3, 4)) - std::exp(-std::pow(0.9, 4)), 1e-15);
  const double want = (std::exp(-std::pow(0.6, 4)) - std::exp(-std::pow(0.8, 4))) * (std::pow(0.4, 4) - std::pow(0.2, 4));
  EXPECT_NEAR(joint_box_probability({0.2, 0.4, 0.6, 0.8}, 4), want, 1e-15);
  EXPECT_NEAR(joint_box_probability({0.2, 0.2 + 1e-12, 0.6, 0.8}, 3), 0.0, 1e-11);
  EXPECT_THROW(joint_box_probability({0.2, 0.6, 0.4, 0.8}, 4), std::invalid_argument);
  EXPECT_THROW(joint_box_probability({0.2, 0.4, 0.6}, 4), std::invalid_argument);
}
