#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gaplab/quadrature.hpp"

TEST(GaussLegendre, WeightsSumToTwoAndNodesSymmetric) {
  for (int n : {1, 2, 5, 24, 60}) {
    const auto r = gaplab::gauss_legendre(n);
    double s = 0.0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, 2.0, 1e-14);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(r.nodes[i], -r.nodes[n - 1 - i], 1e-15);
  }
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
  for (int n : {3, 8, 24}) {
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = (d % 2 == 1) ? 0.0 : 2.0 / (d + 1);
      EXPECT_NEAR(gaplab::integrate_gl([d](double x) { return std::pow(x, d); }, -1.0, 1.0, n), exact, 1e-13);
    }
  }
}

TEST(GaussLegendre, ThreePointRuleKnownNodes) {
  const auto r = gaplab::gauss_legendre(3);
  EXPECT_NEAR(r.nodes[2], std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(r.weights[1], 8.0 / 9.0, 1e-15);
}

TEST(Quadrature, CompositeHandlesSmoothIntegrand) {
  const double v = gaplab::integrate_composite([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 12);
  EXPECT_NEAR(v, std::sqrt(std::numbers::pi), 1e-13);
}

TEST(PlanarDomain, AreasAndNodes) {
  const auto hd = gaplab::half_disk({1.0, 2.0}, 3.0);
  EXPECT_NEAR(hd.area(), 0.5 * std::numbers::pi * 9.0, 1e-13);
  const auto fd = gaplab::full_disk({0.0, 0.0}, 2.0);
  double s = 0.0, m2 = 0.0;
  for (auto [z, w] : fd.nodes(16)) {
    s += w;
    m2 += w * std::norm(z);
  }
  EXPECT_NEAR(s, 4.0 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(m2, std::numbers::pi * 16.0 / 2.0, 1e-11);  // ∫|z|² = π r⁴/2
  const auto moved = fd.translated({1.0, 1.0});
  for (auto [z, w] : moved.nodes(4)) EXPECT_LE(std::abs(z - std::complex<double>(1.0, 1.0)), 2.0 + 1e-12);
}

TEST(PlanarDomain, UniformMapStaysInside) {
  const auto hd = gaplab::half_disk({0.0, 0.0}, 1.0);
  for (double u : {0.01, 0.5, 0.99})
    for (double v : {0.01, 0.5, 0.99}) {
      const auto z = hd.map_uniform(0.5, u, v);
      EXPECT_LE(std::abs(z), 1.0 + 1e-14);
    }
}

TEST(MonteCarlo, ProductIntegralWithinErrorBars) {
  // ∫_{D(0,1)} ∫_{D(0,1)} |z - w|² = 2 · π · π/2 = π².
  const std::vector<gaplab::PlanarDomain> f{gaplab::full_disk({}, 1.0), gaplab::full_disk({}, 1.0)};
  const auto est = gaplab::monte_carlo_product(
      f, [](const std::vector<std::complex<double>>& p) { return std::norm(p[0] - p[1]); }, 1 << 16, 17);
  const double exact = std::numbers::pi * std::numbers::pi;
  EXPECT_GT(est.standard_error, 0.0);
  EXPECT_NEAR(est.value, exact, 4 * est.standard_error);
}

TEST(MonteCarlo, DeterministicForFixedSeed) {
  const std::vector<gaplab::PlanarDomain> f{gaplab::half_disk({}, 1.0)};
  auto g = [](const std::vector<std::complex<double>>& p) { return p[0].real(); };
  EXPECT_EQ(gaplab::monte_carlo_product(f, g, 4096, 5).value, gaplab::monte_carlo_product(f, g, 4096, 5).value);
}
