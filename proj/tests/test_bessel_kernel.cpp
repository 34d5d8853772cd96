#include <gtest/gtest.h>

#include "involutions/bessel_kernel.hpp"

using namespace involutions;

TEST(PoissonKernel, DenominatorFreeFormAgrees) {
  const PoissonParams p(4.0, 0.5);
  const PoissonKernel k(p, -3, 6);
  EXPECT_NEAR(k.s(1, 3), k.s_divided(1, 3), 1e-9);
  for (int x : {-2, 0, 1, 3, 5})
    for (int y : {-2, 0, 1, 3, 5})
      if (x != y) EXPECT_NEAR(k.s(x, y), k.s_divided(x, y), 1e-9) << x << "," << y;
}

TEST(PoissonKernel, Antisymmetry) {
  for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
    const PoissonParams p(6.0, alpha);
    const PoissonKernel k(p, -4, 6);
    for (int x = -4; x <= 6; x += 2)
      for (int y = -3; y <= 6; y += 3) {
        EXPECT_NEAR(k.i(x, y, KernelGauge::Balanced), -k.i(y, x, KernelGauge::Balanced), 1e-10);
        EXPECT_NEAR(k.d(x, y, KernelGauge::Balanced), -k.d(y, x, KernelGauge::Balanced), 1e-10);
      }
    EXPECT_EQ(k.d(2, 2, KernelGauge::Balanced), 0.0);
    EXPECT_EQ(k.i(2, 2, KernelGauge::Balanced), 0.0);
  }
}

TEST(PoissonKernel, GaugesGiveSameCorrelations) {
  const PoissonParams p(5.0, 0.7);
  const PoissonKernel k(p, -3, 4);
  const std::vector<int> pts{-3, 0, 1, 4};
  for (KernelGauge g : {KernelGauge::Printed, KernelGauge::Balanced}) {
    const double v = qdet(assemble_kernel(4, [&](int a, int b) { return k.block(pts[a], pts[b], g); }));
    EXPECT_NEAR(v, rho_k_poisson(pts, p), 1e-12);
  }
  EXPECT_THROW(PoissonKernel(PoissonParams(5.0, 0.0), 0, 1).d(0, 1), Error);
}

TEST(PoissonKernel, ResummedLeftSumForLargeAlpha) {
  for (double alpha : {1.0, 1.5, 3.0}) {
    const PoissonKernel k(PoissonParams(4.0, alpha), -5, 8);
    for (int m : {-6, 0, 3, 9}) {
      long double direct = 0;
      for (int j = 0; j < 300; ++j) direct += std::pow(std::sqrt(alpha), j) * k.bessel(m - j);
      EXPECT_NEAR(static_cast<double>(k.left_sum(m)), static_cast<double>(direct), 1e-12 * std::max(1.0L, std::abs(direct)));
    }
  }
}

TEST(PoissonKernel, FiniteModelConverges) {
  const PoissonParams p(4.0, 0.5);
  double prev = 1e300;
  for (int M : {50, 100, 200}) {
    const double e = finite_to_poisson_error(M, p, {-2, 0, 2});
    EXPECT_LT(e, prev) << M;
    prev = e;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(PoissonKernel, ShiftedSkewPolynomialLimits) {
  // Fixed distance from the top degree, growing M: errors shrink.
  const PoissonParams p(4.0, 0.5);
  const PoissonKernel k(p, -4, 4);
  for (int n : {1, 2}) {
    double prev = 1e300;
    for (int M : {50, 100, 200}) {
      const SkewTable t(SkewParams(p.Q / (double(M) * M), p.alpha), M + 1, M + 10);
      double err = 0;
      for (int x : {-2, 0, 3}) {
        const ShiftedLimits lim = shifted_skew_limits(M, n, x, k);
        err = std::max({err, std::abs(static_cast<double>(t.rhat(M - 2 * n, M + x)) - lim.r_even),
                        std::abs(static_cast<double>(t.rhat(M - 2 * n + 1, M + x)) - lim.r_odd),
                        std::abs(static_cast<double>(t.phihat(M - 2 * n, M + x)) - lim.phi_even),
                        std::abs(static_cast<double>(t.phihat(M - 2 * n + 1, M + x)) - lim.phi_odd)});
      }
      EXPECT_LT(err, prev) << "n=" << n << " M=" << M;
      prev = err;
    }
    EXPECT_LT(prev, 5e-2);
  }
}

TEST(PoissonDensity, AlphaZeroValue) {
  const PoissonParams p(1.0, 0.0);
  EXPECT_NEAR(rho_k_poisson({0}, p), 0.38805, 5e-6);
  for (int x : {-3, -1, 0, 1, 2, 5}) EXPECT_NEAR(rho_k_poisson({x}, p), density_alpha0(x, 1.0), 1e-9);
  EXPECT_NEAR(density_alpha0(0, 1.0), 0.3880546104, 1e-9);
}

TEST(PoissonDensity, DecayAndFilling) {
  for (double Q : {1.0, 9.0, 25.0}) {
    const int far = static_cast<int>(std::ceil(4 * std::sqrt(Q))) + 4;
    EXPECT_LT(density_alpha0(far, Q), 1e-10);
    EXPECT_LT(rho_k_poisson({far}, PoissonParams(Q, 0.8)), 1e-5);  // geometric, not Bessel, decay at alpha > 0
    EXPECT_NEAR(rho_k_poisson({-far - 10}, PoissonParams(Q, 0.8)), 1.0, 1e-9);
  }
}

TEST(PoissonDensity, FlatGrowthComparatorIsADifferentMeasure) {
  // Reported only: the two densities come from different measures.
  double diff = 0;
  for (int x = -3; x <= 3; ++x) {
    const double a = density_alpha0(x, 4.0), b = density_flat_growth(x, 4.0);
    EXPECT_TRUE(std::isfinite(b));
    diff = std::max(diff, std::abs(a - b));
  }
  RecordProperty("max_density_difference", std::to_string(diff));
}

TEST(PoissonCorrelations, PairEnvelope) {
  const PoissonParams p(9.0, 0.6);
  const PoissonKernel k(p, -4, 4);
  for (int x = -4; x <= 4; ++x)
    for (int y = -4; y <= 4; ++y) {
      if (x == y) continue;
      const double r2 = rho_k_poisson({x, y}, p);
      const double r1x = rho_k_poisson({x}, p), r1y = rho_k_poisson({y}, p);
      const double cross = std::abs(k.s(x, y) * k.s(y, x)) +
                           std::abs(k.i(x, y, KernelGauge::Balanced) * k.d(x, y, KernelGauge::Balanced));
      EXPECT_LE(r2, r1x * r1y + cross + 1e-12);
      EXPECT_GE(r2, 0.0);
    }
  EXPECT_NEAR(rho_k_poisson({1, 1}, p), 0.0, 1e-12);
  EXPECT_NEAR(rho_k_poisson({2}, p), k.s(2, 2), 1e-15);
}

TEST(PoissonParams, MeanFixedPointsAndScaling) {
  EXPECT_EQ(mean_fixed_points(PoissonParams(7.0, 0.0)), 0.0);
  EXPECT_NEAR(mean_fixed_points(PoissonParams(100.0, 1.0)), 10.0, 1e-14);
  const PoissonParams s = PoissonParams::from_scaling(1e3, 0.5);
  EXPECT_NEAR(s.sqrt_alpha(), 1.0 - 1.0 / std::pow(1e3, 1.0 / 6.0), 1e-14);
  EXPECT_THROW(PoissonParams::from_scaling(1.0, 2.0), Error);
  EXPECT_THROW(PoissonParams(0.0, 1.0), Error);
}
