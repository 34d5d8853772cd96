#include <gtest/gtest.h>

#include <cmath>

#include "involutions/airy_kernel.hpp"
#include "involutions/bessel_kernel.hpp"

using namespace involutions;

namespace {

// Int_{-inf}^{Y} e^{-c(Y-t)} K(X, t) dt with K from its divided-difference form.
double one_sided_k(double X, double Y, double c) {
  const quad::Rule r = quad::composite(0.0, 36.0 / c, 0.25);
  double total = 0.0;
  for (size_t k = 0; k < r.nodes.size(); ++k) {
    const double t = Y - r.nodes[k];
    const double kv = std::abs(t - X) < 1e-6 ? k_soft(X, t) : k_soft_divided(X, t);
    total += r.weights[k] * std::exp(-c * r.nodes[k]) * kv;
  }
  return total;
}

// Int_0^inf ds Int_s^inf dt (Ai(Y+s)Ai(X+t) - Ai(X+s)Ai(Y+t)).
double g_double(double X, double Y) {
  const quad::Rule r = quad::composite(0.0, 30.0 - std::min(X, Y), 0.5);
  double total = 0.0;
  for (size_t k = 0; k < r.nodes.size(); ++k) {
    const double s = r.nodes[k];
    total += r.weights[k] * (airy(Y + s) * airy_tail(X + s) - airy(X + s) * airy_tail(Y + s));
  }
  return total;
}

}  // namespace

TEST(KSoft, DiagonalAndSymmetry) {
  const double ap = airy_ai(0.0).derivative;
  EXPECT_NEAR(k_soft(0.0, 0.0), ap * ap, 1e-12);
  EXPECT_NEAR(k_soft(0.0, 0.0), 0.066986, 5e-6);
  EXPECT_NEAR(k_soft(1.0, 2.5), k_soft(2.5, 1.0), 1e-12);
  EXPECT_LT(std::abs(k_soft(8.0, 0.0)), 1e-6);
  for (double x : {-3.0, -1.0, 0.5, 2.0})
    for (double y : {-2.5, 0.0, 1.5})
      EXPECT_NEAR(k_soft(x, y), k_soft_divided(x, y), 1e-11) << x << "," << y;
  // Diagonal limit Ai'(x)^2 - x Ai(x)^2.
  for (double x : {-4.0, -1.0, 2.0}) {
    const AiryValue a = airy_ai(x);
    EXPECT_NEAR(k_soft(x, x), a.derivative * a.derivative - x * a.value * a.value, 1e-11);
  }
}

TEST(SoftEdgeParams, Identification) {
  const SoftEdgeParams p = SoftEdgeParams::from_w(0.75);
  EXPECT_DOUBLE_EQ(p.u, -3.0);
  EXPECT_DOUBLE_EQ(p.w(), 0.75);
  EXPECT_THROW(SoftEdgeParams(NAN), Error);
}

TEST(AiryBlock, ValueAtOriginWithZeroParameter) {
  const AiryBlock b = f_block(0.0, 0.0, SoftEdgeParams(0.0));
  const double ai = airy(0.0), ap = airy_ai(0.0).derivative;
  EXPECT_NEAR(b.f22, ap * ap + 0.5 * ai * (1.0 - 1.0 / 3.0), 1e-10);
  EXPECT_NEAR(b.f22, 0.185329, 5e-6);
  EXPECT_EQ(b.f21, 0.0);
  EXPECT_EQ(b.f12, 0.0);
}

TEST(AiryBlock, ZeroParameterClosedForm) {
  const SoftEdgeParams p(0.0);
  for (double X : {-1.5, 0.4})
    for (double Y : {-0.5, 1.2}) {
      const double expect = k_soft(X, Y) + 0.5 * airy(Y) * (1.0 - airy_tail(X));
      EXPECT_NEAR(f_block(X, Y, p).f22, expect, 1e-10);
    }
}

TEST(AiryBlock, SelfDualityAndAntisymmetry) {
  for (double u : {0.0, -2.0, 1.0}) {
    const SoftEdgeParams p(u);
    const std::vector<double> grid{-2.0, -0.5, 0.0, 1.0, 2.5};
    const AiryKernel k(grid, p);
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        const AiryBlock x = k.block(a, b), y = k.block(b, a);
        EXPECT_NEAR(x.f11, y.f22, 1e-10);
        EXPECT_NEAR(x.f12, -y.f12, 1e-10);
        EXPECT_NEAR(x.f21, -y.f21, 1e-10);
      }
  }
  const SoftEdgeParams p(-2.0);
  EXPECT_NEAR(f_block(0.0, 1.0, p).f12, -f_block(1.0, 0.0, p).f12, 1e-9);
  EXPECT_EQ(f_block(0.7, 0.7, SoftEdgeParams(0.0)).f21, 0.0);
}

TEST(AiryBlock, F22DualForms) {
  for (double u : {-1.0, -4.0}) {
    const SoftEdgeParams p(u);
    for (double X : {-2.0, 0.0, 2.0})
      for (double Y : {-2.0, 0.0, 2.0})
        EXPECT_NEAR(f_block(X, Y, p).f22, f22_printed(X, Y, p), 1e-7) << u << " " << X << "," << Y;
  }
  try {
    f22_printed(0.0, 0.0, SoftEdgeParams(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivergentParameter);
  }
}

TEST(AiryBlock, F21AgainstOneSidedIntegrals) {
  for (double u : {-1.0, -3.0}) {
    const SoftEdgeParams p(u);
    const double c = p.c();
    for (auto [X, Y] : {std::pair{0.0, 1.0}, {-1.5, 0.5}, {2.0, -1.0}}) {
      const double d = X - Y;
      const double expect = -std::exp(-c * std::abs(d)) * (d > 0 ? 1.0 : -1.0) -
                            (one_sided_k(X, Y, c) - one_sided_k(Y, X, c));
      EXPECT_NEAR(f_block(X, Y, p).f21, expect, 1e-8) << X << "," << Y;
    }
  }
}

TEST(AiryBlock, F12AgainstDifferentiatedDoubleIntegral) {
  // f12 = 1/4 (u/2 + d_X)(u/2 + d_Y) G by central differences.
  for (double u : {0.0, -2.0, 1.0}) {
    const double half = u / 2, h = 1e-3;
    for (auto [X, Y] : {std::pair{0.0, 1.0}, {-1.0, 0.5}}) {
      const double g = g_double(X, Y);
      const double gx = (g_double(X + h, Y) - g_double(X - h, Y)) / (2 * h);
      const double gy = (g_double(X, Y + h) - g_double(X, Y - h)) / (2 * h);
      const double gxy = (g_double(X + h, Y + h) - g_double(X + h, Y - h) - g_double(X - h, Y + h) +
                          g_double(X - h, Y - h)) / (4 * h * h);
      const double expect = 0.25 * (half * half * g + half * (gx + gy) + gxy);
      EXPECT_NEAR(f_block(X, Y, SoftEdgeParams(u)).f12, expect, 2e-6) << u << " " << X << "," << Y;
    }
  }
}

TEST(AiryBlock, BesselLimitOfAllEntries) {
  // Q^{1/6} S, Q^{1/3} D and I of the Poisson kernel against f22, f12, f21.
  const double w = 0.5;
  const SoftEdgeParams sp = SoftEdgeParams::from_w(w);
  std::vector<std::array<double, 3>> err;
  for (double Q : {1e3, 1e4, 1e5, 1e6}) {
    const PoissonParams pp = PoissonParams::from_scaling(Q, w);
    const double c = 2 * std::sqrt(Q), q6 = std::pow(Q, 1.0 / 6);
    const int x = static_cast<int>(std::lround(c)), y = static_cast<int>(std::lround(c + q6));
    const PoissonKernel k(pp, x, y);
    const AiryBlock f = f_block((x - c) / q6, (y - c) / q6, sp);
    err.push_back({std::abs(q6 * k.s(x, y) - f.f22), std::abs(q6 * q6 * k.d(x, y) - f.f12),
                   std::abs(k.i(x, y) - f.f21)});
  }
  for (size_t n = 1; n < err.size(); ++n)
    for (int e = 0; e < 3; ++e) EXPECT_LT(err[n][e], err[n - 1][e]) << n << " " << e;
  EXPECT_LT(err.back()[0], 5e-3);
  EXPECT_LT(err.back()[1], 1e-3);
  EXPECT_LT(err.back()[2], 3e-2);
  const double slope = std::log(err[2][0] / err[0][0]) / std::log(100.0);
  EXPECT_GT(slope, -0.25);
  EXPECT_LT(slope, -0.08);
}

TEST(RhoScaled, LowOrders) {
  const SoftEdgeParams p(-1.0);
  EXPECT_NEAR(rho_k_scaled({0.3}, p), f_block(0.3, 0.3, p).f11, 1e-12);
  EXPECT_EQ(rho_k_scaled({0.3, 0.3}, p), 0.0);
  EXPECT_LT(rho_k_scaled({0.3, 0.3 + 1e-4}, p), 1e-5);
  const AiryBlock xx = f_block(0.5, 0.5, p), yy = f_block(-0.5, -0.5, p);
  const AiryBlock xy = f_block(0.5, -0.5, p), yx = f_block(-0.5, 0.5, p);
  const double two = xx.f11 * yy.f11 - xy.f11 * yx.f11 + xy.f12 * xy.f21;
  EXPECT_NEAR(rho_k_scaled({0.5, -0.5}, p), two, 1e-10);
  EXPECT_EQ(rho_k_scaled({}, p), 1.0);
  EXPECT_THROW(rho_k_scaled({1, 2, 3, 4, 5, 6, 7}, p), Error);
}

TEST(JointDistribution, BasicShape) {
  const SoftEdgeParams p(0.0);
  EXPECT_NEAR(joint_distribution(ScaledWindow({12.0}), p, 4).value, 1.0, 1e-12);
  double prev = 0.0;
  for (double s = -4.0; s <= 3.0; s += 0.5) {
    const JointDistribution f = joint_distribution(ScaledWindow({s}), p, 12);
    EXPECT_GE(f.value, prev - 1e-9);
    EXPECT_GE(f.value, -1e-6);
    EXPECT_LE(f.value, 1.0 + 1e-6);
    EXPECT_NEAR(f.value, joint_distribution_exact(ScaledWindow({s}), p).value, 1e-9);
    prev = f.value;
  }
}

TEST(JointDistribution, TwoThresholds) {
  const SoftEdgeParams p = SoftEdgeParams::from_w(0.5);
  const double one = joint_distribution_exact(ScaledWindow({0.0}), p).value;
  const double two = joint_distribution_exact(ScaledWindow({0.0, -1.0}), p).value;
  EXPECT_LT(two, one);
  EXPECT_NEAR(joint_distribution(ScaledWindow({0.0, -1.0}), p, 12).value, two, 1e-9);
  EXPECT_NEAR(joint_distribution_exact(ScaledWindow({0.0, -1e-7}), p).value, one, 1e-6);
  EXPECT_GT(joint_distribution_exact(ScaledWindow({0.0, -0.5}), p).value, two);
  EXPECT_GT(joint_distribution_exact(ScaledWindow({0.5, -1.0}), p).value, two);
  const double three = joint_distribution_exact(ScaledWindow({0.0, -1.0, -1.5}), p).value;
  EXPECT_LT(three, two);
  EXPECT_NEAR(joint_distribution(ScaledWindow({0.0, -1.0, -1.5}), p, 12).value, three, 1e-9);
}

TEST(JointDistribution, Errors) {
  const SoftEdgeParams p(0.0);
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind([&] { joint_distribution(ScaledWindow({0.0}), p, 13); }), ErrorKind::SizeGuard);
  EXPECT_EQ(kind([&] { joint_distribution(ScaledWindow({-2.0}), p, 1); }), ErrorKind::TailNotConverged);
  EXPECT_EQ(kind([&] { joint_distribution_exact(ScaledWindow({-4.0}, 8), p); }), ErrorKind::QuadratureNotConverged);
  EXPECT_THROW(ScaledWindow({0.0, 0.0}), Error);
  EXPECT_THROW(ScaledWindow({0.0}, 32, 4.0), Error);
  EXPECT_THROW(ScaledWindow({3, 2, 1, 0}), Error);
}

TEST(JointDistribution, LargeParameterSelfConvergence) {
  // Successive doublings of w move the distribution by shrinking amounts.
  double d48 = 0, d816 = 0;
  for (double s : {-4.0, -3.0, -1.5, 0.5}) {
    const double f4 = joint_distribution_exact(ScaledWindow({s}), SoftEdgeParams::from_w(4)).value;
    const double f8 = joint_distribution_exact(ScaledWindow({s}), SoftEdgeParams::from_w(8)).value;
    const double f16 = joint_distribution_exact(ScaledWindow({s}, 64), SoftEdgeParams::from_w(16)).value;
    EXPECT_LE(f4, f8 + 1e-9);
    EXPECT_LE(f8, f16 + 1e-9);
    d48 = std::max(d48, std::abs(f8 - f4));
    d816 = std::max(d816, std::abs(f16 - f8));
  }
  EXPECT_LT(d816, 0.6 * d48);
}

TEST(JointDistribution, LargeParameterSupNormBelowOnePercent) {
  double sup = 0;
  for (double s = -4.0; s <= 2.0; s += 0.5) {
    const double f4 = joint_distribution_exact(ScaledWindow({s}), SoftEdgeParams::from_w(4)).value;
    const double f8 = joint_distribution_exact(ScaledWindow({s}), SoftEdgeParams::from_w(8)).value;
    sup = std::max(sup, std::abs(f8 - f4));
  }
  EXPECT_LT(sup, 0.01);
}

TEST(TailBound, FittedConstant) {
  const SoftEdgeParams p(0.0);
  const double m = fit_tail_constant(p, 0.0, 2, 6, 1.0);
  EXPECT_GT(m, 0.0);
  const TailBoundReport r1 = tail_bound_check({5.0}, p, m);
  EXPECT_TRUE(r1.holds);
  EXPECT_LE(r1.rho * std::exp(5.0), m);
  for (double x : {0.5, 1.5, 3.5})
    for (double y : {0.25, 2.75, 4.5}) {
      const TailBoundReport r2 = tail_bound_check({x, y}, p, m);
      EXPECT_LE(r2.rho / (std::exp(-x - y) * 2 * m * m), 1.0) << x << "," << y;
    }
  const TailBoundReport r0 = tail_bound_check({}, p, m);
  EXPECT_TRUE(r0.holds);
  EXPECT_DOUBLE_EQ(r0.envelope, 1.0);
}
