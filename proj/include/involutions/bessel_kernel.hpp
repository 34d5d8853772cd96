#pragma once

// The Poissonized limit of the finite model: q = Q/M^2, coordinates shifted
// by M, M -> infinity. All Bessel functions are at argument 2 sqrt(Q).

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "finite_kernel.hpp"
#include "pfaffian.hpp"
#include "skewpoly.hpp"
#include "specfun.hpp"

namespace involutions {

struct PoissonParams {
  double Q;
  double alpha;

  PoissonParams(double Q_, double alpha_) : Q(Q_), alpha(alpha_) {
    require(Q > 0.0, ErrorKind::InvalidArgument, "PoissonParams: need Q > 0");
    require(alpha >= 0.0, ErrorKind::InvalidArgument, "PoissonParams: need alpha >= 0");
  }

  /// sqrt(alpha) = 1 - 2 w / Q^{1/6}.
  static PoissonParams from_scaling(double Q, double w) {
    require(Q > 0.0, ErrorKind::InvalidArgument, "PoissonParams: need Q > 0");
    const double sa = 1.0 - 2.0 * w / std::cbrt(std::sqrt(Q));
    require(sa >= 0.0, ErrorKind::InvalidArgument, "PoissonParams::from_scaling: w too large for this Q");
    return {Q, sa * sa};
  }

  double sqrt_alpha() const { return std::sqrt(alpha); }
  double bessel_argument() const { return 2.0 * std::sqrt(Q); }
};

/// Printed: (S, I, D) as in the limit formulas, which carry 1/sqrt(alpha) in D.
/// Balanced: I / sqrt(alpha) and sqrt(alpha) D, finite at alpha = 0. The
/// quaternion determinant is the same in both.
enum class KernelGauge { Printed, Balanced };

/// The limit kernel on integer arguments in [x_lo, x_hi].
class PoissonKernel {
 public:
  PoissonKernel(const PoissonParams& p, int x_lo, int x_hi, const SeriesTolerance& tol = {})
      : p_(p), x_lo_(std::min(x_lo, x_hi)), x_hi_(std::max(x_lo, x_hi)) {
    const int reach = std::max(std::abs(x_lo_), std::abs(x_hi_)) + 2;
    J_ = BesselTable(p.bessel_argument(), reach + tol.bessel_margin(), tol);
    K_ = J_.max_order();
    const double sa = p.sqrt_alpha();
    // left(m) = sum_{j>=0} alpha^{j/2} J_{m-j} on m in [-K-2, 2K+2].
    lo_ = -K_ - 2;
    const int hi = 2 * K_ + 2;
    left_.assign(static_cast<size_t>(hi - lo_ + 1), 0.0L);
    if (p.alpha <= 1.0) {
      long double acc = 0;
      for (int m = lo_; m <= hi; ++m) {
        acc = J_(m) + sa * acc;
        left_[m - lo_] = acc;
      }
    } else {
      // sum_{k<=m} alpha^{(m-k)/2} J_k = alpha^{m/2} (e^{sqrt Q (1/sa - sa)} - sum_{k>m} alpha^{-k/2} J_k)
      const long double lsa = std::log(static_cast<long double>(sa));
      const long double total = std::exp(std::sqrt(static_cast<long double>(p.Q)) * (1.0L / sa - sa));
      std::vector<long double> tail(left_.size() + 1, 0.0L);
      for (int m = hi; m >= lo_; --m) {
        const size_t i = m - lo_;
        tail[i] = tail[i + 1] + (m + 1 <= K_ ? std::exp(-(m + 1) * lsa) * J_(m + 1) : 0.0L);
        left_[i] = std::exp(m * lsa) * (total - tail[i]);
      }
    }
    // even(m) = sum_{l>=0} J_{m+2l}
    even_.assign(left_.size() + 2, 0.0L);
    for (int m = hi; m >= lo_; --m) even_[m - lo_] = J_(m) + even_[m - lo_ + 2];
  }

  const PoissonParams& params() const { return p_; }
  double bessel(int n) const { return J_(n); }

  /// sum_{j>=0} alpha^{j/2} J_{x-j}
  long double left_sum(int m) const {
    if (m < lo_) return 0.0L;
    require(m - lo_ < static_cast<int>(left_.size()), ErrorKind::InvalidArgument, "PoissonKernel: order out of range");
    return left_[m - lo_];
  }

  /// sum_{l>=0} (J_{2l+2+y} - sqrt(alpha) J_{2l+1+y})
  long double right_sum(int y) const { return even(y + 2) - p_.sqrt_alpha() * even(y + 1); }

  /// Denominator-free S(x, y).
  double s(int x, int y) const {
    check(x, y);
    long double t = 0;
    for (int n = 1; n + std::min(x, y) <= K_; ++n) t += static_cast<long double>(J_(n + x)) * J_(n + y);
    return static_cast<double>(t - left_sum(x) * right_sum(y));
  }

  /// S(x, y) with the Christoffel-Darboux type first term (x != y).
  double s_divided(int x, int y) const {
    check(x, y);
    require(x != y, ErrorKind::InvalidArgument, "s_divided: needs x != y");
    const long double cd = std::sqrt(static_cast<long double>(p_.Q)) / (x - y) *
                           (static_cast<long double>(J_(x)) * J_(y + 1) - static_cast<long double>(J_(y)) * J_(x + 1));
    return static_cast<double>(cd - left_sum(x) * right_sum(y));
  }

  double i(int x, int y, KernelGauge g = KernelGauge::Printed) const {
    check(x, y);
    long double t = 0;
    for (int n = 1; n + std::min(x, y) <= K_; ++n)
      t += J_(n + x) * left_sum(n + y - 1) - J_(n + y) * left_sum(n + x - 1);
    const double sa = p_.sqrt_alpha();
    if (g == KernelGauge::Balanced) {
      double eps = 0;
      if (x != y) {
        const double w = std::pow(sa, std::abs(y - x) - 1);
        eps = y > x ? w : -w;
      }
      return static_cast<double>(-t) + eps;
    }
    return static_cast<double>(-sa * t) + skew_eps(x, y, p_.alpha);
  }

  double d(int x, int y, KernelGauge g = KernelGauge::Printed) const {
    check(x, y);
    const long double v = d_half(x, y) - d_half(y, x);
    if (g == KernelGauge::Balanced) return static_cast<double>(v);
    require(p_.alpha > 0.0, ErrorKind::DivergentParameter, "PoissonKernel: printed D needs alpha > 0");
    return static_cast<double>(v / p_.sqrt_alpha());
  }

  KernelBlock block(int x, int y, KernelGauge g = KernelGauge::Printed) const {
    return {s(x, y), i(x, y, g), d(x, y, g), s(y, x)};
  }

 private:
  long double even(int m) const {
    if (m < lo_) m = lo_ + ((m - lo_) % 2 == 0 ? 0 : 1);
    if (m - lo_ >= static_cast<int>(even_.size())) return 0.0L;
    return even_[m - lo_];
  }

  // sum_{l>=1} (J_{2l+x} - sa J_{2l+x+1}) sum_{j=1}^{l} (J_{2j+y-1} - sa J_{2j+y})
  long double d_half(int x, int y) const {
    const long double sa = p_.sqrt_alpha();
    long double prefix = 0, total = 0;
    for (int l = 1; 2 * l + std::min(x, y) - 1 <= K_; ++l) {
      prefix += J_(2 * l + y - 1) - sa * J_(2 * l + y);
      total += (J_(2 * l + x) - sa * J_(2 * l + x + 1)) * prefix;
    }
    return total;
  }

  void check(int x, int y) const {
    require(x >= x_lo_ && x <= x_hi_ && y >= x_lo_ && y <= x_hi_, ErrorKind::InvalidArgument,
            "PoissonKernel: argument outside the prepared range");
  }

  PoissonParams p_;
  int x_lo_, x_hi_;
  BesselTable J_;
  int K_ = 0;
  int lo_ = 0;
  std::vector<long double> left_, even_;
};

inline KernelBlock kernel_block_poisson(int x, int y, const PoissonParams& p, const SeriesTolerance& tol = {},
                                        KernelGauge g = KernelGauge::Printed) {
  return PoissonKernel(p, std::min(x, y), std::max(x, y), tol).block(x, y, g);
}

inline double rho_k_poisson(const std::vector<int>& points, const PoissonParams& p, const SeriesTolerance& tol = {}) {
  require(points.size() <= 6, ErrorKind::SizeGuard, "rho_k_poisson: at most 6 points");
  if (points.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(points.begin(), points.end());
  const PoissonKernel k(p, *lo, *hi, tol);
  const int n = static_cast<int>(points.size());
  const double v = qdet(assemble_kernel(
      n, [&](int a, int b) { return k.block(points[a], points[b], KernelGauge::Balanced); }));
  require(v >= -1e-8, ErrorKind::NearDegenerate, "rho_k_poisson: negative beyond rounding noise");
  return std::max(v, 0.0);
}

/// Density at alpha = 0: sum_{n>=1} J_{n+x}^2 - J_x sum_{m>=1} J_{x+2m}.
inline double density_alpha0(int x, double Q, const SeriesTolerance& tol = {}) {
  require(Q > 0.0, ErrorKind::InvalidArgument, "density_alpha0: need Q > 0");
  const BesselTable J(2.0 * std::sqrt(Q), std::abs(x) + 2 + tol.bessel_margin(), tol);
  long double sq = 0, odd = 0;
  for (int n = 1; n + x <= J.max_order(); ++n) sq += static_cast<long double>(J(n + x)) * J(n + x);
  for (int m = 1; x + 2 * m <= J.max_order(); ++m) odd += J(x + 2 * m);
  return static_cast<double>(sq - J(x) * odd);
}

/// The flat-substrate growth density of the column-flipped measure at
/// beta = 0, for side-by-side comparison only.
inline double density_flat_growth(int x, double Q, const SeriesTolerance& tol = {}) {
  require(Q > 0.0, ErrorKind::InvalidArgument, "density_flat_growth: need Q > 0");
  const BesselTable J(2.0 * std::sqrt(Q), std::abs(x) + 2 + tol.bessel_margin(), tol);
  long double sq = 0, odd = 0;
  for (int n = 1; n + x <= J.max_order(); ++n) sq += static_cast<long double>(J(n + x)) * J(n + x);
  for (int m = 1; x + 2 * m - 1 <= J.max_order(); ++m) odd += J(x + 2 * m - 1);
  const double parity = (x % 2 != 0) ? 1.0 : 0.0;
  return static_cast<double>(sq - J(x + 1) * (odd - parity));
}

/// <sum_j (-1)^{j-1} lambda_j> = sqrt(alpha Q).
inline double mean_fixed_points(const PoissonParams& p) { return std::sqrt(p.alpha * p.Q); }

/// Bessel forms of the scaled skew polynomials counted from the top degree,
/// at shifted argument M + x (diagnostics for the finite -> Poisson limit):
///   Rhat_{M-2n}(M+x)   -> sum_{l=0}^{M/2-n} J_{2n+2l+x} - sqrt(alpha) sum_{l=1}^{M/2-n} J_{2n+2l-1+x}
///   Rhat_{M-2n+1}(M+x) -> J_{2n-1+x} - sqrt(alpha) J_{2n+x}
///   Phihat_{M-2n}(M+x)   -> sqrt(alpha) left(2n-1+x)
///   Phihat_{M-2n+1}(M+x) -> sqrt(alpha) (left(2n-2+x) - left(2n+x))
struct ShiftedLimits {
  double r_even, r_odd, phi_even, phi_odd;
};

inline ShiftedLimits shifted_skew_limits(int M, int n, int x, const PoissonKernel& k) {
  const double sa = k.params().sqrt_alpha();
  long double re = 0;
  for (int l = 0; l <= M / 2 - n; ++l) re += k.bessel(2 * n + 2 * l + x);
  for (int l = 1; l <= M / 2 - n; ++l) re -= sa * k.bessel(2 * n + 2 * l - 1 + x);
  return {static_cast<double>(re), k.bessel(2 * n - 1 + x) - sa * k.bessel(2 * n + x),
          static_cast<double>(sa * k.left_sum(2 * n - 1 + x)),
          static_cast<double>(sa * (k.left_sum(2 * n - 2 + x) - k.left_sum(2 * n + x)))};
}

/// Max-norm distance over a grid between the finite kernel at q = Q/M^2,
/// shifted by M, and the limit kernel (both in the printed gauge).
inline double finite_to_poisson_error(int M, const PoissonParams& p, const std::vector<int>& grid,
                                      const SeriesTolerance& tol = {}) {
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  require(M + *lo >= 0, ErrorKind::InvalidArgument, "finite_to_poisson_error: grid below -M");
  const FiniteModelParams fp(M, p.Q / (static_cast<double>(M) * M), p.alpha);
  const FiniteKernel fk(fp, M + *hi, tol);
  const PoissonKernel pk(p, *lo, *hi, tol);
  double err = 0;
  for (int x : grid)
    for (int y : grid) {
      const KernelBlock a = fk.block(M + x, M + y), b = pk.block(x, y);
      err = std::max({err, std::abs(a.s - b.s), std::abs(a.i - b.i), std::abs(a.d - b.d)});
    }
  return err;
}

}  // namespace involutions
