#pragma once

// Integer-order Bessel J, Airy Ai/Ai', Airy tail transforms, and the
// large-order Bessel->Airy uniform approximation.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace involutions {

/// Controls truncation of every infinite sum in the library.
struct SeriesTolerance {
  double abs_tol = 1e-14;
  int max_terms = 200000;

  SeriesTolerance() = default;
  SeriesTolerance(double tol, int terms) : abs_tol(tol), max_terms(terms) {
    require(abs_tol > 0.0, ErrorKind::InvalidArgument, "SeriesTolerance: abs_tol must be > 0");
    require(max_terms >= 8, ErrorKind::InvalidArgument, "SeriesTolerance: max_terms must be >= 8");
  }

  /// Orders beyond argument + margin contribute below abs_tol.
  int bessel_margin() const {
    return 40 + static_cast<int>(std::ceil(10.0 * std::log10(1.0 / std::min(abs_tol, 0.1))));
  }
};

// ---------------------------------------------------------------------------
// Bessel J
// ---------------------------------------------------------------------------

/// J_n(x) for all integer n at one fixed x >= 0, by Miller backward
/// recurrence normalised with J_0 + 2 sum J_{2k} = 1. Orders beyond the
/// stored range are below tolerance and read as zero.
class BesselTable {
 public:
  BesselTable() = default;

  BesselTable(double x, int min_order, const SeriesTolerance& tol = {}) : x_(x) {
    require(x >= 0.0, ErrorKind::InvalidArgument, "BesselTable: argument must be >= 0");
    const int cut = static_cast<int>(std::ceil(x)) + tol.bessel_margin();
    n_max_ = std::max(min_order, cut);
    values_.assign(static_cast<size_t>(n_max_) + 1, 0.0);
    if (x == 0.0) {
      values_[0] = 1.0;
      return;
    }
    const double big = std::max<double>(n_max_, x);
    int start = static_cast<int>(big + 30 + std::sqrt(60.0 * big));
    start += start % 2;
    // Long double keeps the accumulated rounding of long recurrences small.
    std::vector<long double> work(values_.size(), 0.0L);
    long double jp1 = 0.0L, j = 1e-280L, norm = 0.0L;
    const long double two_over_x = 2.0L / x;
    for (int k = start; k >= 1; --k) {
      // j holds J_k, jp1 holds J_{k+1}; produce J_{k-1}.
      const long double jm1 = k * two_over_x * j - jp1;
      jp1 = j;
      j = jm1;
      if (k - 1 <= n_max_) work[k - 1] = jm1;
      if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * jm1;
      if (std::abs(j) > 1e250L) {
        const long double s = 1e-250L;
        j *= s;
        jp1 *= s;
        norm *= s;
        for (int m = k - 1; m <= n_max_; ++m) work[m] *= s;
      }
    }
    norm += j;  // J_0
    for (size_t i = 0; i < work.size(); ++i) values_[i] = static_cast<double>(work[i] / norm);
  }

  double argument() const { return x_; }
  int max_order() const { return n_max_; }

  double operator()(long n) const {
    const long a = n < 0 ? -n : n;
    if (a > n_max_) return 0.0;
    const double v = values_[static_cast<size_t>(a)];
    return (n < 0 && (a % 2 == 1)) ? -v : v;
  }

 private:
  double x_ = 0.0;
  int n_max_ = 0;
  std::vector<double> values_;
};

/// J_order(arg), arg >= 0; negative orders via J_{-n} = (-1)^n J_n.
inline double bessel_j(int order, double arg) {
  require(arg >= 0.0, ErrorKind::InvalidArgument, "bessel_j: argument must be >= 0");
  const int a = order < 0 ? -order : order;
  if (arg == 0.0) return a == 0 ? 1.0 : 0.0;
  return BesselTable(arg, a)(order);
}

// ---------------------------------------------------------------------------
// Airy
// ---------------------------------------------------------------------------

struct AiryValue {
  double value;
  double derivative;
};

namespace detail {

inline constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
inline constexpr long double kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)

inline AiryValue airy_maclaurin(double xd) {
  const long double x = xd, x3 = x * x * x;
  long double f = 1, g = x, fp = 0, gp = 1;
  long double t = 1, u = x, d = x * x / 2, e = 1;
  fp = d;
  for (int k = 1; k < 200; ++k) {
    t *= x3 / ((3.0L * k - 1) * (3.0L * k));
    u *= x3 / ((3.0L * k) * (3.0L * k + 1));
    e *= x3 / ((3.0L * k - 2) * (3.0L * k));
    f += t;
    g += u;
    gp += e;
    if (k >= 2) {
      d *= x3 / ((3.0L * k - 3) * (3.0L * k - 1));
      fp += d;
    }
    const long double mag = std::abs(t) + std::abs(u) + std::abs(d) + std::abs(e);
    if (mag < 1e-22L * (std::abs(f) + std::abs(g) + 1e-300L) && k > 3) break;
  }
  return {static_cast<double>(kAi0 * f - kAip0 * g), static_cast<double>(kAi0 * fp - kAip0 * gp)};
}

// Debye coefficients u_k, v_k of the Airy asymptotic expansions.
inline const std::vector<long double>& airy_u() {
  static const std::vector<long double> u = [] {
    std::vector<long double> c(60);
    c[0] = 1;
    for (int k = 1; k < 60; ++k)
      c[k] = c[k - 1] * (6.0L * k - 5) * (6.0L * k - 3) * (6.0L * k - 1) / ((2.0L * k - 1) * 216.0L * k);
    return c;
  }();
  return u;
}

inline long double airy_v(int k) {
  return k == 0 ? 1.0L : -(6.0L * k + 1) / (6.0L * k - 1) * airy_u()[k];
}

inline AiryValue airy_decaying(double xd) {
  const long double x = xd, zeta = 2.0L / 3.0L * x * std::sqrt(x);
  const long double pre = std::exp(-zeta) / (2.0L * std::sqrt(std::numbers::pi_v<long double>));
  long double su = 0, sv = 0, p = 1, last = 1e300L;
  for (int k = 0; k < 60; ++k) {
    const long double tu = airy_u()[k] * p, tv = airy_v(k) * p;
    if (std::abs(tu) > last) break;
    last = std::abs(tu);
    su += tu;
    sv += tv;
    if (std::abs(tu) < 1e-20L) break;
    p *= -1.0L / zeta;
  }
  const long double q = std::sqrt(std::sqrt(x));
  return {static_cast<double>(pre / q * su), static_cast<double>(-pre * q * sv)};
}

inline AiryValue airy_oscillatory(double xd) {
  const long double z = -xd, zeta = 2.0L / 3.0L * z * std::sqrt(z);
  long double pe = 0, po = 0, qe = 0, qo = 0, p = 1, last = 1e300L;
  for (int k = 0; k < 60; ++k) {
    const long double tu = airy_u()[k] * p, tv = airy_v(k) * p;
    if (std::abs(tu) > last) break;
    last = std::abs(tu);
    // alternating signs (-1)^{floor(k/2)} on even/odd families
    const long double sgn = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      pe += sgn * tu;
      qe += sgn * tv;
    } else {
      po += sgn * tu;
      qo += sgn * tv;
    }
    if (std::abs(tu) < 1e-20L) break;
    p /= zeta;
  }
  const long double th = zeta + std::numbers::pi_v<long double> / 4;
  const long double s = std::sin(th), c = std::cos(th);
  const long double rp = 1.0L / std::sqrt(std::numbers::pi_v<long double>);
  const long double q = std::sqrt(std::sqrt(z));
  const long double ai = rp / q * (s * pe - c * po);
  const long double aip = -rp * q * (c * qe + s * qo);
  return {static_cast<double>(ai), static_cast<double>(aip)};
}

// Integrates y'' = x y from (x0, y, y') to x1 by local Taylor series.
inline AiryValue airy_taylor_walk(double x0, AiryValue start, double x1) {
  long double y = start.value, yp = start.derivative, c = x0;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(x1 - x0) / 0.25)));
  const long double h = (static_cast<long double>(x1) - x0) / steps;
  for (int s = 0; s < steps; ++s) {
    long double a[64];
    a[0] = y;
    a[1] = yp;
    a[2] = c * a[0] / 2;
    for (int k = 1; k + 2 < 64; ++k) a[k + 2] = (c * a[k] + a[k - 1]) / ((k + 2.0L) * (k + 1.0L));
    long double ny = 0, nyp = 0, hp = 1;
    for (int k = 0; k < 64; ++k) {
      ny += a[k] * hp;
      if (k + 1 < 64) nyp += (k + 1) * a[k + 1] * hp;
      hp *= h;
    }
    y = ny;
    yp = nyp;
    c += h;
  }
  return {static_cast<double>(y), static_cast<double>(yp)};
}

}  // namespace detail

/// (Ai(x), Ai'(x)). Absolute error around 1e-13 for x >= -10; the
/// oscillatory expansion covers x < -9 as best effort further out.
inline AiryValue airy_ai(double x) {
  if (x > 8.0) return detail::airy_decaying(x);
  if (x >= -5.0) return detail::airy_maclaurin(x);
  if (x >= -9.0) return detail::airy_taylor_walk(-5.0, detail::airy_maclaurin(-5.0), x);
  return detail::airy_oscillatory(x);
}

inline double airy(double x) { return airy_ai(x).value; }

/// T_c(z) = int_0^inf e^{c r} Ai(z + r) dr; c may be of either sign.
inline double airy_exp_tail(double c, double z) {
  // Panels of width 0.5 until well past the integrand's maximum and the
  // contribution has vanished.
  const double peak = c > 0 ? c * c : 0.0;
  double total = 0.0, r = 0.0;
  for (int p = 0; p < 4000; ++p) {
    const double piece =
        quad::panel([&](double s) { return std::exp(c * s) * airy(z + s); }, r, r + 0.5);
    total += piece;
    r += 0.5;
    if (z + r > std::max(peak, 0.0) + 2.0 && z + r > 4.0 &&
        std::abs(piece) <= 1e-18 * std::abs(total) + 1e-300)
      break;
  }
  return total;
}

/// int_s^inf Ai(t) dt.
inline double airy_tail(double s) { return airy_exp_tail(0.0, s); }

/// Leading Airy approximation of J_nu(nu - x (nu/2)^{1/3}) and the
/// Ai' correction for the neighbouring orders nu +- 1. Diagnostic only.
struct UniformBesselAiry {
  double argument;  ///< nu - x (nu/2)^{1/3}
  double order_nu;
  double order_nu_plus_1;
  double order_nu_minus_1;
};

inline UniformBesselAiry bessel_airy_uniform(double nu, double x) {
  require(nu >= 50.0, ErrorKind::InvalidArgument, "bessel_airy_uniform: nu must be >= 50");
  const AiryValue a = airy_ai(x);
  const double c1 = std::cbrt(2.0 / nu), c2 = c1 * c1;
  return {nu - x * std::cbrt(nu / 2.0), c1 * a.value, c1 * a.value + c2 * a.derivative,
          c1 * a.value - c2 * a.derivative};
}

}  // namespace involutions
