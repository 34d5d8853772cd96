#pragma once

// The finite M x M symmetric geometric model: the law of the shifted row
// lengths h_j = lambda_j + M - j, its matrix kernel, correlations and window
// probabilities.

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "combinat.hpp"
#include "errors.hpp"
#include "fredholm.hpp"
#include "pfaffian.hpp"
#include "skewpoly.hpp"

namespace involutions {

struct FiniteModelParams {
  int M;
  double q;
  double alpha;

  FiniteModelParams(int M_, double q_, double alpha_) : M(M_), q(q_), alpha(alpha_) {
    require(M >= 2 && M % 2 == 0, ErrorKind::InvalidArgument, "FiniteModelParams: M must be even and >= 2");
    require(q > 0.0 && q < 1.0, ErrorKind::InvalidArgument, "FiniteModelParams: need 0 < q < 1");
    require(alpha > 0.0, ErrorKind::InvalidArgument, "FiniteModelParams: need alpha > 0");
    require(alpha * q < 1.0, ErrorKind::InvalidArgument, "FiniteModelParams: need alpha q < 1");
  }

  SkewParams skew() const { return {q, alpha}; }

  /// log C_M(q, alpha), the constant of the h-coordinate density.
  double log_normalization() const {
    double s = M * std::log1p(-std::sqrt(alpha * q)) + 0.5 * M * (M - 1) * std::log1p(-q) -
               0.25 * M * (M - 1) * std::log(q) - 0.25 * M * std::log(alpha);
    for (int j = 1; j < M; ++j) s -= std::lgamma(j + 1.0);
    return s;
  }

  /// Smallest h with q^{h/2} h^M < 1e-16; coordinates beyond it are ignored.
  int h_cut() const {
    int h = M;
    while (0.5 * h * std::log(q) + M * std::log(static_cast<double>(h)) > std::log(1e-16)) ++h;
    return h;
  }
};

/// Thresholds a_1 > a_2 > ... > a_l.
struct WindowSpec {
  std::vector<int> thresholds;

  explicit WindowSpec(std::vector<int> a) : thresholds(std::move(a)) {
    require(!thresholds.empty(), ErrorKind::InvalidArgument, "WindowSpec: need at least one threshold");
    for (size_t r = 1; r < thresholds.size(); ++r)
      require(thresholds[r] < thresholds[r - 1], ErrorKind::InvalidArgument,
              "WindowSpec: thresholds must be strictly decreasing");
  }
  int size() const { return static_cast<int>(thresholds.size()); }
};

/// P_M(lambda; q) for a partition with at most M parts.
inline double pdf_pm(const Partition& lambda, const FiniteModelParams& p) {
  require(lambda.length() <= p.M, ErrorKind::InvalidArgument, "pdf_pm: partition longer than M");
  const int M = p.M;
  double lg = M * std::log1p(-std::sqrt(p.alpha * p.q)) + 0.5 * M * (M - 1) * std::log1p(-p.q) +
              0.5 * lambda.size() * std::log(p.q) + 0.5 * lambda.alternating_sum() * std::log(p.alpha);
  for (int j = 0; j < M; ++j)
    for (int l = j + 1; l < M; ++l)
      lg += std::log(static_cast<double>(lambda.part(j) - lambda.part(l) + l - j) / (l - j));
  return std::exp(lg);
}

/// The same law in coordinates h_1 > ... > h_M >= 0; zero off that chamber.
inline double pdf_h(const std::vector<int>& h, const FiniteModelParams& p) {
  require(static_cast<int>(h.size()) == p.M, ErrorKind::InvalidArgument, "pdf_h: need M coordinates");
  if (h.back() < 0) return 0.0;
  double lg = p.log_normalization();
  for (int j = 0; j < p.M; ++j) {
    if (j > 0 && h[j] >= h[j - 1]) return 0.0;
    lg += 0.5 * h[j] * std::log(p.q) + ((j % 2 == 0) ? 0.5 : -0.5) * h[j] * std::log(p.alpha);
    for (int l = j + 1; l < p.M; ++l) lg += std::log(static_cast<double>(h[j] - h[l]));
  }
  return std::exp(lg);
}

/// Symmetrised density: the chamber density at the sorted coordinates.
inline double pdf_sym(std::vector<int> h, const FiniteModelParams& p) {
  std::sort(h.begin(), h.end(), std::greater<>());
  return pdf_h(h, p);
}

/// The kernel f(x, y) of the finite model on arguments 0..max_point, built
/// from the scaled skew orthogonal polynomials.
class FiniteKernel {
 public:
  FiniteKernel(const FiniteModelParams& p, int max_point, const SeriesTolerance& tol = {})
      : p_(p), table_(p.skew(), p.M, std::max(max_point, 0) + 1, tol), max_point_(std::max(max_point, 0)) {}

  const FiniteModelParams& params() const { return p_; }
  int max_point() const { return max_point_; }

  double s(int x, int y) const {
    check(x, y);
    long double v = 0;
    for (int j = 0; 2 * j < p_.M; ++j)
      v += table_.phihat(2 * j, x) * table_.rhat(2 * j + 1, y) - table_.phihat(2 * j + 1, x) * table_.rhat(2 * j, y);
    return static_cast<double>(v / rho());
  }

  double i(int x, int y) const {
    check(x, y);
    long double v = 0;
    for (int j = 0; 2 * j < p_.M; ++j)
      v += table_.phihat(2 * j, x) * table_.phihat(2 * j + 1, y) -
           table_.phihat(2 * j + 1, x) * table_.phihat(2 * j, y);
    return static_cast<double>(-v / rho()) + skew_eps(x, y, p_.alpha);
  }

  double d(int x, int y) const {
    check(x, y);
    long double v = 0;
    for (int j = 0; 2 * j < p_.M; ++j)
      v += table_.rhat(2 * j, x) * table_.rhat(2 * j + 1, y) - table_.rhat(2 * j + 1, x) * table_.rhat(2 * j, y);
    return static_cast<double>(v / rho());
  }

  KernelBlock block(int x, int y) const { return {s(x, y), i(x, y), d(x, y), s(y, x)}; }

  /// S(x, y) from the Christoffel-Darboux sum plus the rank-one correction
  /// coming from the factorised transition matrix; needs gamma != 0.
  double s_summed(int x, int y) const {
    check(x, y);
    const SkewParams sp = p_.skew();
    require(sp.factorizable(), ErrorKind::NearDegenerate, "s_summed: alpha too close to q");
    const int M = p_.M;
    const long double g = sp.gamma(), omq = 1.0L - p_.q;
    long double cd;
    if (x == y) {
      cd = 0;
      for (int nu = 0; nu < M; ++nu) cd += table_.chat(nu, x) * table_.chat(nu, y);
      cd *= omq;
    } else {
      cd = M * std::sqrt(static_cast<long double>(p_.q)) *
           (table_.chat(M, x) * table_.chat(M - 1, y) - table_.chat(M - 1, x) * table_.chat(M, y)) /
           static_cast<long double>(x - y);
    }
    const long double left = table_.phihat(M - 2, x) / rho() - omq * table_.chat(M - 1, x);
    const long double right = table_.chat(M, y) - table_.rhat(M, y);
    return static_cast<double>(cd + left * right / g);
  }

 private:
  long double rho() const { return table_.params().rho(); }
  void check(int x, int y) const {
    require(x >= 0 && y >= 0 && x <= max_point_ && y <= max_point_, ErrorKind::InvalidArgument,
            "FiniteKernel: argument outside the tabulated range");
  }

  FiniteModelParams p_;
  SkewTable table_;
  int max_point_;
};

inline KernelBlock kernel_block(int x, int y, const FiniteModelParams& p, const SeriesTolerance& tol = {}) {
  return FiniteKernel(p, std::max(x, y), tol).block(x, y);
}

/// qdet of kernel blocks at the given points; tiny negative noise clipped.
template <typename Kernel>
double correlation_from_kernel(const std::vector<int>& points, const Kernel& k) {
  const int n = static_cast<int>(points.size());
  if (n == 0) return 1.0;
  const double v = qdet(assemble_kernel(n, [&](int a, int b) { return k.block(points[a], points[b]); }));
  require(v >= -1e-8, ErrorKind::NearDegenerate, "correlation is negative beyond rounding noise");
  return std::max(v, 0.0);
}

inline double rho_k(const std::vector<int>& points, const FiniteModelParams& p, const SeriesTolerance& tol = {}) {
  require(points.size() <= 6, ErrorKind::SizeGuard, "rho_k: at most 6 points");
  int top = 0;
  for (int x : points) {
    require(x >= 0, ErrorKind::InvalidArgument, "rho_k: points must be >= 0");
    top = std::max(top, x);
  }
  return correlation_from_kernel(points, FiniteKernel(p, top, tol));
}

/// Interval r holds the integers in (a_r, a_{r-1}], cut at h_cut.
inline NodeSystem finite_window_system(const WindowSpec& w, const FiniteKernel& k) {
  const int cut = std::min(k.params().h_cut(), k.max_point());
  std::vector<std::vector<double>> nodes(w.size()), weights(w.size());
  for (int r = 0; r < w.size(); ++r) {
    const int lo = std::max(w.thresholds[r] + 1, 0);
    const int hi = r == 0 ? cut : std::min(w.thresholds[r - 1], cut);
    for (int h = lo; h <= hi; ++h) {
      nodes[r].push_back(h);
      weights[r].push_back(1.0);
    }
  }
  return make_node_system(nodes, weights, [&](double x, double y) {
    return k.block(static_cast<int>(x), static_cast<int>(y));
  });
}

/// Pr(h_1 <= a_1, ..., h_l <= a_l) from the xi-series truncated at p_max.
inline double window_probability(const WindowSpec& w, const FiniteModelParams& p, int p_max,
                                 double tail_tol = 1e-9, const SeriesTolerance& tol = {}) {
  require(p_max >= 1 && p_max <= 10, ErrorKind::SizeGuard, "window_probability: need 1 <= p_max <= 10");
  const FiniteKernel k(p, p.h_cut(), tol);
  const SeriesProbability sp = window_probability_series(finite_window_system(w, k), p_max);
  require(std::abs(sp.last_term) <= tail_tol, ErrorKind::TailNotConverged,
          "window_probability: last series term exceeds tolerance");
  return sp.value;
}

/// The same probability without truncation in xi. When 1 - K is singular
/// (some interval is occupied almost surely) the xi-series of degree M,
/// which is exact here, is used instead.
inline double window_probability_exact(const WindowSpec& w, const FiniteModelParams& p,
                                       const SeriesTolerance& tol = {}) {
  const FiniteKernel k(p, p.h_cut(), tol);
  const NodeSystem sys = finite_window_system(w, k);
  try {
    return window_probability_exact(sys);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularDeterminant) throw;
  }
  return window_probability_series(sys, p.M).value;
}

}  // namespace involutions
