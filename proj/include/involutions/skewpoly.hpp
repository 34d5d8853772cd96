#pragma once

// Skew inner product with weights q^{x/2}, eps(x,y) = alpha^{|y-x|/2} sgn(y-x),
// the Gram factorisation J^{mn} = a_m b_n, skew orthogonal polynomials R_j
// and their transforms Phi_j.
//
// Scaled companions (see meixner.hpp for Chat):
//   Rhat_j(x) = q^{x/2} R_j(x) / sigma_j,   Phihat_j(x) = Phi_j(x) / sigma_j,
//   r_n = rho * sigma_{2n} sigma_{2n+1},  rho = sqrt(alpha) / (1 - sqrt(alpha q))^2.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "meixner.hpp"
#include "specfun.hpp"

namespace involutions {

struct SkewParams {
  double q;
  double alpha;

  SkewParams(double q_, double alpha_) : q(q_), alpha(alpha_) {
    require(q > 0.0 && q < 1.0, ErrorKind::InvalidArgument, "SkewParams: need 0 < q < 1");
    require(alpha >= 0.0, ErrorKind::InvalidArgument, "SkewParams: need alpha >= 0");
    require(alpha * q < 1.0, ErrorKind::InvalidArgument, "SkewParams: need alpha q < 1");
  }

  double sqrt_alpha() const { return std::sqrt(alpha); }
  double sqrt_q() const { return std::sqrt(q); }
  /// (sqrt(alpha) - sqrt(q)) / (1 - sqrt(alpha q))
  double gamma() const { return (sqrt_alpha() - sqrt_q()) / (1.0 - std::sqrt(alpha * q)); }
  /// r_n / (sigma_{2n} sigma_{2n+1})
  double rho() const {
    const double d = 1.0 - std::sqrt(alpha * q);
    return sqrt_alpha() / (d * d);
  }
  bool factorizable() const { return std::abs(sqrt_alpha() - sqrt_q()) > 1e-8; }
};

/// eps(x, y) = alpha^{|y-x|/2} sgn(y - x).
inline double skew_eps(double x, double y, double alpha) {
  if (x == y) return 0.0;
  const double w = std::pow(alpha, std::abs(y - x) / 2);
  return y > x ? w : -w;
}

/// <f, g> = sum_{x<y} q^{(x+y)/2} alpha^{(y-x)/2} (f(x) g(y) - g(x) f(y)).
template <typename F, typename G>
double skew_product(F&& f, G&& g, const SkewParams& p, const SeriesTolerance& tol = {}) {
  const long double sa = std::sqrt(static_cast<long double>(p.alpha));
  const long double sq = std::sqrt(static_cast<long double>(p.q));
  // run_f(y) = sum_{x<y} q^{x/2} alpha^{(y-x)/2} f(x), likewise run_g.
  long double run_f = 0, run_g = 0, total = 0, w = 1;
  int quiet = 0;
  for (int y = 0; y < tol.max_terms; ++y) {
    const long double fy = f(y), gy = g(y);
    const long double term = w * (run_f * gy - run_g * fy);
    total += term;
    const long double scale = w * (std::abs(fy) + std::abs(gy)) * (1 + std::abs(run_f) + std::abs(run_g));
    quiet = (scale < tol.abs_tol / 10) ? quiet + 1 : 0;
    if (y > 20 && quiet >= 10) return static_cast<double>(total);
    run_f = sa * (run_f + w * fy);
    run_g = sa * (run_g + w * gy);
    w *= sq;
  }
  throw Error(ErrorKind::TruncationFailure, "skew_product: tail bound not reached within max_terms");
}

/// J^{mn} = a_m b_n for m < n.
struct GramFactor {
  std::vector<double> a;
  std::vector<double> b;

  double J(int m, int n) const {
    if (m == n) return 0.0;
    return m < n ? a[m] * b[n] : -a[n] * b[m];
  }
};

inline GramFactor gram_factor(int n_max, const SkewParams& p) {
  require(n_max >= 0, ErrorKind::InvalidArgument, "gram_factor: n_max >= 0");
  require(p.factorizable(), ErrorKind::NearDegenerate,
          "gram_factor: alpha too close to q; the factors a_n, b_n are singular there");
  const long double sa = p.sqrt_alpha(), sq = p.sqrt_q(), saq = std::sqrt(static_cast<long double>(p.alpha) * p.q);
  const long double ra = sq * (1 - saq) / ((1 - p.q) * (sa - sq));
  const long double rb = sq * (sa - sq) / ((1 - p.q) * (1 - saq));
  GramFactor g;
  long double an = sa / (sa - sq), bn = 1 / (1 - saq);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      an *= n * ra;
      bn *= n * rb;
    }
    g.a.push_back(static_cast<double>(an));
    g.b.push_back(static_cast<double>(bn));
  }
  return g;
}

/// Chat_0(x), ..., Chat_{n_max}(x).
inline std::vector<long double> normalized_c_all(int n_max, double x, double q) {
  std::vector<long double> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) out[n] = normalized_c(n, x, q);
  return out;
}

/// Rhat_j from a list of Chat values (index >= j required).
inline long double normalized_r(int j, const std::vector<long double>& chat, double gamma) {
  if (j % 2 == 1) return chat[j] - gamma * chat[j - 1];
  long double s = chat[j];
  for (int k = 0; k < j / 2; ++k) s += chat[2 * k] - gamma * chat[2 * k + 1];
  return s;
}

/// Monic skew orthogonal polynomial R_j(x).
inline double skew_r(int j, double x, const SkewParams& p) {
  require(j >= 0, ErrorKind::InvalidArgument, "skew_r: j >= 0");
  const auto chat = normalized_c_all(j, x, p.q);
  const long double r = normalized_r(j, chat, p.gamma());
  if (r == 0) return 0.0;
  const long double lg = std::log(std::abs(r)) + log_sigma(j, p.q) - 0.5L * x * std::log(static_cast<long double>(p.q));
  return static_cast<double>(r < 0 ? -std::exp(lg) : std::exp(lg));
}

/// r_n = <R_{2n}, R_{2n+1}>.
inline double skew_norm_r(int n, const SkewParams& p) {
  require(n >= 0, ErrorKind::InvalidArgument, "skew_norm_r: n >= 0");
  return static_cast<double>(std::exp(log_sigma(2 * n, p.q) + log_sigma(2 * n + 1, p.q)) * p.rho());
}

/// R_j(x) from the bordered Gram determinants, with the odd-index constant
/// c_n = -gamma sqrt(q) (2n+1) / (1-q) unless one is supplied.
inline double skew_r_det_oracle(int j, double x, const SkewParams& p, const double* odd_constant = nullptr) {
  require(j >= 0 && j <= 8, ErrorKind::SizeGuard, "skew_r_det_oracle: j <= 8");
  if (j == 0) return 1.0;
  const GramFactor g = gram_factor(j + 1, p);
  const MeixnerParams mp(p.q);
  using Mat = Eigen::MatrixXd;
  const int n = j / 2;
  auto det = [](const Mat& m) { return m.rows() == 0 ? 1.0 : m.fullPivLu().determinant(); };
  auto even = [&](int nn) {
    const int size = 2 * nn + 1;
    Mat full(size, size), minor(size - 1, size - 1);
    for (int i = 0; i < size; ++i) {
      const int r = 2 * nn - i;
      full(i, 0) = monic_c(r, x, mp);
      for (int c = 1; c < size; ++c) full(i, c) = g.J(r, 2 * nn - c);
    }
    for (int i = 1; i < size; ++i)
      for (int c = 1; c < size; ++c) minor(i - 1, c - 1) = full(i, c);
    const double d = det(minor);
    require(std::abs(d) > 1e-300, ErrorKind::SingularDeterminant, "skew_r_det_oracle: D_n vanishes");
    return det(full) / d;
  };
  if (j % 2 == 0) return even(n);
  const int size = 2 * n + 2;
  Mat full(size, size), e(size - 1, size - 1);
  auto col_index = [&](int c) { return c == 0 ? 2 * n + 1 : 2 * n + 1 - c; };  // c >= 2 -> 2n-1, ...
  for (int i = 0; i < size; ++i) {
    const int r = 2 * n + 1 - i;
    for (int c = 0; c < size; ++c) full(i, c) = (c == 1) ? monic_c(r, x, mp) : g.J(r, col_index(c));
  }
  for (int i = 1; i < size; ++i) {
    int cc = 0;
    for (int c = 0; c < size; ++c)
      if (c != 1) e(i - 1, cc++) = full(i, c);
  }
  const double en = -det(e);
  require(std::abs(en) > 1e-300, ErrorKind::SingularDeterminant, "skew_r_det_oracle: E_n vanishes");
  const double cn = odd_constant ? *odd_constant : -p.gamma() * p.sqrt_q() * (2 * n + 1) / (1 - p.q);
  return det(full) / en + cn * even(n);
}

/// Phi_j(x) from its expansion in Chat_nu, nu >= j; needs gamma^2 q < 1.
inline double phi_expansion(int j, int x, const SkewParams& p, const SeriesTolerance& tol = {}) {
  const double gamma = p.gamma(), pref = (1 - p.q) * p.rho();
  require(gamma * gamma * p.q < 1.0, ErrorKind::TruncationFailure, "phi_expansion: series diverges (gamma^2 q >= 1)");
  long double s = 0, g = 1;
  int quiet = 0;
  const int n = j / 2;
  const int start = (j % 2 == 0) ? 2 * n + 1 : 2 * n;
  for (int nu = start; nu < tol.max_terms; ++nu) {
    long double term;
    if (j % 2 == 0)
      term = g * normalized_c(nu, x, p.q);
    else
      term = g * (normalized_c(nu + 2, x, p.q) - normalized_c(nu, x, p.q));
    s += term;
    quiet = (std::abs(term) < tol.abs_tol / 10) ? quiet + 1 : 0;
    if (nu > x + j + 10 && quiet >= 10) return static_cast<double>(pref * s * std::exp(log_sigma(j, p.q)));
    g *= gamma;
  }
  throw Error(ErrorKind::TruncationFailure, "phi_expansion: not converged within max_terms");
}

/// Rhat_j(y) for j <= j_max and Phihat_j(y) for j <= j_max on y in [0, size).
/// The grid grows until every Rhat_j has decayed below tolerance at its end.
class SkewTable {
 public:
  SkewTable(const SkewParams& p, int j_max, int min_size, const SeriesTolerance& tol = {})
      : p_(p), j_max_(j_max) {
    int size = std::max(min_size + j_max + 40, static_cast<int>((j_max + 2) / (1 - p.q)) + 40);
    for (;;) {
      require(size < tol.max_terms, ErrorKind::TruncationFailure, "SkewTable: grid exceeds max_terms");
      build(size);
      if (tail_small(tol.abs_tol)) return;
      size = size * 3 / 2;
    }
  }

  const SkewParams& params() const { return p_; }
  int size() const { return size_; }
  int j_max() const { return j_max_; }
  long double rhat(int j, int y) const { return r_[idx(j, y)]; }
  long double phihat(int j, int y) const { return phi_[idx(j, y)]; }
  /// Chat_nu(y) for nu <= j_max + 2.
  long double chat(int nu, int y) const { return c_[idx(nu, y)]; }

 private:
  size_t idx(int j, int y) const { return static_cast<size_t>(j) * size_ + y; }

  void build(int size) {
    size_ = size;
    const MeixnerTable t(p_.q, std::max(size, j_max_ + 3));
    const long double gamma = p_.gamma(), sa = std::sqrt(static_cast<long double>(p_.alpha));
    r_.assign(static_cast<size_t>(j_max_ + 1) * size, 0);
    phi_.assign(static_cast<size_t>(j_max_ + 1) * size, 0);
    c_.assign(static_cast<size_t>(j_max_ + 3) * size, 0);
    for (int nu = 0; nu <= j_max_ + 2; ++nu)
      for (int y = 0; y < size; ++y) c_[idx(nu, y)] = t(nu, y);
    for (int y = 0; y < size; ++y) {
      long double even_prefix = 0;  // sum_{k<n} (Chat_2k - gamma Chat_2k+1)
      for (int j = 0; j <= j_max_; ++j) {
        if (j % 2 == 0) {
          r_[idx(j, y)] = t(j, y) + even_prefix;
        } else {
          r_[idx(j, y)] = t(j, y) - gamma * t(j - 1, y);
          even_prefix += t(j - 1, y) - gamma * t(j, y);
        }
      }
    }
    // Phihat_j(x) = sum_{y<x} alpha^{(x-y)/2} Rhat_j(y) - sum_{y>x} alpha^{(y-x)/2} Rhat_j(y)
    std::vector<long double> right(size + 1, 0);
    for (int j = 0; j <= j_max_; ++j) {
      right[size - 1] = 0;
      for (int x = size - 2; x >= 0; --x) right[x] = sa * (right[x + 1] + r_[idx(j, x + 1)]);
      long double left = 0;
      for (int x = 0; x < size; ++x) {
        if (x > 0) left = sa * (left + r_[idx(j, x - 1)]);
        phi_[idx(j, x)] = left - right[x];
      }
    }
  }

  // The last rows must be tiny and decaying, including the alpha^{y/2}
  // amplification the Phi sums apply when alpha > 1.
  bool tail_small(double tol) const {
    const long double amp = std::sqrt(std::max(1.0L, static_cast<long double>(p_.alpha)));
    for (int nu = 0; nu <= j_max_ + 2; ++nu) {
      const long double a = std::abs(c_[idx(nu, size_ - 1)]), b = std::abs(c_[idx(nu, size_ - 11)]);
      if (a > b && a > 0) return false;
      if (a * std::pow(amp, size_) * size_ > tol / 10) return false;
    }
    return true;
  }

  SkewParams p_;
  int j_max_;
  int size_ = 0;
  std::vector<long double> r_, phi_, c_;
};

/// Phi_j(x) = sum_y w(y, x) q^{y/2} R_j(y) for an arbitrary weight w.
template <typename W>
double phi_with_weight(int j, int x, const SkewParams& p, W&& weight, const SeriesTolerance& tol = {}) {
  require(j >= 0 && x >= 0, ErrorKind::InvalidArgument, "phi: j, x >= 0");
  const SkewTable t(p, j, x + 1, tol);
  long double s = 0;
  for (int y = 0; y < t.size(); ++y) s += weight(y, x) * t.rhat(j, y);
  return static_cast<double>(s * std::exp(log_sigma(j, p.q)));
}

/// Phi_j(x) = sum_y eps(y, x) q^{y/2} R_j(y), truncated directly.
inline double phi(int j, int x, const SkewParams& p, const SeriesTolerance& tol = {}) {
  return phi_with_weight(j, x, p, [&](int y, int xx) { return skew_eps(y, xx, p.alpha); }, tol);
}

}  // namespace involutions
