#pragma once

// The soft-edge matrix kernel with parameter u (w = -u/4), its scaled
// correlations and the joint distribution of the rightmost points.
//
// With c = -u/2, T_c(z) = int_0^inf e^{c r} Ai(z + r) dr and
//   L_c(z) = e^{c^3/3 - c z} - T_c(z)   (= int_0^inf e^{-c r} Ai(z - r) dr for c > 0),
// the entries used here are
//   f22(X,Y) = K(X,Y) + 1/2 (Ai(Y) - c T_0(Y)) L_c(X),   f11(X,Y) = f22(Y,X),
//   f12(X,Y) = 1/4 [c^2 G + c (Ai(Y) T_0(X) - Ai(X) T_0(Y)) + K_X(X,Y) - K_X(Y,X)],
//   f21(X,Y) = -e^{-c|X-Y|} sgn(X-Y) - W(X,Y) + W(Y,X),
// where K_X(X,Y) = int_0^inf Ai'(X+t) Ai(Y+t) dt,
//   G(X,Y) = int_0^inf (Ai(Y+s) T_0(X+s) - Ai(X+s) T_0(Y+s)) ds,
//   W(X,Y) = int_0^inf Ai(X+s) L_c(Y+s) ds.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "fredholm.hpp"
#include "pfaffian.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace involutions {

struct SoftEdgeParams {
  double u = 0.0;

  SoftEdgeParams() = default;
  explicit SoftEdgeParams(double u_) : u(u_) {
    require(std::isfinite(u), ErrorKind::InvalidArgument, "SoftEdgeParams: u must be finite");
  }
  static SoftEdgeParams from_w(double w) { return SoftEdgeParams(-4.0 * w); }

  double w() const { return -u / 4.0; }
  double c() const { return -u / 2.0; }
};

/// K(x, y) = int_0^inf Ai(x+t) Ai(y+t) dt.
inline double k_soft(double x, double y) {
  double total = 0.0;
  for (double t = 0.0; t < 400.0; t += 0.5) {
    const double piece = quad::panel([&](double s) { return airy(x + s) * airy(y + s); }, t, t + 0.5);
    total += piece;
    if (std::min(x, y) + t > 4.0 && std::abs(piece) <= 1e-18 * std::abs(total) + 1e-300) break;
  }
  return total;
}

/// (Ai(x) Ai'(y) - Ai(y) Ai'(x)) / (x - y), x != y.
inline double k_soft_divided(double x, double y) {
  require(x != y, ErrorKind::InvalidArgument, "k_soft_divided: needs x != y");
  const AiryValue a = airy_ai(x), b = airy_ai(y);
  return (a.value * b.derivative - b.value * a.derivative) / (x - y);
}

/// L_c(z) as defined above.
inline double airy_left_transform(double c, double z) {
  if (c >= 1.0) {
    // Directly: the e^{c^3/3} pieces of the other form would cancel.
    const double reach = 40.0 / c, h = std::min(0.5, 1.0 / c);
    double total = 0.0;
    for (double r = 0.0; r < reach; r += h)
      total += quad::panel([&](double s) { return std::exp(-c * s) * airy(z - s); }, r, r + h);
    return total;
  }
  return std::exp(c * c * c / 3.0 - c * z) - airy_exp_tail(c, z);
}

struct AiryBlock {
  double f11, f12, f21, f22;
  KernelBlock as_kernel() const { return {f11, f12, f21, f22}; }
};

/// The kernel on a fixed node set; entries are formed from shared Airy grids.
class AiryKernel {
 public:
  AiryKernel(std::vector<double> nodes, const SoftEdgeParams& p) : x_(std::move(nodes)), p_(p) {
    const int n = static_cast<int>(x_.size());
    if (n == 0) return;
    const double c = p.c();
    const double x_min = *std::min_element(x_.begin(), x_.end());
    // e^{+-c s} must stay well resolved by one panel.
    const double h = std::min(0.5, 0.5 / std::max(std::abs(c), 1e-300));
    const int panels = std::max(4, static_cast<int>(std::ceil((16.0 - x_min) / h)));
    const quad::Rule& ref = quad::panel_rule();
    const int m = static_cast<int>(ref.nodes.size());
    const int g = panels * m;
    const auto [left_int, right_int] = integration_matrices();

    Eigen::VectorXd wt(g);
    std::vector<double> tau(g);
    for (int pn = 0; pn < panels; ++pn)
      for (int k = 0; k < m; ++k) {
        tau[pn * m + k] = pn * h + 0.5 * h * (ref.nodes[k] + 1.0);
        wt[pn * m + k] = 0.5 * h * ref.weights[k];
      }

    Eigen::MatrixXd A(n, g), Ap(n, g), T0(n, g), L(n, g);
    ai_.resize(n);
    t0_.resize(n);
    l_.resize(n);
    const double T = panels * h;
    Eigen::VectorXd v(m), e(m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < g; ++j) {
        const AiryValue a = airy_ai(x_[i] + tau[j]);
        A(i, j) = a.value;
        Ap(i, j) = a.derivative;
      }
      ai_[i] = airy(x_[i]);
      // Right tails of Ai, panel by panel from the far end.
      double tail = airy_tail(x_[i] + T);
      for (int pn = panels - 1; pn >= 0; --pn) {
        v = A.row(i).segment(pn * m, m).transpose();
        const Eigen::VectorXd part = 0.5 * h * (right_int * v);
        for (int k = 0; k < m; ++k) T0(i, pn * m + k) = tail + part[k];
        tail += 0.5 * h * (ref_weights() .dot(v));
      }
      t0_[i] = tail;
      if (c >= 1.0) {
        // Left transform forwards: L(z_a + s) = e^{-c s} (L(z_a) + int_{z_a}^{z_a+s} e^{c(v-z_a)} Ai(v) dv).
        double lv = airy_left_transform(c, x_[i]);
        l_[i] = lv;
        for (int pn = 0; pn < panels; ++pn) {
          for (int k = 0; k < m; ++k) {
            const double s = 0.5 * h * (ref.nodes[k] + 1.0);
            v[k] = std::exp(c * s) * A(i, pn * m + k);
          }
          const Eigen::VectorXd part = 0.5 * h * (left_int * v);
          for (int k = 0; k < m; ++k) {
            const double s = 0.5 * h * (ref.nodes[k] + 1.0);
            L(i, pn * m + k) = std::exp(-c * s) * (lv + part[k]);
          }
          lv = std::exp(-c * h) * (lv + 0.5 * h * ref_weights().dot(v));
        }
      } else {
        // T_c backwards: T_c(z_b - s) = e^{c s} (int_{z_b-s}^{z_b} e^{c(v-z_b)} Ai(v) dv + T_c(z_b)).
        double tc = airy_exp_tail(c, x_[i] + T);
        for (int pn = panels - 1; pn >= 0; --pn) {
          for (int k = 0; k < m; ++k) {
            const double s = h - 0.5 * h * (ref.nodes[k] + 1.0);  // distance to the right edge
            v[k] = std::exp(-c * s) * A(i, pn * m + k);
          }
          const Eigen::VectorXd part = 0.5 * h * (right_int * v);
          for (int k = 0; k < m; ++k) {
            const double s = h - 0.5 * h * (ref.nodes[k] + 1.0);
            const double z = x_[i] + tau[pn * m + k];
            L(i, pn * m + k) = std::exp(c * c * c / 3.0 - c * z) - std::exp(c * s) * (part[k] + tc);
          }
          tc = std::exp(c * h) * (0.5 * h * ref_weights().dot(v) + tc);
        }
        l_[i] = std::exp(c * c * c / 3.0 - c * x_[i]) - tc;
      }
    }

    const Eigen::MatrixXd AW = A * wt.asDiagonal();
    K_ = AW * A.transpose();
    Eigen::MatrixXd KX = Ap * wt.asDiagonal() * A.transpose();
    Eigen::MatrixXd U = T0 * wt.asDiagonal() * A.transpose();
    Eigen::MatrixXd W = AW * L.transpose();
    f11_.resize(n, n);
    f12_.resize(n, n);
    f21_.resize(n, n);
    f22_.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        f22_(i, j) = K_(i, j) + 0.5 * (ai_[j] - c * t0_[j]) * l_[i];
        const double G = U(i, j) - U(j, i);
        f12_(i, j) = 0.25 * (c * c * G + c * (ai_[j] * t0_[i] - ai_[i] * t0_[j]) + KX(i, j) - KX(j, i));
        const double d = x_[i] - x_[j];
        const double jump = d == 0.0 ? 0.0 : (d > 0 ? 1.0 : -1.0) * std::exp(-c * std::abs(d));
        f21_(i, j) = -jump - (W(i, j) - W(j, i));
      }
    for (int i = 0; i < n; ++i) {
      f12_(i, i) = 0.0;
      f21_(i, i) = 0.0;
    }
    f11_ = f22_.transpose();
  }

  int size() const { return static_cast<int>(x_.size()); }
  const std::vector<double>& nodes() const { return x_; }
  const SoftEdgeParams& params() const { return p_; }
  double k(int i, int j) const { return K_(i, j); }

  AiryBlock block(int i, int j) const { return {f11_(i, j), f12_(i, j), f21_(i, j), f22_(i, j)}; }

  /// The 2n x 2n assembly, with sqrt(w_i w_j) folded in when weights are given.
  Eigen::MatrixXd assembly(const std::vector<double>& weights = {}) const {
    const int n = size();
    return assemble_kernel(n, [&](int a, int b) {
      const double s = weights.empty() ? 1.0 : std::sqrt(weights[a] * weights[b]);
      return KernelBlock{s * f11_(a, b), s * f12_(a, b), s * f21_(a, b), s * f22_(a, b)};
    });
  }

 private:
  static const Eigen::VectorXd& ref_weights() {
    static const Eigen::VectorXd w = [] {
      const quad::Rule& r = quad::panel_rule();
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(r.weights.data(), r.weights.size()));
    }();
    return w;
  }

  // Spectral matrices for int_{-1}^{x_k} and int_{x_k}^{1} of the interpolant
  // through the panel nodes, built in the Legendre basis.
  static std::pair<Eigen::MatrixXd, Eigen::MatrixXd> integration_matrices() {
    static const auto mats = [] {
      const quad::Rule& r = quad::panel_rule();
      const int m = static_cast<int>(r.nodes.size());
      auto legendre = [](int deg, double x) {
        std::vector<double> P(deg + 2);
        P[0] = 1.0;
        if (deg + 1 >= 1) P[1] = x;
        for (int j = 1; j + 1 <= deg + 1; ++j) P[j + 1] = ((2.0 * j + 1) * x * P[j] - j * P[j - 1]) / (j + 1);
        return P;
      };
      Eigen::MatrixXd B(m, m), Vinv(m, m);
      for (int k = 0; k < m; ++k) {
        const auto P = legendre(m, r.nodes[k]);
        for (int j = 0; j < m; ++j) {
          B(k, j) = j == 0 ? r.nodes[k] + 1.0 : (P[j + 1] - P[j - 1]) / (2.0 * j + 1);
          Vinv(j, k) = 0.5 * (2.0 * j + 1) * r.weights[k] * P[j];
        }
      }
      const Eigen::MatrixXd left = B * Vinv;
      Eigen::MatrixXd right = -left;
      for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j) right(k, j) += r.weights[j];
      return std::make_pair(left, right);
    }();
    return mats;
  }

  std::vector<double> x_;
  SoftEdgeParams p_;
  std::vector<double> ai_, t0_, l_;
  Eigen::MatrixXd K_, f11_, f12_, f21_, f22_;
};

inline AiryBlock f_block(double X, double Y, const SoftEdgeParams& p) {
  if (X == Y) return AiryKernel({X}, p).block(0, 0);
  return AiryKernel({X, Y}, p).block(0, 1);
}

/// f22 from the defining double integrals (needs u < 0 for convergence):
///   1/2 K(X,Y) - 1/2 int_0^inf e^{-c r} dK/dY(X-r, Y) dr
///   + c/2 int_0^inf e^{-c r} d/dt [int_Y^inf K(s, t) ds]_{t = X-r} dr.
inline double f22_printed(double X, double Y, const SoftEdgeParams& p) {
  require(p.u < 0.0, ErrorKind::DivergentParameter, "f22_printed: the defining integrals need u < 0");
  const double c = p.c();
  const quad::Rule inner = quad::composite(0.0, std::max(2.0, 16.0 - Y), 0.5);
  std::vector<double> apY(inner.nodes.size()), t0Y(inner.nodes.size());
  for (size_t m = 0; m < inner.nodes.size(); ++m) {
    apY[m] = airy_ai(Y + inner.nodes[m]).derivative;
    t0Y[m] = airy_tail(Y + inner.nodes[m]);
  }
  const quad::Rule outer = quad::composite(0.0, 36.0 / c, 0.5);
  double term2 = 0.0, term3 = 0.0;
  for (size_t k = 0; k < outer.nodes.size(); ++k) {
    const double z = X - outer.nodes[k];
    double dy = 0.0, dt = 0.0;
    for (size_t m = 0; m < inner.nodes.size(); ++m) {
      const AiryValue a = airy_ai(z + inner.nodes[m]);
      dy += inner.weights[m] * a.value * apY[m];
      dt += inner.weights[m] * a.derivative * t0Y[m];
    }
    const double damp = outer.weights[k] * std::exp(-c * outer.nodes[k]);
    term2 += damp * dy;
    term3 += damp * dt;
  }
  return 0.5 * k_soft(X, Y) - 0.5 * term2 + 0.5 * c * term3;
}

/// qdet of the kernel at the given points.
inline double rho_k_scaled(const std::vector<double>& points, const SoftEdgeParams& p) {
  require(points.size() <= 6, ErrorKind::SizeGuard, "rho_k_scaled: at most 6 points");
  if (points.empty()) return 1.0;
  for (size_t a = 0; a < points.size(); ++a)
    for (size_t b = a + 1; b < points.size(); ++b)
      if (points[a] == points[b]) return 0.0;
  const AiryKernel k(points, p);
  const double v = qdet(k.assembly());
  require(v >= -1e-8, ErrorKind::NearDegenerate, "rho_k_scaled: negative beyond rounding noise");
  return std::max(v, 0.0);
}

/// Thresholds s_1 > ... > s_l, the cutoff replacing +infinity, and the
/// Gauss-Legendre node count per interval (doubled once as a check).
struct ScaledWindow {
  std::vector<double> s;
  double cutoff;
  int nodes;

  explicit ScaledWindow(std::vector<double> s_, int nodes_ = 32, double extra = 12.0)
      : s(std::move(s_)), cutoff(0.0), nodes(nodes_) {
    require(!s.empty() && s.size() <= 3, ErrorKind::InvalidArgument, "ScaledWindow: need 1 to 3 thresholds");
    for (size_t r = 1; r < s.size(); ++r)
      require(s[r] < s[r - 1], ErrorKind::InvalidArgument, "ScaledWindow: thresholds must be strictly decreasing");
    require(extra > 5.0, ErrorKind::InvalidArgument, "ScaledWindow: cutoff must exceed s_1 + 5");
    require(nodes >= 8 && nodes <= 128, ErrorKind::InvalidArgument, "ScaledWindow: 8 to 128 nodes per interval");
    cutoff = s.front() + extra;
  }
  int size() const { return static_cast<int>(s.size()); }
};

namespace detail {

// E(i, j) = int_a^b e^{-c|x_i - y|} sgn(x_i - y) l_j(y) dy for the Lagrange
// basis l_j through the Gauss-Legendre nodes of [a, b]. Plain Nystrom
// weights converge only like n^{-2} across the jump at y = x_i.
inline Eigen::MatrixXd jump_product_weights(const quad::Rule& rule, double a, double b, double c) {
  const int n = static_cast<int>(rule.nodes.size());
  const double half = 0.5 * (b - a);
  std::vector<double> bary(n);
  for (int j = 0; j < n; ++j) {
    const double t = (rule.nodes[j] - 0.5 * (a + b)) / half;
    bary[j] = ((j % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - t * t) * rule.weights[j] / half);
  }
  std::vector<double> basis(n);
  auto lagrange = [&](double y) {
    double denom = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = y - rule.nodes[k];
      if (d == 0.0) {
        std::fill(basis.begin(), basis.end(), 0.0);
        basis[k] = 1.0;
        return;
      }
      basis[k] = bary[k] / d;
      denom += basis[k];
    }
    for (double& v : basis) v /= denom;
  };
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    const quad::Rule below = quad::gauss_legendre(n + 20, a, x);
    const quad::Rule above = quad::gauss_legendre(n + 20, x, b);
    for (size_t k = 0; k < below.nodes.size(); ++k) {
      lagrange(below.nodes[k]);
      const double f = below.weights[k] * std::exp(-c * (x - below.nodes[k]));
      for (int j = 0; j < n; ++j) E(i, j) += f * basis[j];
    }
    for (size_t k = 0; k < above.nodes.size(); ++k) {
      lagrange(above.nodes[k]);
      const double f = above.weights[k] * std::exp(-c * (above.nodes[k] - x));
      for (int j = 0; j < n; ++j) E(i, j) -= f * basis[j];
    }
  }
  return E;
}

}  // namespace detail

inline NodeSystem airy_window_system(const ScaledWindow& sw, const SoftEdgeParams& p, int nodes_per_interval) {
  std::vector<quad::Rule> rules;
  std::vector<double> all, all_w;
  std::vector<int> interval_of;
  for (int r = 0; r < sw.size(); ++r) {
    const double hi = r == 0 ? sw.cutoff : sw.s[r - 1];
    rules.push_back(quad::gauss_legendre(nodes_per_interval, sw.s[r], hi));
    all.insert(all.end(), rules.back().nodes.begin(), rules.back().nodes.end());
    all_w.insert(all_w.end(), rules.back().weights.begin(), rules.back().weights.end());
    interval_of.insert(interval_of.end(), nodes_per_interval, r);
  }
  const AiryKernel k(all, p);
  NodeSystem sys;
  sys.A = k.assembly(all_w);
  sys.count.assign(sw.size(), nodes_per_interval);
  sys.self_dual = false;
  const double c = p.c();
  for (int r = 0; r < sw.size(); ++r) {
    const double hi = r == 0 ? sw.cutoff : sw.s[r - 1];
    const Eigen::MatrixXd E = detail::jump_product_weights(rules[r], sw.s[r], hi, c);
    const int off = r * nodes_per_interval;
    for (int i = 0; i < nodes_per_interval; ++i)
      for (int j = 0; j < nodes_per_interval; ++j) {
        const int a = off + i, b = off + j;
        const double d = all[a] - all[b];
        const double jump = d == 0.0 ? 0.0 : (d > 0 ? 1.0 : -1.0) * std::exp(-c * std::abs(d));
        // Swap the point-evaluated jump for its product-integrated version.
        sys.A(2 * a + 1, 2 * b) += std::sqrt(all_w[a] * all_w[b]) * jump - std::sqrt(all_w[a] / all_w[b]) * E(i, j);
      }
  }
  return sys;
}

struct JointDistribution {
  double value;
  double last_term;          // degree-p_max contribution (series only)
  double quadrature_change;  // |value(2n nodes) - value(n nodes)|
  int p_max;
  int nodes;
};

/// F(s_1, ..., s_l; w) from the alternating series truncated at p_max.
inline JointDistribution joint_distribution(const ScaledWindow& sw, const SoftEdgeParams& p, int p_max,
                                            double tail_tol = 1e-6, double quad_tol = 1e-7) {
  require(p_max >= 1 && p_max <= 12, ErrorKind::SizeGuard, "joint_distribution: need 1 <= p_max <= 12");
  const SeriesProbability coarse = window_probability_series(airy_window_system(sw, p, sw.nodes), p_max);
  const SeriesProbability fine = window_probability_series(airy_window_system(sw, p, 2 * sw.nodes), p_max);
  require(std::abs(fine.last_term) <= tail_tol, ErrorKind::TailNotConverged,
          "joint_distribution: last series term exceeds tolerance");
  const double change = std::abs(fine.value - coarse.value);
  require(change <= quad_tol, ErrorKind::QuadratureNotConverged, "joint_distribution: node doubling changed the result");
  require(fine.value >= -1e-6 && fine.value <= 1.0 + 1e-6, ErrorKind::TailNotConverged,
          "joint_distribution: value outside [0, 1]");
  return {fine.value, fine.last_term, change, p_max, 2 * sw.nodes};
}

/// The same distribution without truncating the series.
inline JointDistribution joint_distribution_exact(const ScaledWindow& sw, const SoftEdgeParams& p,
                                                  double quad_tol = 1e-7) {
  const double coarse = window_probability_exact(airy_window_system(sw, p, sw.nodes));
  const double fine = window_probability_exact(airy_window_system(sw, p, 2 * sw.nodes));
  const double change = std::abs(fine - coarse);
  require(change <= quad_tol, ErrorKind::QuadratureNotConverged,
          "joint_distribution_exact: node doubling changed the result");
  require(fine >= -1e-6 && fine <= 1.0 + 1e-6, ErrorKind::QuadratureNotConverged,
          "joint_distribution_exact: value outside [0, 1]");
  return {fine, 0.0, change, 0, 2 * sw.nodes};
}

/// rho_k(x) <= e^{-sum x} k^{k/2} M^k checked with M fitted on a grid.
struct TailBoundReport {
  double rho;
  double envelope;
  double fitted_m;
  bool holds;
};

/// Smallest M for which the bound holds for k <= k_max on the grid x_i in
/// {s0, s0 + step, ...} (at most 4 points, distinct grid values).
inline double fit_tail_constant(const SoftEdgeParams& p, double s0, int k_max = 2, int grid = 6, double step = 1.0) {
  require(k_max >= 1 && k_max <= 4, ErrorKind::SizeGuard, "fit_tail_constant: k_max <= 4");
  std::vector<double> g;
  for (int i = 0; i < grid; ++i) g.push_back(s0 + i * step);
  double m = 0.0;
  std::vector<int> idx;
  auto rec = [&](auto&& self, int start, int k) -> void {
    if (static_cast<int>(idx.size()) == k) {
      std::vector<double> pts;
      double sum = 0;
      for (int i : idx) {
        pts.push_back(g[i]);
        sum += g[i];
      }
      const double r = rho_k_scaled(pts, p);
      m = std::max(m, std::pow(r * std::exp(sum) / std::pow(k, 0.5 * k), 1.0 / k));
      return;
    }
    for (int i = start; i < grid; ++i) {
      idx.push_back(i);
      self(self, i + 1, k);
      idx.pop_back();
    }
  };
  for (int k = 1; k <= k_max; ++k) rec(rec, 0, k);
  return m;
}

inline TailBoundReport tail_bound_check(const std::vector<double>& points, const SoftEdgeParams& p, double fitted_m) {
  require(points.size() <= 4, ErrorKind::SizeGuard, "tail_bound_check: at most 4 points");
  const int k = static_cast<int>(points.size());
  double sum = 0;
  for (double x : points) sum += x;
  const double rho = rho_k_scaled(points, p);
  const double env = std::exp(-sum) * std::pow(k, 0.5 * k) * std::pow(fitted_m, k);
  return {rho, env, fitted_m, rho <= env * (1 + 1e-12)};
}

}  // namespace involutions
