#pragma once

// Window probabilities of a Pfaffian point process restricted to a finite
// node set (lattice points, or quadrature nodes with weights folded in).
//
// With A the assembled 2n x 2n kernel on the nodes and A_r its columns for
// the nodes of interval r,
//   G(xi) = < prod_j (1 - sum_r xi_r chi_r(h_j)) > = qdet(1 - sum_r xi_r A_r),
// and qdet(X)^2 = det X for self-dual X, so
//   G = qdet(base) * exp(1/2 log det(1 + sum_r z_r X_r))
// is expanded as an exact multivariate Taylor polynomial.

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "errors.hpp"
#include "pfaffian.hpp"

namespace involutions {

/// Multivariate polynomial: exponent vector -> coefficient.
using Polynomial = std::map<std::vector<int>, double>;

/// Nodes grouped by interval: nodes of interval r occupy a contiguous range,
/// intervals in increasing r. A is the 2n x 2n assembly, already weighted.
struct NodeSystem {
  Eigen::MatrixXd A;
  std::vector<int> count;  // nodes per interval
  // False when the discretisation is only self-dual in the limit (product
  // integration of a discontinuous entry); qdet is then taken as sqrt(det).
  bool self_dual = true;

  int intervals() const { return static_cast<int>(count.size()); }
  int nodes() const { return static_cast<int>(A.rows() / 2); }
};

/// Build a NodeSystem. nodes[r] lists the points of interval r and
/// weights[r] their quadrature weights; block(x, y) is the kernel.
template <typename Block>
NodeSystem make_node_system(const std::vector<std::vector<double>>& nodes,
                            const std::vector<std::vector<double>>& weights, Block&& block) {
  NodeSystem sys;
  std::vector<double> pts, sw;
  for (size_t r = 0; r < nodes.size(); ++r) {
    sys.count.push_back(static_cast<int>(nodes[r].size()));
    for (size_t i = 0; i < nodes[r].size(); ++i) {
      pts.push_back(nodes[r][i]);
      sw.push_back(std::sqrt(weights[r][i]));
    }
  }
  const int n = static_cast<int>(pts.size());
  sys.A = assemble_kernel(n, [&](int a, int b) {
    KernelBlock k = block(pts[a], pts[b]);
    const double w = sw[a] * sw[b];
    return KernelBlock{w * k.s, w * k.i, w * k.d, w * k.s_t};
  });
  return sys;
}

/// The index set {n : n_1 + ... + n_r <= r - 1 for every r}.
inline std::vector<std::vector<int>> counting_set(int l) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(l, 0);
  auto rec = [&](auto&& self, int r, int used) -> void {
    if (r == l) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; used + v <= r; ++v) {
      cur[r] = v;
      self(self, r + 1, used + v);
    }
    cur[r] = 0;
  };
  rec(rec, 0, 0);
  return out;
}

namespace detail {

inline int degree(const std::vector<int>& m) {
  int d = 0;
  for (int v : m) d += v;
  return d;
}

/// All exponent vectors in l variables of total degree exactly d.
inline std::vector<std::vector<int>> monomials(int l, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(l, 0);
  auto rec = [&](auto&& self, int r, int left) -> void {
    if (r == l - 1) {
      cur[r] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[r] = v;
      self(self, r + 1, left - v);
    }
  };
  if (l > 0) rec(rec, 0, d);
  return out;
}

/// log det(1 + sign * sum_r z_r X P_r) up to total degree D, where P_r keeps
/// the columns of interval r.
inline Polynomial log_det_series(const Eigen::MatrixXd& X, const std::vector<int>& count, int D, double sign) {
  const int l = static_cast<int>(count.size());
  std::vector<Eigen::Index> off(l + 1, 0);
  for (int r = 0; r < l; ++r) off[r + 1] = off[r] + 2 * count[r];
  Polynomial L;
  std::map<std::vector<int>, Eigen::MatrixXd> prev;
  const Eigen::Index n = X.rows();
  for (int k = 1; k <= D; ++k) {
    std::map<std::vector<int>, Eigen::MatrixXd> cur;
    for (const auto& m : monomials(l, k)) {
      Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
      bool any = false;
      for (int r = 0; r < l; ++r) {
        if (m[r] == 0 || count[r] == 0) continue;
        const Eigen::Index c0 = off[r], w = off[r + 1] - off[r];
        if (k == 1) {
          P.middleCols(c0, w) = X.middleCols(c0, w);
          any = true;
          continue;
        }
        std::vector<int> lower = m;
        --lower[r];
        const auto it = prev.find(lower);
        if (it == prev.end()) continue;
        P.middleCols(c0, w).noalias() = it->second * X.middleCols(c0, w);
        any = true;
      }
      if (!any) continue;
      const double coef = ((k % 2 == 1) ? 1.0 : -1.0) * std::pow(sign, k) / k;
      L[m] += coef * P.trace();
      cur.emplace(m, std::move(P));
    }
    prev = std::move(cur);
  }
  return L;
}

/// exp(c * L) up to total degree D, via m_r E[m] = sum_j j_r c L[j] E[m - j].
inline Polynomial exp_series(const Polynomial& L, double c, int l, int D) {
  Polynomial E;
  E[std::vector<int>(l, 0)] = 1.0;
  for (int d = 1; d <= D; ++d) {
    for (const auto& m : monomials(l, d)) {
      int r = 0;
      while (m[r] == 0) ++r;
      double s = 0;
      for (const auto& [j, v] : L) {
        if (j[r] == 0) continue;
        std::vector<int> rest(l);
        bool ok = true;
        for (int t = 0; t < l; ++t) {
          rest[t] = m[t] - j[t];
          ok = ok && rest[t] >= 0;
        }
        if (!ok) continue;
        const auto it = E.find(rest);
        if (it != E.end()) s += j[r] * c * v * it->second;
      }
      if (s != 0.0) E[m] = s / m[r];
    }
  }
  return E;
}

inline double falling_ratio(const std::vector<int>& m, const std::vector<int>& n) {
  // prod_r m_r! / ((m_r - n_r)! n_r!)
  double v = 1;
  for (size_t r = 0; r < m.size(); ++r)
    for (int t = 0; t < n[r]; ++t) v *= static_cast<double>(m[r] - t) / (t + 1);
  return v;
}

}  // namespace detail

/// Taylor coefficients of G(xi) at xi = 0 up to total degree p_max.
inline Polynomial generating_series(const NodeSystem& sys, int p_max) {
  const Polynomial L = detail::log_det_series(sys.A, sys.count, p_max, -1.0);
  return detail::exp_series(L, 0.5, sys.intervals(), p_max);
}

struct SeriesProbability {
  double value;
  double last_term;  // contribution of the degree-p_max coefficients
  int terms;
};

/// sum over the counting set of E(n) = (-1)^{|n|}/n! d^n G(1), from the
/// degree <= p_max Taylor coefficients at 0.
inline SeriesProbability window_probability_series(const NodeSystem& sys, int p_max) {
  require(p_max >= 1, ErrorKind::InvalidArgument, "window_probability_series: p_max >= 1");
  const int l = sys.intervals();
  const Polynomial c = generating_series(sys, p_max);
  const auto set = counting_set(l);
  double total = 0, last = 0;
  for (const auto& [m, cm] : c) {
    double contrib = 0;
    for (const auto& n : set) {
      bool ok = true;
      for (int r = 0; r < l; ++r) ok = ok && m[r] >= n[r];
      if (!ok) continue;
      contrib += ((detail::degree(n) % 2 == 0) ? 1.0 : -1.0) * detail::falling_ratio(m, n);
    }
    total += cm * contrib;
    if (detail::degree(m) == p_max) last += cm * contrib;
  }
  return {total, last, p_max};
}

/// The same probability from the expansion at xi = 1:
///   G(1 - z) = qdet(1 - A) exp(1/2 log det(1 + sum_r z_r (1-A)^{-1} A_r)),
/// which needs only total degree l - 1.
inline double window_probability_exact(const NodeSystem& sys) {
  const int l = sys.intervals();
  const Eigen::Index n = sys.A.rows();
  if (n == 0) return 1.0;
  const Eigen::MatrixXd base = Eigen::MatrixXd::Identity(n, n) - sys.A;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(base);
  double g1;
  if (sys.self_dual) {
    g1 = qdet(base);
  } else {
    const double det = lu.determinant();
    require(det >= -1e-10, ErrorKind::NearDegenerate, "window_probability_exact: negative determinant");
    g1 = std::sqrt(std::max(det, 0.0));
  }
  if (l == 1) return g1;
  require(lu.isInvertible(), ErrorKind::SingularDeterminant, "window_probability_exact: 1 - K is singular");
  const Eigen::MatrixXd X = lu.solve(sys.A);
  const Polynomial L = detail::log_det_series(X, sys.count, l - 1, 1.0);
  const Polynomial E = detail::exp_series(L, 0.5, l, l - 1);
  double total = 0;
  for (const auto& m : counting_set(l)) {
    const auto it = E.find(m);
    if (it != E.end()) total += it->second;
  }
  return g1 * total;
}

}  // namespace involutions
