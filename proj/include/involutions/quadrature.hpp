#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace involutions::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points on [a, b] (Newton iteration on P_n).
inline Rule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    r.nodes[i] = xm - xl * z;
    r.nodes[n - 1 - i] = xm + xl * z;
    r.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  return r;
}

/// Cached 12-point reference rule on [-1, 1]; the panel workhorse.
inline const Rule& panel_rule() {
  static const Rule r = gauss_legendre(12);
  return r;
}

/// Composite rule on [a, b] with panels of width <= h.
inline Rule composite(double a, double b, double h, int per_panel = 12) {
  Rule out;
  if (!(b > a)) return out;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
  const Rule ref = per_panel == 12 ? panel_rule() : gauss_legendre(per_panel);
  const double width = (b - a) / panels;
  out.nodes.reserve(static_cast<size_t>(panels) * ref.nodes.size());
  out.weights.reserve(out.nodes.capacity());
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (size_t k = 0; k < ref.nodes.size(); ++k) {
      out.nodes.push_back(lo + 0.5 * width * (ref.nodes[k] + 1.0));
      out.weights.push_back(0.5 * width * ref.weights[k]);
    }
  }
  return out;
}

/// Integrates f over one panel [a, b] with the reference rule.
template <typename F>
double panel(F&& f, double a, double b) {
  const Rule& ref = panel_rule();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (size_t k = 0; k < ref.nodes.size(); ++k) s += ref.weights[k] * f(mid + half * ref.nodes[k]);
  return half * s;
}

}  // namespace involutions::quad
