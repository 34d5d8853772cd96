#pragma once

// Meixner polynomials at c = 1 and their monic normalisation C_n.
//
// Internally everything runs on the scaled values
//   Chat_n(x) = q^{x/2} C_n(x) / sigma_n,   sigma_n = n! q^{n/2} / (1-q)^n,
// which are O(1) where the weight lives and satisfy
//   sum_x Chat_m(x) Chat_n(x) = delta_{mn} / (1-q).

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "specfun.hpp"

namespace involutions {

struct MeixnerParams {
  double q;

  explicit MeixnerParams(double q_) : q(q_) {
    require(q > 0.0 && q < 1.0, ErrorKind::InvalidArgument, "MeixnerParams: need 0 < q < 1");
  }
};

/// M_n(x; 1, q) as the terminating 2F1(-n, -x; 1; 1 - 1/q) sum.
inline double meixner(int n, double x, MeixnerParams p) {
  require(n >= 0, ErrorKind::InvalidArgument, "meixner: n >= 0");
  const long double z = 1.0L - 1.0L / p.q;
  long double term = 1, sum = 1;
  for (int k = 0; k < n; ++k) {
    term *= (static_cast<long double>(k) - n) * (static_cast<long double>(k) - x) * z /
            ((k + 1.0L) * (k + 1.0L));
    sum += term;
    if (term == 0) break;
  }
  return static_cast<double>(sum);
}

/// log sigma_n = log(n! q^{n/2} / (1-q)^n).
inline long double log_sigma(int n, double q) {
  return std::lgamma(n + 1.0L) + 0.5L * n * std::log(static_cast<long double>(q)) -
         n * std::log1p(static_cast<long double>(-q));
}

/// Chat_n(x) by the scaled three-term recurrence (any real x).
inline long double normalized_c_recurrence(int n, long double x, double q) {
  const long double sq = std::sqrt(static_cast<long double>(q)), omq = 1.0L - q;
  long double prev = 0, cur = std::pow(static_cast<long double>(q), x / 2);
  for (int k = 0; k < n; ++k) {
    const long double next =
        omq / ((k + 1) * sq) * (x - (k * q + k + q) / omq) * cur - static_cast<long double>(k) / (k + 1) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Chat_n(x). At integer x < n the recurrence in n runs into the
/// recessive solution, so the duality Chat_n(x) = (-1)^{n-x} Chat_x(n) is used.
inline long double normalized_c(int n, double x, double q) {
  if (x >= 0 && x == std::floor(x) && x < n) {
    const int xi = static_cast<int>(x);
    const long double v = normalized_c_recurrence(xi, n, q);
    return ((n - xi) % 2 == 0) ? v : -v;
  }
  return normalized_c_recurrence(n, x, q);
}

/// Monic C_n(x) = n! q^n / (q-1)^n M_n(x; 1, q).
inline double monic_c(int n, double x, MeixnerParams p) {
  require(n >= 0, ErrorKind::InvalidArgument, "monic_c: n >= 0");
  const long double c = normalized_c(n, x, p.q);
  if (c == 0) return 0.0;
  const long double lg = std::log(std::abs(c)) + log_sigma(n, p.q) - 0.5L * x * std::log(static_cast<long double>(p.q));
  const long double mag = std::exp(lg);
  return static_cast<double>(c < 0 ? -mag : mag);
}

/// h_n = (n!)^2 q^n / (1-q)^{2n+1}.
inline double norm_h(int n, MeixnerParams p) {
  require(n >= 0, ErrorKind::InvalidArgument, "norm_h: n >= 0");
  return static_cast<double>(std::exp(2 * log_sigma(n, p.q) - std::log1p(static_cast<long double>(-p.q))));
}

/// n! q^{(n-M-x)/2} / (1-q)^n J_{M+x-n}(2 sqrt Q), q = Q/M^2: the Bessel form of
/// C_n(x + M). Accurate when M + x - n stays bounded; diagnostic only.
inline double monic_c_shifted_asymptotic(int n, int x, int M, double Q) {
  require(M >= 100, ErrorKind::InvalidArgument, "monic_c_shifted_asymptotic: M >= 100");
  require(Q > 0, ErrorKind::InvalidArgument, "monic_c_shifted_asymptotic: Q > 0");
  const long double q = Q / (static_cast<long double>(M) * M);
  const double j = bessel_j(M + x - n, 2.0 * std::sqrt(Q));
  if (j == 0.0) return 0.0;
  const long double lg = std::lgamma(n + 1.0L) + 0.5L * (n - M - x) * std::log(q) - n * std::log1p(-q) +
                         std::log(std::abs(static_cast<long double>(j)));
  const long double mag = std::exp(lg);
  return static_cast<double>(j < 0 ? -mag : mag);
}

/// Chat_nu(x) on the square nu, x in [0, size).
class MeixnerTable {
 public:
  MeixnerTable(double q, int size) : q_(q), size_(size), data_(static_cast<size_t>(size) * size) {
    require(q > 0.0 && q < 1.0, ErrorKind::InvalidArgument, "MeixnerTable: need 0 < q < 1");
    require(size >= 1, ErrorKind::InvalidArgument, "MeixnerTable: size >= 1");
    const long double sq = std::sqrt(static_cast<long double>(q)), omq = 1.0L - q;
    // For each argument a, run the recurrence up to degree a; the entries
    // with degree above the argument follow by duality.
    for (int a = 0; a < size; ++a) {
      long double prev = 0, cur = std::pow(static_cast<long double>(q), a / 2.0L);
      at(0, a) = cur;
      for (int k = 0; k < a; ++k) {
        const long double next =
            omq / ((k + 1) * sq) * (a - (k * q + k + q) / omq) * cur - static_cast<long double>(k) / (k + 1) * prev;
        prev = cur;
        cur = next;
        at(k + 1, a) = cur;
      }
    }
    for (int a = 0; a < size; ++a)
      for (int d = a + 1; d < size; ++d) at(d, a) = ((d - a) % 2 == 0) ? at(a, d) : -at(a, d);
  }

  double q() const { return q_; }
  int size() const { return size_; }
  long double operator()(int nu, int x) const { return data_[static_cast<size_t>(nu) * size_ + x]; }

 private:
  long double& at(int nu, int x) { return data_[static_cast<size_t>(nu) * size_ + x]; }

  double q_;
  int size_;
  std::vector<long double> data_;
};

}  // namespace involutions
