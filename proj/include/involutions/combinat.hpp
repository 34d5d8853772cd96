#pragma once

// Partitions, involutions, RSK shapes and Greene's k-increasing lengths.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace involutions {

using BigInt = boost::multiprecision::cpp_int;

struct Partition {
  std::vector<int> parts;  // weakly decreasing, all >= 1

  Partition() = default;
  explicit Partition(std::vector<int> p) : parts(std::move(p)) {
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    for (size_t i = 0; i < parts.size(); ++i) {
      require(parts[i] >= 1, ErrorKind::InvalidArgument, "Partition: parts must be positive");
      require(i == 0 || parts[i - 1] >= parts[i], ErrorKind::InvalidArgument,
              "Partition: parts must be weakly decreasing");
    }
  }

  int length() const { return static_cast<int>(parts.size()); }
  int size() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  int part(int j) const { return j < length() ? parts[j] : 0; }  // 0-based

  /// lambda_1 - lambda_2 + lambda_3 - ...
  int alternating_sum() const {
    int s = 0;
    for (size_t i = 0; i < parts.size(); ++i) s += (i % 2 == 0) ? parts[i] : -parts[i];
    return s;
  }

  bool operator==(const Partition&) const = default;
  auto operator<=>(const Partition&) const = default;
};

/// A permutation with pi(pi(i)) = i; images are 1-based: map[i-1] = pi(i).
struct Involution {
  std::vector<int> map;

  Involution() = default;
  explicit Involution(std::vector<int> images) : map(std::move(images)) {
    const int n = static_cast<int>(map.size());
    for (int i = 0; i < n; ++i) {
      require(map[i] >= 1 && map[i] <= n, ErrorKind::InvalidArgument, "Involution: image out of range");
      require(map[map[i] - 1] == i + 1, ErrorKind::InvalidArgument, "Involution: pi o pi != id");
    }
  }

  static Involution identity(int n) {
    std::vector<int> w(n);
    std::iota(w.begin(), w.end(), 1);
    return Involution(std::move(w));
  }

  int size() const { return static_cast<int>(map.size()); }
  int fixed_points() const {
    int m = 0;
    for (int i = 0; i < size(); ++i) m += map[i] == i + 1;
    return m;
  }
  int two_cycles() const { return (size() - fixed_points()) / 2; }
};

/// Shape of the Schensted insertion tableau of a word (strict bumping).
template <typename T>
Partition rsk_shape_of_word(const std::vector<T>& word) {
  std::vector<std::vector<T>> rows;
  for (const T& v : word) {
    T x = v;
    size_t r = 0;
    for (;; ++r) {
      if (r == rows.size()) {
        rows.push_back({x});
        break;
      }
      auto it = std::upper_bound(rows[r].begin(), rows[r].end(), x);
      if (it == rows[r].end()) {
        rows[r].push_back(x);
        break;
      }
      std::swap(*it, x);
    }
  }
  std::vector<int> parts;
  for (const auto& row : rows) parts.push_back(static_cast<int>(row.size()));
  return Partition(std::move(parts));
}

inline Partition rsk_shape(const Involution& inv) { return rsk_shape_of_word(inv.map); }

struct LambdaProfile {
  std::vector<int> lambda_k;  // entry k-1 is L^(k) - L^(k-1)
  std::vector<int> lengths;   // entry k-1 is L^(k)
};

/// L^(k) = lambda_1 + ... + lambda_k of the RSK shape (Greene's theorem).
inline LambdaProfile greene_lengths(const Involution& inv, int k_max) {
  require(k_max >= 1 && k_max <= std::max(1, inv.size()), ErrorKind::InvalidArgument,
          "greene_lengths: need 1 <= k_max <= N");
  const Partition shape = rsk_shape(inv);
  LambdaProfile out;
  int total = 0;
  for (int k = 0; k < k_max; ++k) {
    out.lambda_k.push_back(shape.part(k));
    total += shape.part(k);
    out.lengths.push_back(total);
  }
  return out;
}

/// Largest total length of k disjoint increasing subsequences, by testing
/// every subset of positions. A set of distinct values splits into k
/// increasing sequences iff its longest decreasing subsequence is <= k.
inline int k_increasing_oracle(const std::vector<int>& word, int k) {
  const int n = static_cast<int>(word.size());
  require(n <= 10, ErrorKind::SizeGuard, "k_increasing_oracle: N must be <= 10");
  require(k >= 1, ErrorKind::InvalidArgument, "k_increasing_oracle: k must be >= 1");
  int best = 0;
  std::vector<int> sub, dec;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const int bits = std::popcount(mask);
    if (bits <= best) continue;
    sub.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(word[i]);
    dec.assign(sub.size(), 1);
    int longest = 0;
    for (size_t i = 0; i < sub.size(); ++i) {
      for (size_t j = 0; j < i; ++j)
        if (sub[j] > sub[i]) dec[i] = std::max(dec[i], dec[j] + 1);
      longest = std::max(longest, dec[i]);
    }
    if (longest <= k) best = bits;
  }
  return best;
}

inline BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Number of involutions of {1..2n+m} with n two-cycles and m fixed points.
inline BigInt count_involutions(int n, int m) {
  require(n >= 0 && m >= 0, ErrorKind::InvalidArgument, "count_involutions: n, m >= 0");
  BigInt denom = factorial(n) * factorial(m);
  denom <<= n;
  return factorial(2 * n + m) / denom;
}

/// sum over 2n + m = N of t_{n,m} alpha^{m/2}.
inline double t_alpha(int N, double alpha) {
  require(N >= 0 && alpha >= 0.0, ErrorKind::InvalidArgument, "t_alpha: N >= 0, alpha >= 0");
  const double sa = std::sqrt(alpha);
  long double s = 0;
  for (int n = 0; 2 * n <= N; ++n) {
    const int m = N - 2 * n;
    const long double w = (m == 0) ? 1.0L : std::pow(static_cast<long double>(sa), m);
    s += count_involutions(n, m).convert_to<long double>() * w;
  }
  return static_cast<double>(s);
}

/// Number of standard Young tableaux of shape lambda (exact).
inline BigInt dimension_exact(const Partition& lambda) {
  const int l = lambda.length(), N = lambda.size();
  BigInt num = factorial(N), den = 1;
  for (int j = 0; j < l; ++j) {
    const int hj = lambda.parts[j] + l - 1 - j;
    den *= factorial(hj);
    for (int k = j + 1; k < l; ++k) num *= hj - (lambda.parts[k] + l - 1 - k);
  }
  return num / den;
}

/// log f_lambda = log N! + log V + log W, used past the exact range.
inline double log_dimension(const Partition& lambda) {
  if (lambda.size() <= 30) return std::log(dimension_exact(lambda).convert_to<double>());
  const int l = lambda.length();
  double s = std::lgamma(lambda.size() + 1.0);
  for (int j = 0; j < l; ++j) {
    const int hj = lambda.parts[j] + l - 1 - j;
    s -= std::lgamma(hj + 1.0);
    for (int k = j + 1; k < l; ++k) s += std::log(static_cast<double>(hj - (lambda.parts[k] + l - 1 - k)));
  }
  return s;
}

/// Probability of shape lambda when (n, m) are Poisson(Q/2), Poisson(sqrt(alpha Q)).
inline double pdf_Q(const Partition& lambda, double Q, double alpha) {
  require(Q > 0.0 && alpha >= 0.0, ErrorKind::InvalidArgument, "pdf_Q: Q > 0, alpha >= 0");
  const int N = lambda.size(), m = lambda.alternating_sum();
  if (alpha == 0.0 && m > 0) return 0.0;
  double lg = -std::sqrt(alpha * Q) - Q / 2 + 0.5 * N * std::log(Q) - std::lgamma(N + 1.0) + log_dimension(lambda);
  if (m > 0) lg += 0.5 * m * std::log(alpha);
  return std::exp(lg);
}

/// All partitions of N, in reverse lexicographic order.
inline std::vector<Partition> partitions_of(int N) {
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int cap) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int p = std::min(remaining, cap); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, N, N);
  return out;
}

/// Every involution of {1..N}, in a fixed order.
inline std::vector<Involution> all_involutions(int N) {
  std::vector<Involution> out;
  std::vector<int> map(N, 0);
  auto rec = [&](auto&& self, int i) -> void {
    while (i < N && map[i] != 0) ++i;
    if (i == N) {
      out.emplace_back(map);
      return;
    }
    map[i] = i + 1;
    self(self, i + 1);
    map[i] = 0;
    for (int j = i + 1; j < N; ++j) {
      if (map[j] != 0) continue;
      map[i] = j + 1;
      map[j] = i + 1;
      self(self, i + 1);
      map[i] = map[j] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace involutions
