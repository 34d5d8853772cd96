#pragma once

// Samplers for random involutions and the symmetric geometric lattice model,
// plus empirical statistics of the scaled rightmost rows.
//
// Sampling is split into fixed chunks; chunk c always uses the engine seeded
// from (seed, stream, c), so results do not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>
#include <vector>

#include "bessel_kernel.hpp"
#include "combinat.hpp"
#include "errors.hpp"
#include "finite_kernel.hpp"

namespace involutions {

struct RngStream {
  std::uint64_t seed = 20030101;
  std::uint64_t stream = 0;

  std::mt19937_64 engine(std::uint64_t chunk = 0) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
  }
};

/// Uniform over the t_{n,m} involutions of 2n + m symbols with m fixed points.
inline Involution sample_involution(int n, int m, std::mt19937_64& gen) {
  require(n >= 0 && m >= 0, ErrorKind::InvalidArgument, "sample_involution: n, m >= 0");
  const int N = 2 * n + m;
  std::vector<int> symbols(N);
  std::iota(symbols.begin(), symbols.end(), 1);
  std::shuffle(symbols.begin(), symbols.end(), gen);
  std::vector<int> map(N);
  for (int k = 0; k < m; ++k) map[symbols[k] - 1] = symbols[k];
  for (int k = m; k < N; k += 2) {
    map[symbols[k] - 1] = symbols[k + 1];
    map[symbols[k + 1] - 1] = symbols[k];
  }
  Involution inv;
  inv.map = std::move(map);
  return inv;
}

/// n ~ Poisson(Q/2), m ~ Poisson(sqrt(Q alpha)), then a uniform involution.
inline Involution sample_poissonized(const PoissonParams& p, std::mt19937_64& gen) {
  std::poisson_distribution<int> pairs(p.Q / 2.0);
  const int n = pairs(gen);
  const double rate = std::sqrt(p.Q * p.alpha);
  int m = 0;
  if (rate > 0) m = std::poisson_distribution<int>(rate)(gen);
  return sample_involution(n, m, gen);
}

/// RSK shape of the two-line array of a symmetric M x M nonnegative integer
/// matrix (row-major): pairs (i, j) repeated x_ij times in lexicographic order.
inline Partition shape_of_symmetric_matrix(const std::vector<int>& x, int M) {
  require(static_cast<int>(x.size()) == M * M, ErrorKind::InvalidArgument, "shape_of_symmetric_matrix: size");
  std::vector<int> word;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      require(x[i * M + j] >= 0 && x[i * M + j] == x[j * M + i], ErrorKind::InvalidArgument,
              "shape_of_symmetric_matrix: needs a symmetric nonnegative matrix");
      word.insert(word.end(), x[i * M + j], j);
    }
  return rsk_shape_of_word(word);
}

/// Shape from the symmetric geometric matrix via RSK on its two-line array.
inline Partition sample_geometric_shape(const FiniteModelParams& p, std::mt19937_64& gen) {
  require(p.M <= 200, ErrorKind::SizeGuard, "sample_geometric_shape: M <= 200");
  const int M = p.M;
  std::geometric_distribution<int> off(1.0 - p.q), diag(1.0 - std::sqrt(p.alpha * p.q));
  std::vector<int> x(static_cast<size_t>(M) * M);
  for (int i = 0; i < M; ++i) {
    x[i * M + i] = diag(gen);
    for (int j = i + 1; j < M; ++j) x[i * M + j] = x[j * M + i] = off(gen);
  }
  return shape_of_symmetric_matrix(x, M);
}

/// Fixed-(n, m) scaling with m = floor(sqrt(2n) - 2 w (2n)^{1/3}), clamped at 0.
struct ScalingSpec {
  int n = 0;
  int m = 0;
  double w = 0.0;

  static ScalingSpec from_w(int n, double w) {
    require(n >= 1, ErrorKind::InvalidArgument, "ScalingSpec: n >= 1");
    const double two_n = 2.0 * n;
    const double target = std::floor(std::sqrt(two_n) - 2.0 * w * std::cbrt(two_n));
    return {n, static_cast<int>(std::max(0.0, target)), w};
  }
  int N() const { return 2 * n + m; }
  double centre() const { return 2.0 * std::sqrt(static_cast<double>(N())); }
  double scale() const { return std::pow(static_cast<double>(N()), 1.0 / 6.0); }
  double scaled(double lambda) const { return (lambda - centre()) / scale(); }
  double unscaled(double s) const { return centre() + scale() * s; }
};

/// Poissonized counterpart: centre 2 sqrt(Q), scale Q^{1/6}.
struct PoissonScaling {
  double Q;
  double w;
  PoissonParams params() const { return PoissonParams::from_scaling(Q, w); }
  double centre() const { return 2.0 * std::sqrt(Q); }
  double scale() const { return std::pow(Q, 1.0 / 6.0); }
  double scaled(double lambda) const { return (lambda - centre()) / scale(); }
};

inline int default_threads() {
  if (const char* env = std::getenv("INVOLUTIONS_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(chunk, first, last) over [0, total) in chunks of chunk_size.
inline void for_each_chunk(int total, int chunk_size, int threads,
                           const std::function<void(int, int, int)>& body) {
  const int chunks = (total + chunk_size - 1) / chunk_size;
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int c; (c = next++) < chunks;) body(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
  };
  threads = std::max(1, std::min(threads, chunks));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

/// Raw row lengths lambda^(1..k_max) per sample, in sample order.
struct RowSamples {
  int k_max = 0;
  std::vector<int> rows;  // samples x k_max
  std::vector<int> fixed_points;

  int samples() const { return k_max == 0 ? 0 : static_cast<int>(rows.size()) / k_max; }
  int row(int sample, int k) const { return rows[static_cast<size_t>(sample) * k_max + k]; }
};

inline RowSamples sample_rows(const std::function<Involution(std::mt19937_64&)>& draw, int k_max, int samples,
                              const RngStream& rng, int threads = default_threads()) {
  require(k_max >= 1, ErrorKind::InvalidArgument, "sample_rows: k_max >= 1");
  RowSamples out;
  out.k_max = k_max;
  out.rows.assign(static_cast<size_t>(samples) * k_max, 0);
  out.fixed_points.assign(samples, 0);
  for_each_chunk(samples, 256, threads, [&](int chunk, int first, int last) {
    std::mt19937_64 gen = rng.engine(chunk);
    for (int s = first; s < last; ++s) {
      const Involution inv = draw(gen);
      const Partition shape = rsk_shape(inv);
      for (int k = 0; k < k_max; ++k) out.rows[static_cast<size_t>(s) * k_max + k] = shape.part(k);
      out.fixed_points[s] = inv.fixed_points();
    }
  });
  return out;
}

/// Scaled rows with per-k empirical CDFs and joint window frequencies.
struct EmpiricalScaled {
  RowSamples raw;
  std::function<double(double)> to_scaled;
  std::function<double(double)> to_raw;

  int samples() const { return raw.samples(); }
  double scaled(int sample, int k) const { return to_scaled(raw.row(sample, k)); }

  /// Fraction of samples with lambda^(k) <= centre + scale * s.
  double cdf(int k, double s) const {
    const double limit = to_raw(s);
    int hits = 0;
    for (int i = 0; i < samples(); ++i) hits += raw.row(i, k) <= limit;
    return static_cast<double>(hits) / samples();
  }

  /// Fraction with lambda^(j) <= a_j for all thresholds.
  double joint(const std::vector<double>& s) const {
    require(static_cast<int>(s.size()) <= raw.k_max, ErrorKind::InvalidArgument, "joint: too many thresholds");
    int hits = 0;
    for (int i = 0; i < samples(); ++i) {
      bool ok = true;
      for (size_t j = 0; j < s.size() && ok; ++j) ok = raw.row(i, static_cast<int>(j)) <= to_raw(s[j]);
      hits += ok;
    }
    return static_cast<double>(hits) / samples();
  }

  /// Sorted distinct raw values of lambda^(k).
  std::vector<int> support(int k) const {
    std::vector<int> v;
    for (int i = 0; i < samples(); ++i) v.push_back(raw.row(i, k));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }
};

inline EmpiricalScaled empirical_scaled_cdf(const ScalingSpec& spec, int k_max, int samples, const RngStream& rng,
                                            int threads = default_threads()) {
  require(samples >= 100, ErrorKind::InvalidArgument, "empirical_scaled_cdf: samples >= 100");
  EmpiricalScaled e;
  e.raw = sample_rows([&](std::mt19937_64& g) { return sample_involution(spec.n, spec.m, g); }, k_max, samples, rng,
                      threads);
  e.to_scaled = [spec](double l) { return spec.scaled(l); };
  e.to_raw = [spec](double s) { return spec.unscaled(s); };
  return e;
}

inline EmpiricalScaled empirical_scaled_cdf_poissonized(const PoissonScaling& sc, int k_max, int samples,
                                                        const RngStream& rng, int threads = default_threads()) {
  require(samples >= 100, ErrorKind::InvalidArgument, "empirical_scaled_cdf_poissonized: samples >= 100");
  const PoissonParams p = sc.params();
  EmpiricalScaled e;
  e.raw = sample_rows([&](std::mt19937_64& g) { return sample_poissonized(p, g); }, k_max, samples, rng, threads);
  e.to_scaled = [sc](double l) { return sc.scaled(l); };
  e.to_raw = [sc](double s) { return sc.centre() + sc.scale() * s; };
  return e;
}

/// Kolmogorov-Smirnov distance between the ECDF of the integer-valued
/// lambda^(k) and a continuous limit F. The ECDF is compared at each
/// observed value L with F evaluated at the scaled midpoint L + 1/2.
inline double ks_lattice(const EmpiricalScaled& e, int k, const std::function<double(double)>& F) {
  const std::vector<int> values = e.support(k);
  std::vector<int> sorted;
  for (int i = 0; i < e.samples(); ++i) sorted.push_back(e.raw.row(i, k));
  std::sort(sorted.begin(), sorted.end());
  double d = 0;
  const double n = static_cast<double>(sorted.size());
  d = std::max(d, F(e.to_scaled(values.front() - 0.5)));
  for (int L : values) {
    const double emp = (std::upper_bound(sorted.begin(), sorted.end(), L) - sorted.begin()) / n;
    d = std::max(d, std::abs(emp - F(e.to_scaled(L + 0.5))));
  }
  return d;
}

struct DepoissonizationReport {
  std::vector<int> thresholds;  // raw lambda values
  std::vector<double> scaled;   // fixed-(n,m) scaling of the thresholds
  std::vector<double> fixed;
  std::vector<double> poissonized;
  double max_discrepancy = 0;
  ScalingSpec spec;
};

/// Pr(lambda^(1) <= L) under fixed n = floor(Q/2), m = floor(sqrt(Q) - 2w Q^{1/3})
/// against the Poissonized ensemble at (Q, alpha(w)), on the integer L
/// covering either sample's range.
inline DepoissonizationReport depoissonization_compare(double Q, double w, int samples, const RngStream& rng,
                                                       int threads = default_threads()) {
  require(Q > 0 && samples >= 100, ErrorKind::InvalidArgument, "depoissonization_compare: Q > 0, samples >= 100");
  DepoissonizationReport rep;
  ScalingSpec spec;
  spec.n = static_cast<int>(std::floor(Q / 2));
  spec.m = static_cast<int>(std::max(0.0, std::floor(std::sqrt(Q) - 2 * w * std::cbrt(Q))));
  spec.w = w;
  rep.spec = spec;
  RngStream a = rng, b = rng;
  b.stream = rng.stream + 1;
  const RowSamples fixed =
      sample_rows([&](std::mt19937_64& g) { return sample_involution(spec.n, spec.m, g); }, 1, samples, a, threads);
  const PoissonParams p = PoissonParams::from_scaling(Q, w);
  const RowSamples pois = sample_rows([&](std::mt19937_64& g) { return sample_poissonized(p, g); }, 1, samples, b, threads);
  std::vector<int> fs(fixed.rows), ps(pois.rows);
  std::sort(fs.begin(), fs.end());
  std::sort(ps.begin(), ps.end());
  const int lo = std::min(fs.front(), ps.front()), hi = std::max(fs.back(), ps.back());
  for (int L = lo; L <= hi; ++L) {
    const double f = (std::upper_bound(fs.begin(), fs.end(), L) - fs.begin()) / static_cast<double>(fs.size());
    const double g = (std::upper_bound(ps.begin(), ps.end(), L) - ps.begin()) / static_cast<double>(ps.size());
    rep.thresholds.push_back(L);
    rep.scaled.push_back(spec.N() > 0 ? spec.scaled(L) : 0.0);
    rep.fixed.push_back(f);
    rep.poissonized.push_back(g);
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(f - g));
  }
  return rep;
}

}  // namespace involutions
