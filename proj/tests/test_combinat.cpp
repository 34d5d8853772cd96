#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "involutions/combinat.hpp"

using namespace involutions;

namespace {

const std::vector<int> kFigureWord = {2, 1, 3, 6, 9, 4, 7, 8, 5};

// Longest increasing subsequence by O(n^2) DP over all prefixes.
int lis(const std::vector<int>& w) {
  std::vector<int> best(w.size(), 1);
  int out = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    for (size_t j = 0; j < i; ++j)
      if (w[j] < w[i]) best[i] = std::max(best[i], best[j] + 1);
    out = std::max(out, best[i]);
  }
  return out;
}

// Hook-length formula for f_lambda.
BigInt hook_dimension(const Partition& p) {
  BigInt num = factorial(p.size()), den = 1;
  std::vector<int> conj(p.part(0), 0);
  for (int r = 0; r < p.length(); ++r)
    for (int c = 0; c < p.parts[r]; ++c) ++conj[c];
  for (int r = 0; r < p.length(); ++r)
    for (int c = 0; c < p.parts[r]; ++c) den *= (p.parts[r] - c - 1) + (conj[c] - r - 1) + 1;
  return num / den;
}

}  // namespace

TEST(Partition, Invariants) {
  Partition p({4, 2, 2, 1});
  EXPECT_EQ(p.size(), 9);
  EXPECT_EQ(p.length(), 4);
  EXPECT_EQ(p.alternating_sum(), 4 - 2 + 2 - 1);
  EXPECT_THROW(Partition({1, 2}), Error);
}

TEST(Involution, Validation) {
  EXPECT_NO_THROW(Involution({2, 1, 3}));
  EXPECT_THROW(Involution({2, 3, 1}), Error);
  EXPECT_EQ(Involution({2, 1, 3}).fixed_points(), 1);
  EXPECT_EQ(Involution({2, 1, 3}).two_cycles(), 1);
}

TEST(Rsk, Examples) {
  EXPECT_EQ(rsk_shape(Involution::identity(3)), Partition({3}));
  EXPECT_EQ(rsk_shape(Involution::identity(3)).alternating_sum(), 3);
  EXPECT_EQ(rsk_shape(Involution({2, 1})), Partition({1, 1}));
  EXPECT_EQ(rsk_shape(Involution({2, 1})).alternating_sum(), 0);
  const Involution fig(kFigureWord);
  EXPECT_EQ(lis(kFigureWord), 5);
  EXPECT_EQ(rsk_shape(fig).part(0), 5);
}

TEST(Greene, Examples) {
  auto prof = greene_lengths(Involution::identity(3), 2);
  EXPECT_EQ(prof.lengths, (std::vector<int>{3, 3}));
  EXPECT_EQ(prof.lambda_k, (std::vector<int>{3, 0}));
  EXPECT_EQ(greene_lengths(Involution(kFigureWord), 1).lengths[0], 5);
  for (const auto& inv : all_involutions(6)) EXPECT_EQ(greene_lengths(inv, 6).lengths.back(), 6);
  EXPECT_THROW(greene_lengths(Involution::identity(3), 4), Error);
}

TEST(Oracle, Examples) {
  EXPECT_EQ(k_increasing_oracle({2, 1}, 2), 2);
  EXPECT_EQ(k_increasing_oracle(kFigureWord, 1), 5);
  EXPECT_EQ(k_increasing_oracle({1, 2, 3}, 1), 3);
  EXPECT_THROW(k_increasing_oracle(std::vector<int>(11, 1), 1), Error);
}

TEST(Oracle, ExhaustiveEquivalenceUpTo7) {
  // N = 8 runs in the acceptance binary.
  for (int N = 1; N <= 7; ++N)
    for (const auto& inv : all_involutions(N)) {
      const auto prof = greene_lengths(inv, N);
      for (int k = 1; k <= N; ++k) ASSERT_EQ(prof.lengths[k - 1], k_increasing_oracle(inv.map, k));
    }
}

TEST(Rsk, FixedPointsEqualAlternatingSum) {
  for (int N = 0; N <= 8; ++N)
    for (const auto& inv : all_involutions(N)) {
      const Partition p = rsk_shape(inv);
      ASSERT_EQ(p.alternating_sum(), inv.fixed_points());
      for (int j = 1; j < p.length(); ++j) ASSERT_GE(p.parts[j - 1], p.parts[j]);
    }
}

TEST(Counting, Examples) {
  EXPECT_EQ(count_involutions(1, 1), 3);
  EXPECT_EQ(count_involutions(0, 7), 1);
  EXPECT_EQ(count_involutions(2, 0), 3);
  // Against enumeration.
  for (int N = 0; N <= 8; ++N) {
    std::map<int, int> byM;
    for (const auto& inv : all_involutions(N)) ++byM[inv.fixed_points()];
    for (auto [m, c] : byM) EXPECT_EQ(count_involutions((N - m) / 2, m), c);
  }
}

TEST(Counting, DimensionSumsOverShapes) {
  for (int N = 0; N <= 10; ++N) {
    std::map<int, BigInt> byM;
    for (const auto& p : partitions_of(N)) {
      ASSERT_EQ(dimension_exact(p), hook_dimension(p));
      byM[p.alternating_sum()] += dimension_exact(p);
    }
    for (int m = N % 2; m <= N; m += 2) EXPECT_EQ(byM[m], count_involutions((N - m) / 2, m)) << N << " " << m;
  }
}

TEST(Counting, LogDimensionMatchesExactBeyond30) {
  Partition p({12, 9, 7, 3, 2, 1});
  EXPECT_NEAR(log_dimension(p), std::log(hook_dimension(p).convert_to<double>()), 1e-10);
}

TEST(TAlpha, Examples) {
  EXPECT_DOUBLE_EQ(t_alpha(0, 0.7), 1.0);
  EXPECT_DOUBLE_EQ(t_alpha(2, 1.0), 2.0);
  long double s = 0, fact = 1;
  for (int N = 0; N <= 40; ++N) {
    if (N > 0) fact *= N;
    s += t_alpha(N, 1.0) / fact;
  }
  EXPECT_NEAR(static_cast<double>(s), std::exp(1.5), 1e-10);
}

TEST(PdfQ, Examples) {
  EXPECT_NEAR(pdf_Q(Partition(), 2.0, 0.3), std::exp(-std::sqrt(0.6) - 1.0), 1e-15);
  EXPECT_NEAR(pdf_Q(Partition({1}), 1.0, 1.0), std::exp(-1.5), 1e-15);
  double total = 0;
  for (int N = 0; N <= 12; ++N)
    for (const auto& p : partitions_of(N)) total += pdf_Q(p, 1.0, 1.0);
  // The mass beyond |lambda| = 12 is e^{-3/2} sum_{N>12} t_N/N!, about 2.9e-5.
  long double tail = 0, fact = 1;
  for (int N = 1; N <= 60; ++N) {
    fact *= N;
    if (N > 12) tail += t_alpha(N, 1.0) / fact;
  }
  tail *= std::exp(-1.5L);
  EXPECT_NEAR(total, 1.0 - static_cast<double>(tail), 1e-12);
  EXPECT_GT(tail, 1e-6);
}
