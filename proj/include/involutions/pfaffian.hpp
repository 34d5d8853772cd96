#pragma once

// Pfaffians of skew-symmetric matrices and quaternion determinants of
// self-dual 2x2-block kernel matrices.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace involutions {

/// The 2x2 block [[S(x,y), I(x,y)], [D(x,y), S(y,x)]].
struct KernelBlock {
  double s = 0;    // S(x, y)
  double i = 0;    // I(x, y)
  double d = 0;    // D(x, y)
  double s_t = 0;  // S(y, x)
};

/// Pf(A) by Parlett-Reid elimination with partial pivoting.
inline double pfaffian(Eigen::MatrixXd A) {
  const Eigen::Index n = A.rows();
  require(A.cols() == n, ErrorKind::InvalidArgument, "pfaffian: matrix must be square");
  require(n % 2 == 0, ErrorKind::DimensionOdd, "pfaffian: dimension must be even");
  if (n == 0) return 1.0;
  const double scale = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (A + A.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-12 * scale, ErrorKind::InvalidArgument, "pfaffian: matrix is not skew-symmetric");
  A = 0.5 * (A - A.transpose());
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp;
    A.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      A.row(k + 1).swap(A.row(kp));
      A.col(k + 1).swap(A.col(kp));
      pf = -pf;
    }
    if (A(k + 1, k) == 0.0) return 0.0;
    pf *= A(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index m = n - k - 2;
      const Eigen::VectorXd tau = A.row(k).tail(m).transpose() / A(k, k + 1);
      const Eigen::VectorXd col = A.col(k + 1).tail(m);
      A.bottomRightCorner(m, m) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

/// The 2k x 2k matrix whose (a, b) block is f(a, b).
template <typename F>
Eigen::MatrixXd assemble_kernel(int k, F&& f) {
  Eigen::MatrixXd A(2 * k, 2 * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const KernelBlock blk = f(a, b);
      A(2 * a, 2 * b) = blk.s;
      A(2 * a, 2 * b + 1) = blk.i;
      A(2 * a + 1, 2 * b) = blk.d;
      A(2 * a + 1, 2 * b + 1) = blk.s_t;
    }
  return A;
}

/// A Z^{-1} with Z^{-1} = 1 (x) [[0, 1], [-1, 0]].
inline Eigen::MatrixXd twist(const Eigen::MatrixXd& A) {
  Eigen::MatrixXd B(A.rows(), A.cols());
  for (Eigen::Index c = 0; c < A.cols(); c += 2) {
    B.col(c) = -A.col(c + 1);
    B.col(c + 1) = A.col(c);
  }
  return B;
}

/// Relative distance of A Z^{-1} from skew-symmetry.
inline double self_duality_violation(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd B = twist(A);
  const double scale = std::max(B.cwiseAbs().maxCoeff(), 1e-300);
  return (B + B.transpose()).cwiseAbs().maxCoeff() / scale;
}

/// qdet A = Pf(A Z^{-1}). Violations up to 1e-5 are symmetrised away.
inline double qdet(const Eigen::MatrixXd& A) {
  require(A.rows() == A.cols() && A.rows() % 2 == 0, ErrorKind::DimensionOdd,
          "qdet: need a square matrix of even dimension");
  const double v = self_duality_violation(A);
  require(v <= 1e-5, ErrorKind::SelfDualityViolation, "qdet: kernel matrix is not self-dual");
  const Eigen::MatrixXd B = twist(A);
  return pfaffian(0.5 * (B - B.transpose()));
}

/// Sum over permutations of (-1)^{k-l} prod over cycles of (1/2) Tr of the
/// cyclic block product; l is the number of cycles.
inline double qdet_cycle_expansion(const Eigen::MatrixXd& A) {
  require(A.rows() == A.cols() && A.rows() % 2 == 0, ErrorKind::DimensionOdd,
          "qdet_cycle_expansion: need a square matrix of even dimension");
  const int k = static_cast<int>(A.rows() / 2);
  require(k <= 4, ErrorKind::SizeGuard, "qdet_cycle_expansion: k <= 4");
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0;
  do {
    std::vector<bool> seen(k, false);
    double prod = 1;
    int cycles = 0;
    for (int start = 0; start < k; ++start) {
      if (seen[start]) continue;
      ++cycles;
      Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
      int a = start;
      do {
        seen[a] = true;
        m = m * A.block<2, 2>(2 * a, 2 * perm[a]);
        a = perm[a];
      } while (a != start);
      prod *= 0.5 * m.trace();
    }
    total += ((k - cycles) % 2 == 0 ? 1 : -1) * prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace involutions
