#pragma once

// Test-only generators and reference formulas. Nothing here calls into the
// library's numerical routines, so they can serve as oracles.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cohercause/covariance.hpp"

namespace testing_support {

using cohercause::BlockDims;
using cohercause::Matrix;

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  Matrix A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = n(rng);
  return A;
}

/// Well-conditioned SPD matrix: A A^T / n + 0.5 I.
inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n) {
  const Matrix A = random_matrix(rng, n, n + 3);
  Matrix S = A * A.transpose() / static_cast<double>(n + 3);
  S.diagonal().array() += 0.5;
  return 0.5 * (S + S.transpose());
}

/// Nonsingular with singular values bounded away from zero.
inline Matrix random_invertible(std::mt19937_64& rng, Eigen::Index n) {
  Matrix T = random_matrix(rng, n, n);
  T.diagonal().array() += 3.0;
  return T;
}

/// The corpus used by the property checks: dims cycle through three shapes.
inline std::vector<std::pair<Matrix, BlockDims>> pd_corpus(std::size_t count, std::uint64_t seed) {
  const BlockDims shapes[] = {{1, 1, 1}, {3, 2, 4}, {5, 5, 2}};
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Matrix, BlockDims>> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto dims = shapes[i % 3];
    out.emplace_back(random_spd(rng, static_cast<Eigen::Index>(dims.total())), dims);
  }
  return out;
}

/// A - B C^{-1} B^T by explicit inversion.
inline Matrix naive_schur(const Matrix& A, const Matrix& B, const Matrix& C) {
  if (C.size() == 0) return A;
  return A - B * C.inverse() * B.transpose();
}

/// 1 - det Ruu|z / (det Rxx|z det Ryy|z) by explicit inversion and determinants.
inline double naive_rho2(const Matrix& R, const BlockDims& d) {
  const auto p = static_cast<Eigen::Index>(d.p), q = static_cast<Eigen::Index>(d.q),
             r = static_cast<Eigen::Index>(d.r);
  const Matrix Ruu = R.topLeftCorner(p + q, p + q);
  const Matrix Ruz = R.topRightCorner(p + q, r);
  const Matrix Rzz = R.bottomRightCorner(r, r);
  const Matrix S = naive_schur(Ruu, Ruz, Rzz);
  return 1.0 - S.determinant() /
                   (S.topLeftCorner(p, p).determinant() * S.bottomRightCorner(q, q).determinant());
}

/// Classical partial correlation of x and y given scalar z, squared.
inline double partial_correlation_squared(double rxy, double rxz, double ryz) {
  const double num = rxy - rxz * ryz;
  return num * num / ((1.0 - rxz * rxz) * (1.0 - ryz * ryz));
}

}  // namespace testing_support
