#include <gtest/gtest.h>

#include <cmath>

#include "cohercause/covariance.hpp"
#include "cohercause/error.hpp"
#include "support.hpp"

namespace cc = cohercause;
using namespace testing_support;

TEST(BlockDims, RejectsEmptyXOrY) {
  EXPECT_THROW((cc::BlockDims{0, 1, 0}.validate()), cc::ShapeError);
  EXPECT_THROW((cc::BlockDims{1, 0, 3}.validate()), cc::ShapeError);
  EXPECT_NO_THROW((cc::BlockDims{1, 1, 0}.validate()));
}

TEST(CompositeCovariance, RejectsWrongShape) {
  EXPECT_THROW(cc::CompositeCovariance(Matrix::Identity(3, 3), {1, 1, 2}), cc::ShapeError);
  EXPECT_THROW(cc::CompositeCovariance(Matrix::Identity(3, 4), {1, 1, 1}), cc::ShapeError);
}

TEST(CompositeCovariance, RejectsAsymmetry) {
  Matrix R = Matrix::Identity(3, 3);
  R(0, 1) = 0.5;
  EXPECT_THROW(cc::CompositeCovariance(R, {1, 1, 1}), cc::ShapeError);
}

TEST(CompositeCovariance, RejectsIndefiniteUsingEigenvalueOracle) {
  // v = (1, -1, -1) gives v^T R v = 3 - 5.4 < 0.
  Matrix R(3, 3);
  R << 1.0, 0.9, 0.9, 0.9, 1.0, -0.9, 0.9, -0.9, 1.0;
  Eigen::Vector3d v(1.0, -1.0, -1.0);
  ASSERT_LT(v.dot(R * v), 0.0);
  EXPECT_THROW(cc::CompositeCovariance(R, {1, 1, 1}), cc::NotPositiveDefinite);
}

TEST(CompositeCovariance, BlockAccessorsPartitionTheMatrix) {
  std::mt19937_64 rng(1);
  const Matrix R = random_spd(rng, 7);
  const cc::CompositeCovariance C(R, {2, 3, 2});
  EXPECT_EQ(C.xx(), R.block(0, 0, 2, 2));
  EXPECT_EQ(C.xy(), R.block(0, 2, 2, 3));
  EXPECT_EQ(C.xz(), R.block(0, 5, 2, 2));
  EXPECT_EQ(C.yy(), R.block(2, 2, 3, 3));
  EXPECT_EQ(C.yz(), R.block(2, 5, 3, 2));
  EXPECT_EQ(C.zz(), R.block(5, 5, 2, 2));
  EXPECT_EQ(C.vv(), R.block(2, 2, 5, 5));
}

TEST(AssembleComposite, MatchesHandBuiltMatrix) {
  std::mt19937_64 rng(2);
  const Matrix R = random_spd(rng, 5);
  cc::CovarianceBlocks b;
  b.xx = R.block(0, 0, 2, 2);
  b.xy = R.block(0, 2, 2, 1);
  b.xz = R.block(0, 3, 2, 2);
  b.yy = R.block(2, 2, 1, 1);
  b.yz = R.block(2, 3, 1, 2);
  b.zz = R.block(3, 3, 2, 2);
  const auto C = cc::assemble_composite(b, {2, 1, 2});
  EXPECT_LT((C.matrix() - R).norm(), 1e-15);
}

TEST(Schur, MatchesExplicitInverse) {
  for (const auto& [R, dims] : pd_corpus(30, 3)) {
    const cc::CompositeCovariance C(R, dims);
    const Matrix expected = naive_schur(C.uu(), C.uz(), C.zz());
    const Matrix got = cc::schur_complement(C, cc::BlockSelector::uu);
    EXPECT_LT((got - expected).norm(), 1e-10 * expected.norm());
  }
}

TEST(Schur, EmptyConditioningReturnsBlock) {
  std::mt19937_64 rng(4);
  const Matrix R = random_spd(rng, 3);
  const cc::CompositeCovariance C(R, {2, 1, 0});
  EXPECT_EQ(cc::schur_complement(C, cc::BlockSelector::uu), R);
}

TEST(Schur, SingularConditioningThrows) {
  const Matrix A = Matrix::Identity(1, 1);
  const Matrix B = Matrix::Ones(1, 2);
  EXPECT_THROW(cc::schur(A, B, Matrix::Zero(2, 2)), cc::NotPositiveDefinite);
}

TEST(ConditionalCovariances, SubBlocksOfUuGivenZ) {
  std::mt19937_64 rng(5);
  const cc::CompositeCovariance C(random_spd(rng, 6), {2, 2, 2});
  const auto c = cc::conditional_covariances(C);
  EXPECT_LT((c.Rxx_z - c.Ruu_z.topLeftCorner(2, 2)).norm(), 1e-14);
  EXPECT_LT((c.Ryy_z - c.Ruu_z.bottomRightCorner(2, 2)).norm(), 1e-14);
  EXPECT_LT((c.Rxy_z - c.Ruu_z.topRightCorner(2, 2)).norm(), 1e-14);
  const Matrix Rxx_v = naive_schur(C.xx(), C.xv(), C.vv());
  EXPECT_LT((c.Rxx_v - Rxx_v).norm(), 1e-12);
}

TEST(NorthwestReadout, EqualsSchurRoute) {
  for (const auto& [R, dims] : pd_corpus(30, 6)) {
    const cc::CompositeCovariance C(R, dims);
    const Matrix nw = cc::northwest_readout(C);
    const Matrix schur = naive_schur(C.uu(), C.uz(), C.zz());
    EXPECT_LT((nw - schur).norm(), 1e-10 * schur.norm());
  }
}

TEST(Spd, InverseSquareRootSquaresToInverse) {
  std::mt19937_64 rng(7);
  const Matrix A = random_spd(rng, 5);
  const Matrix W = cc::inv_sqrt_spd(A);
  EXPECT_LT((W * A * W - Matrix::Identity(5, 5)).norm(), 1e-12);
  EXPECT_LT((W - W.transpose()).norm(), 1e-14);
}

TEST(Spd, LogDetMatchesDeterminant) {
  std::mt19937_64 rng(8);
  const Matrix A = random_spd(rng, 6);
  EXPECT_NEAR(cc::log_det_spd(A), std::log(A.determinant()), 1e-12);
  EXPECT_THROW(cc::log_det_spd(-A), cc::NotPositiveDefinite);
  EXPECT_THROW(cc::log_det_spd(Matrix::Ones(2, 3)), cc::ShapeError);
}
