#include "cohercause/covariance.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "cohercause/error.hpp"

namespace cohercause {
namespace {

constexpr double kAsymmetryTolerance = 1e-8;
constexpr double kPsdTolerance = 1e-10;

std::string shape_of(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void expect_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* name) {
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols) {
    std::ostringstream os;
    os << "block " << name << " is " << shape_of(m) << ", expected " << rows << "x" << cols;
    throw ShapeError(os.str());
  }
}

// Cholesky of C under the jitter policy.
Eigen::LLT<Matrix> factor_conditioning(const Matrix& C) {
  Eigen::LLT<Matrix> llt(C);
  if (llt.info() == Eigen::Success && llt.rcond() * kMaxConditionNumber >= 1.0) return llt;

  const double jitter = kJitterScale * C.diagonal().mean();
  if (!(jitter > 0.0)) throw NotPositiveDefinite("conditioning block has non-positive diagonal");
  Matrix jittered = C;
  jittered.diagonal().array() += jitter;
  llt.compute(jittered);
  if (llt.info() != Eigen::Success || llt.rcond() * kMaxConditionNumber < 1.0) {
    throw NotPositiveDefinite("conditioning block of size " + std::to_string(C.rows()) +
                              " is singular beyond the jitter policy");
  }
  return llt;
}

}  // namespace

void BlockDims::validate() const {
  if (p < 1 || q < 1) {
    throw ShapeError("block dims require p >= 1 and q >= 1 (got p=" + std::to_string(p) +
                     ", q=" + std::to_string(q) + ")");
  }
}

CompositeCovariance::CompositeCovariance(Matrix entries, BlockDims dims)
    : entries_(std::move(entries)), dims_(dims) {
  dims_.validate();
  const auto n = static_cast<Eigen::Index>(dims_.total());
  if (entries_.rows() != n || entries_.cols() != n) {
    throw ShapeError("composite covariance is " + shape_of(entries_) + ", dims require " +
                     std::to_string(n) + "x" + std::to_string(n));
  }
  if (!entries_.allFinite()) throw InvalidArgument("composite covariance has non-finite entries");

  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > kAsymmetryTolerance * scale) {
    throw ShapeError("composite covariance is not symmetric");
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(entries_, Eigen::EigenvaluesOnly);
  const double floor = -kPsdTolerance * std::abs(entries_.trace());
  if (eig.eigenvalues().minCoeff() < floor) {
    std::ostringstream os;
    os << "composite covariance has eigenvalue " << eig.eigenvalues().minCoeff()
       << " below tolerance " << floor;
    throw NotPositiveDefinite(os.str());
  }
}

CompositeCovariance assemble_composite(const CovarianceBlocks& b, BlockDims dims) {
  dims.validate();
  const auto [p, q, r] = dims;
  expect_shape(b.xx, p, p, "Rxx");
  expect_shape(b.xy, p, q, "Rxy");
  expect_shape(b.xz, p, r, "Rxz");
  expect_shape(b.yy, q, q, "Ryy");
  expect_shape(b.yz, q, r, "Ryz");
  expect_shape(b.zz, r, r, "Rzz");

  const auto P = static_cast<Eigen::Index>(p);
  const auto Q = static_cast<Eigen::Index>(q);
  const auto Rd = static_cast<Eigen::Index>(r);
  Matrix R(P + Q + Rd, P + Q + Rd);
  R.block(0, 0, P, P) = b.xx;
  R.block(0, P, P, Q) = b.xy;
  R.block(0, P + Q, P, Rd) = b.xz;
  R.block(P, 0, Q, P) = b.xy.transpose();
  R.block(P, P, Q, Q) = b.yy;
  R.block(P, P + Q, Q, Rd) = b.yz;
  R.block(P + Q, 0, Rd, P) = b.xz.transpose();
  R.block(P + Q, P, Rd, Q) = b.yz.transpose();
  R.block(P + Q, P + Q, Rd, Rd) = b.zz;
  return CompositeCovariance(std::move(R), dims);
}

Matrix schur(const Matrix& A, const Matrix& B, const Matrix& C) {
  if (C.rows() == 0) return A;
  const auto llt = factor_conditioning(C);
  // B C^{-1} B^T = (L^{-1} B^T)^T (L^{-1} B^T)
  const Matrix W = llt.matrixL().solve(B.transpose());
  Matrix S = A - W.transpose() * W;
  return 0.5 * (S + S.transpose());
}

Matrix schur_complement(const CompositeCovariance& R, BlockSelector target) {
  const auto& d = R.dims();
  switch (target) {
    case BlockSelector::uu:
      return schur(R.uu(), R.uz(), R.zz());
    case BlockSelector::xx:
      return schur(R.xx(), R.xz(), R.zz());
    case BlockSelector::yy:
      return schur(R.yy(), R.yz(), R.zz());
    case BlockSelector::xx_v:
      return schur(R.xx(), R.xv(), R.vv());
  }
  throw InvalidArgument("unknown block selector for dims p=" + std::to_string(d.p));
}

ConditionalCovariances conditional_covariances(const CompositeCovariance& R) {
  const auto P = static_cast<Eigen::Index>(R.dims().p);
  const auto Q = static_cast<Eigen::Index>(R.dims().q);
  ConditionalCovariances out;
  out.Ruu_z = schur(R.uu(), R.uz(), R.zz());
  out.Rxx_z = out.Ruu_z.topLeftCorner(P, P);
  out.Ryy_z = out.Ruu_z.bottomRightCorner(Q, Q);
  out.Rxy_z = out.Ruu_z.topRightCorner(P, Q);
  out.Rxx_v = schur(R.xx(), R.xv(), R.vv());
  return out;
}

Matrix northwest_readout(const CompositeCovariance& R) {
  const auto n = static_cast<Eigen::Index>(R.dims().p + R.dims().q);
  Eigen::LLT<Matrix> llt(R.matrix());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("composite covariance is singular; the information matrix does not exist");
  }
  const Matrix info = llt.solve(Matrix::Identity(R.matrix().rows(), R.matrix().cols()));
  const Matrix nw = 0.5 * (info.topLeftCorner(n, n) + info.topLeftCorner(n, n).transpose());
  Eigen::LLT<Matrix> nw_llt(nw);
  if (nw_llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("Northwest block of the information matrix is not positive definite");
  }
  return nw_llt.solve(Matrix::Identity(n, n));
}

Matrix inv_sqrt_spd(const Matrix& A) {
  if (A.rows() != A.cols()) throw ShapeError("inv_sqrt_spd needs a square matrix, got " + shape_of(A));
  if (A.rows() == 0) return A;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (A + A.transpose()));
  if (eig.info() != Eigen::Success) throw NotPositiveDefinite("eigendecomposition failed");
  const Vector& lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > 0.0)) {
    std::ostringstream os;
    os << "matrix is not positive definite (smallest eigenvalue " << lambda.minCoeff() << ")";
    throw NotPositiveDefinite(os.str());
  }
  const Matrix& V = eig.eigenvectors();
  Matrix B = V * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
  return 0.5 * (B + B.transpose());
}

double log_det_spd(const Matrix& A) {
  if (A.rows() != A.cols()) throw ShapeError("log_det_spd needs a square matrix, got " + shape_of(A));
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky factorization failed");
  const auto diag = llt.matrixLLT().diagonal();
  if (!(diag.minCoeff() > 0.0)) throw NotPositiveDefinite("Cholesky factor has a zero pivot");
  return 2.0 * diag.array().log().sum();
}

}  // namespace cohercause
