#pragma once

// Block-structured covariance algebra for the composite vector (x, y, z).
//
// The composite covariance is laid out as
//
//        | Rxx  Rxy  Rxz |
//    R = | Ryx  Ryy  Ryz |      u = (x, y),  v = (y, z)
//        | Rzx  Rzy  Rzz |
//
// and may be parsed either as [Ruu Ruz; Rzu Rzz] or as [Rxx Rxv; Rvx Rvv].
// Conditional (error) covariances are Schur complements of these parsings.

#include <Eigen/Dense>

#include <cstddef>

namespace cohercause {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dimensions of x (p), y (q) and the conditioning vector z (r).
struct BlockDims {
  std::size_t p = 1;
  std::size_t q = 1;
  std::size_t r = 0;

  /// Throws ShapeError unless p >= 1 and q >= 1.
  void validate() const;
  std::size_t total() const noexcept { return p + q + r; }

  friend bool operator==(const BlockDims&, const BlockDims&) = default;
};

/// The six distinct blocks of a composite covariance.
struct CovarianceBlocks {
  Matrix xx, xy, xz;
  Matrix yy, yz;
  Matrix zz;
};

/// Validated, symmetric, positive semidefinite (p+q+r)-square covariance.
/// Immutable after construction.
class CompositeCovariance {
 public:
  /// Symmetrizes `entries` as (A + A^T)/2 and validates it. Throws ShapeError
  /// when the size disagrees with `dims` or the input is visibly asymmetric,
  /// and NotPositiveDefinite when an eigenvalue is below -1e-10 * trace.
  CompositeCovariance(Matrix entries, BlockDims dims);

  const Matrix& matrix() const noexcept { return entries_; }
  const BlockDims& dims() const noexcept { return dims_; }

  auto xx() const { return entries_.block(0, 0, dims_.p, dims_.p); }
  auto xy() const { return entries_.block(0, dims_.p, dims_.p, dims_.q); }
  auto xz() const { return entries_.block(0, dims_.p + dims_.q, dims_.p, dims_.r); }
  auto yy() const { return entries_.block(dims_.p, dims_.p, dims_.q, dims_.q); }
  auto yz() const { return entries_.block(dims_.p, dims_.p + dims_.q, dims_.q, dims_.r); }
  auto zz() const {
    return entries_.block(dims_.p + dims_.q, dims_.p + dims_.q, dims_.r, dims_.r);
  }

  // Composite parsings.
  auto uu() const { return entries_.topLeftCorner(dims_.p + dims_.q, dims_.p + dims_.q); }
  auto uz() const { return entries_.topRightCorner(dims_.p + dims_.q, dims_.r); }
  auto xv() const { return entries_.topRightCorner(dims_.p, dims_.q + dims_.r); }
  auto vv() const { return entries_.bottomRightCorner(dims_.q + dims_.r, dims_.q + dims_.r); }

 private:
  Matrix entries_;
  BlockDims dims_;
};

/// Error covariances after linear regression.
///   Ruu_z: (x, y) regressed onto z
///   Rxx_z, Ryy_z, Rxy_z: the blocks of Ruu_z
///   Rxx_v: x regressed onto v = (y, z)
struct ConditionalCovariances {
  Matrix Ruu_z;
  Matrix Rxx_z;
  Matrix Ryy_z;
  Matrix Rxy_z;
  Matrix Rxx_v;
};

enum class BlockSelector { uu, xx, yy, xx_v };

CompositeCovariance assemble_composite(const CovarianceBlocks& blocks, BlockDims dims);

/// Conditional covariance named by `target`. With r = 0 the u-blocks are
/// returned unchanged.
Matrix schur_complement(const CompositeCovariance& R, BlockSelector target);

/// All conditional covariances at once (one factorization of Rzz and Rvv).
ConditionalCovariances conditional_covariances(const CompositeCovariance& R);

/// ((R^-1)_NW)^-1, the (p+q)-square Northwest block of the information
/// matrix inverted back. Equals schur_complement(R, uu).
Matrix northwest_readout(const CompositeCovariance& R);

/// Symmetric A^{-1/2} by eigendecomposition.
Matrix inv_sqrt_spd(const Matrix& A);

/// log det A by Cholesky factorization.
double log_det_spd(const Matrix& A);

/// Computes A - B C^{-1} B^T, with C conditioned by the jitter policy:
/// if cond(C) > 1e12, C += 1e-10 * mean(diag C) * I and retry once.
Matrix schur(const Matrix& A, const Matrix& B, const Matrix& C);

/// Conditioning limit and jitter scale used by schur().
inline constexpr double kMaxConditionNumber = 1e12;
inline constexpr double kJitterScale = 1e-10;

}  // namespace cohercause
