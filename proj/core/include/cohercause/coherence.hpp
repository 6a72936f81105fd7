#pragma once

// Partial coherence between x and y given z.
//
//   C     = Rxx|z^{-1/2} Rxy|z Ryy|z^{-1/2}       (coherence matrix)
//   k_i   = singular values of C                  (partial canonical correlations)
//   rho^2 = 1 - det Ruu|z / (det Rxx|z det Ryy|z) = 1 - prod(1 - k_i^2)
//
// rho^2 is invariant to nonsingular block-diagonal transforms of (x, y, z)
// and is identical whether (x, y) is regressed onto z or x onto (y, z).

#include <cstddef>
#include <vector>

#include "cohercause/covariance.hpp"

namespace cohercause {

struct PartialCoherenceResult {
  double rho2 = 0.0;
  /// Descending, clamped into [0, 1 - 1e-14]; length min(p, q).
  std::vector<double> canonical_correlations;
  Matrix coherence_matrix;
  double det_Q = 1.0;
  double log_det_Q = 0.0;
};

struct InformationMeasures {
  double kl_divergence = 0.0;       ///< nats
  double mutual_information = 0.0;  ///< nats
  double transfer_entropy = 0.0;    ///< -log(1 - rho2), nats
  double gg_measure = 1.0;          ///< exp(-transfer_entropy) = 1 - rho2
  bool saturated = false;           ///< rho2 == 1: divergences are +inf
};

/// Largest value a canonical correlation is allowed to take.
inline constexpr double kMaxCanonicalCorrelation = 1.0 - 1e-14;
/// Allowed gap between the log-det and canonical-correlation routes to 1 - rho2.
inline constexpr double kRouteAgreementTolerance = 1e-9;

Matrix coherence_matrix(const CompositeCovariance& R);

std::vector<double> partial_canonical_correlations(const Matrix& C);

/// Regress (x, y) onto z. rho2 comes from the log-det Schur route; the
/// canonical-correlation product is a cross-check and a disagreement above
/// kRouteAgreementTolerance raises NumericalInconsistency.
PartialCoherenceResult partial_coherence(const CompositeCovariance& R);

/// Regress x onto (y, z): 1 - det Rxx|v / det Rxx|z.
double partial_coherence_one_onto_two(const CompositeCovariance& R);

/// Gain Rxy|z Ryy|z^{-1} of the innovation y - yhat(z) in xhat(v).
Matrix conditional_estimator_gain(const CompositeCovariance& R);

InformationMeasures information_measures(const PartialCoherenceResult& result);

/// Covariance of (Tx x, Ty y, Tz z). Transforms must be square, match dims
/// and be nonsingular.
CompositeCovariance block_diag_transform(const CompositeCovariance& R, const Matrix& Tx,
                                         const Matrix& Ty, const Matrix& Tz);

/// Two-sided scalar sequence s[m] for m in [min_lag, min_lag + size).
/// Entries outside the stored range are zero.
struct LagSequence {
  int min_lag = 0;
  std::vector<double> values;

  int max_lag() const noexcept { return min_lag + static_cast<int>(values.size()) - 1; }
  bool covers(int m) const noexcept { return m >= min_lag && m <= max_lag(); }
  double at(int m) const noexcept {
    return covers(m) ? values[static_cast<std::size_t>(m - min_lag)] : 0.0;
  }

  /// Delta sequence: value at lag 0, zero elsewhere.
  static LagSequence impulse(double value) { return {0, {value}}; }
};

/// Conditional error covariance sequences of scalar time series.
/// xx[m] = E[ex_n ex_{n+m}], yy likewise, xy[m] = E[ex_n ey_{n+m}].
struct ConditionalSequences {
  LagSequence xx;
  LagSequence yy;
  LagSequence xy;
};

struct SpectralCoherence {
  std::vector<double> frequencies;    ///< theta_j = 2 pi j / N
  std::vector<double> narrowband_k2;  ///< |Sxy|^2 / (Sxx Syy) per frequency
  double broadband_rho2 = 0.0;        ///< 1 - exp(mean_j log(1 - k2_j))
};

inline constexpr std::size_t kDefaultSpectralGrid = 4096;

/// Narrowband squared coherence on a uniform grid and the broadband partial
/// coherence rate from the Riemann sum of log(1 - k^2). Throws
/// NotPositiveDefinite when an auto-spectrum is not strictly positive.
SpectralCoherence spectral_partial_coherence(const ConditionalSequences& sequences,
                                             std::size_t grid_size = kDefaultSpectralGrid);

}  // namespace cohercause
