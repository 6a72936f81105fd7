#include "cohercause/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "cohercause/error.hpp"

namespace cohercause {
namespace {

struct UConditionals {
  Matrix Ruu_z;
  Matrix Rxx_z;
  Matrix Ryy_z;
  Matrix Rxy_z;
};

UConditionals u_conditionals(const CompositeCovariance& R) {
  const auto P = static_cast<Eigen::Index>(R.dims().p);
  const auto Q = static_cast<Eigen::Index>(R.dims().q);
  UConditionals c;
  c.Ruu_z = schur(R.uu(), R.uz(), R.zz());
  c.Rxx_z = c.Ruu_z.topLeftCorner(P, P);
  c.Ryy_z = c.Ruu_z.bottomRightCorner(Q, Q);
  c.Rxy_z = c.Ruu_z.topRightCorner(P, Q);
  return c;
}

Matrix whitened_cross(const UConditionals& c) {
  return inv_sqrt_spd(c.Rxx_z) * c.Rxy_z * inv_sqrt_spd(c.Ryy_z);
}

double clamp_log_det_q(double value) { return std::min(value, 0.0); }

}  // namespace

Matrix coherence_matrix(const CompositeCovariance& R) { return whitened_cross(u_conditionals(R)); }

std::vector<double> partial_canonical_correlations(const Matrix& C) {
  if (!C.allFinite()) throw InvalidArgument("coherence matrix has non-finite entries");
  if (C.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(C);
  std::vector<double> k(svd.singularValues().data(),
                        svd.singularValues().data() + svd.singularValues().size());
  for (auto& v : k) v = std::clamp(v, 0.0, kMaxCanonicalCorrelation);
  std::sort(k.begin(), k.end(), std::greater<>());
  return k;
}

PartialCoherenceResult partial_coherence(const CompositeCovariance& R) {
  const auto c = u_conditionals(R);

  PartialCoherenceResult out;
  out.log_det_Q = clamp_log_det_q(log_det_spd(c.Ruu_z) - log_det_spd(c.Rxx_z) -
                                  log_det_spd(c.Ryy_z));
  out.det_Q = std::exp(out.log_det_Q);
  out.rho2 = std::clamp(-std::expm1(out.log_det_Q), 0.0, 1.0) + 0.0;  // no -0

  out.coherence_matrix = whitened_cross(c);
  out.canonical_correlations = partial_canonical_correlations(out.coherence_matrix);

  double log_prod = 0.0;
  for (double k : out.canonical_correlations) log_prod += std::log1p(-k * k);
  const double gap = std::abs(out.det_Q - std::exp(log_prod));
  if (gap > kRouteAgreementTolerance) {
    std::ostringstream os;
    os << "log-det and canonical-correlation routes disagree: det Q = " << out.det_Q
       << ", prod(1 - k^2) = " << std::exp(log_prod) << " (gap " << gap << ")";
    throw NumericalInconsistency(os.str());
  }
  return out;
}

double partial_coherence_one_onto_two(const CompositeCovariance& R) {
  const Matrix Rxx_z = schur(R.xx(), R.xz(), R.zz());
  const Matrix Rxx_v = schur(R.xx(), R.xv(), R.vv());
  const double log_det_P = clamp_log_det_q(log_det_spd(Rxx_v) - log_det_spd(Rxx_z));
  return std::clamp(-std::expm1(log_det_P), 0.0, 1.0) + 0.0;
}

Matrix conditional_estimator_gain(const CompositeCovariance& R) {
  const auto c = u_conditionals(R);
  Eigen::LLT<Matrix> llt(c.Ryy_z);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("Ryy|z is not positive definite; the gain is undefined");
  }
  // Rxy|z Ryy|z^{-1} = (Ryy|z^{-1} Ryx|z)^T by symmetry of Ryy|z.
  return llt.solve(c.Rxy_z.transpose()).transpose();
}

InformationMeasures information_measures(const PartialCoherenceResult& result) {
  if (!(result.rho2 >= 0.0 && result.rho2 <= 1.0)) {
    throw InvalidArgument("partial coherence must lie in [0, 1]");
  }
  InformationMeasures m;
  if (result.rho2 >= 1.0 || !std::isfinite(result.log_det_Q)) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    m.kl_divergence = m.mutual_information = m.transfer_entropy = inf;
    m.gg_measure = 0.0;
    m.saturated = true;
    return m;
  }
  m.transfer_entropy = -std::log1p(-result.rho2);
  m.kl_divergence = 0.5 * m.transfer_entropy;
  m.mutual_information = m.kl_divergence;
  m.gg_measure = std::exp(-m.transfer_entropy);
  return m;
}

CompositeCovariance block_diag_transform(const CompositeCovariance& R, const Matrix& Tx,
                                         const Matrix& Ty, const Matrix& Tz) {
  const auto& d = R.dims();
  auto check = [](const Matrix& T, std::size_t n, const char* name) {
    if (static_cast<std::size_t>(T.rows()) != n || static_cast<std::size_t>(T.cols()) != n) {
      throw ShapeError(std::string("transform ") + name + " must be " + std::to_string(n) +
                       "x" + std::to_string(n));
    }
    if (n > 0 && !Eigen::FullPivLU<Matrix>(T).isInvertible()) {
      throw InvalidArgument(std::string("transform ") + name + " is singular");
    }
  };
  check(Tx, d.p, "Tx");
  check(Ty, d.q, "Ty");
  check(Tz, d.r, "Tz");

  const auto P = static_cast<Eigen::Index>(d.p);
  const auto Q = static_cast<Eigen::Index>(d.q);
  const auto Rd = static_cast<Eigen::Index>(d.r);
  Matrix T = Matrix::Zero(P + Q + Rd, P + Q + Rd);
  T.block(0, 0, P, P) = Tx;
  T.block(P, P, Q, Q) = Ty;
  T.block(P + Q, P + Q, Rd, Rd) = Tz;
  return CompositeCovariance(T * R.matrix() * T.transpose(), d);
}

SpectralCoherence spectral_partial_coherence(const ConditionalSequences& seq,
                                             std::size_t grid_size) {
  if (grid_size < 2) throw InvalidArgument("spectral grid needs at least 2 points");
  const auto n = static_cast<long long>(grid_size);

  // Twiddles e^{-2 pi i k / N}; e^{-i m theta_j} is twiddle[(j m) mod N].
  std::vector<std::complex<double>> twiddle(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    twiddle[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(grid_size));
  }
  auto dtft = [&](const LagSequence& s, std::size_t j) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const long long m = s.min_lag + static_cast<long long>(i);
      const long long idx = ((static_cast<long long>(j) * m) % n + n) % n;
      acc += s.values[i] * twiddle[static_cast<std::size_t>(idx)];
    }
    return acc;
  };

  SpectralCoherence out;
  out.frequencies.resize(grid_size);
  out.narrowband_k2.resize(grid_size);
  double log_sum = 0.0;
  for (std::size_t j = 0; j < grid_size; ++j) {
    out.frequencies[j] =
        2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid_size);
    const double sxx = dtft(seq.xx, j).real();
    const double syy = dtft(seq.yy, j).real();
    if (!(sxx > 0.0) || !(syy > 0.0)) {
      std::ostringstream os;
      os << "auto-spectrum is not positive at theta = " << out.frequencies[j]
         << " (Sxx = " << sxx << ", Syy = " << syy << ")";
      throw NotPositiveDefinite(os.str());
    }
    const double k2 = std::clamp(std::norm(dtft(seq.xy, j)) / (sxx * syy), 0.0,
                                 kMaxCanonicalCorrelation * kMaxCanonicalCorrelation);
    out.narrowband_k2[j] = k2;
    log_sum += std::log1p(-k2);
  }
  out.broadband_rho2 = -std::expm1(log_sum / static_cast<double>(grid_size));
  return out;
}

}  // namespace cohercause
