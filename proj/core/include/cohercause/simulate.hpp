#pragma once

// Generative models with known second-order structure.
//
// MA demonstration models (scalar):
//   x_n = sum_k h_k mu_{n-k},                  h_k = h0 a^k
//   y_n = sum_k g_k nu_{n-k} + sum_j f_j x_{n-j},  g_k = g0 b^k
// with mu, nu independent unit-variance white noise. Negative coupling
// offsets j make y depend on the future of x.
//
// Bivariate ARMA(r, 1) system:
//   (1 - a z) eta1 = c z eta2 + mu,   (1 - b z) eta2 = nu
//   y = (1 + f1 z)^r eta1,            x = (1 + f2 z)^r eta2
// where z is the unit delay and c = sqrt(e^-F (e^F - 1)(e^F - b^2)) sets
// the transfer entropy from x to y to F nats.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cohercause/coherence.hpp"
#include "cohercause/covariance.hpp"
#include "cohercause/inference.hpp"
#include "cohercause/random.hpp"

namespace cohercause {

/// xx[m] = E[x_n x_{n+m}], yy[m] = E[y_n y_{n+m}], xy[m] = E[x_n y_{n+m}].
using CovarianceSequences = ConditionalSequences;

inline constexpr std::size_t kBurnIn = 1000;
inline constexpr double kCoefficientTail = 1e-12;

struct Coupling {
  int offset = 0;  ///< y_n picks up coefficient * x_{n - offset}
  double coefficient = 0.0;
};

enum class MACase { I, II, III };

struct MAFilterSpec {
  double h0 = 0.8;
  double a = 0.1;
  double g0 = 0.7;
  double b = 0.7;
  std::vector<Coupling> coupling;

  /// Past-causal (I), future-causal (II) or mixed (III) coupling.
  static MAFilterSpec demonstration(MACase which);

  /// Truncated geometric coefficients: every discarded c0 r^k is below 1e-12.
  std::vector<double> h() const;
  std::vector<double> g() const;
  /// Largest of the two filter lengths.
  std::size_t truncation() const;
};

/// Number of kept terms K = ceil(log(1e-12 / |c0|) / log|ratio|).
std::size_t geometric_truncation(double c0, double ratio);

SequencePair gen_ma(const MAFilterSpec& spec, std::size_t length, std::uint64_t seed,
                    std::uint64_t stream = 0);
SequencePair gen_ma_case(MACase which, std::size_t length, std::uint64_t seed,
                         std::uint64_t stream = 0);

/// Exact (up to truncation) auto- and cross-covariances for |m| <= max_lag.
CovarianceSequences analytic_covariances(const MAFilterSpec& spec, std::size_t max_lag);

/// Covariance of the lag-embedded vector under a stationary model given by
/// its covariance sequences. Throws InvalidArgument when a needed lag falls
/// outside the sequences.
CompositeCovariance lagged_covariance(const CovarianceSequences& model, const LagSpec& spec);

/// R for (x_s, y_t, z) with z chosen by `conditioning`; z never contains x_s.
CompositeCovariance model_composite_covariance(const CovarianceSequences& model, int s, int t,
                                               Conditioning conditioning, std::size_t T_cond);
CompositeCovariance model_composite_covariance(const MAFilterSpec& spec, int s, int t,
                                               Conditioning conditioning, std::size_t T_cond);

struct BarnettModelSpec {
  double a = 0.9;
  double b = 0.8;
  double F = 0.02;  ///< transfer entropy, nats
  std::size_t ma_order = 0;
  double f1 = 0.6;
  double f2 = 0.7;
  /// Replaces the F-derived coupling when set (e.g. c = 1 for illustration).
  std::optional<double> coupling_override;

  double c() const;
  /// Throws InvalidArgument for |a| >= 1, |b| >= 1 or F < 0.
  void validate() const;
};

enum class BarnettInit {
  /// Start from zero and discard kBurnIn samples.
  burn_in,
  /// Draw the AR state from its exact stationary law; no burn-in needed.
  stationary,
};

/// Stationary covariance of (eta1, eta2): solves S = A S A^T + I.
Matrix barnett_state_covariance(const BarnettModelSpec& spec);

/// Binomial weights of (1 + f z)^r.
std::vector<double> binomial_ma_weights(double f, std::size_t r);

/// Streaming generator: successive calls continue one realization.
class BarnettProcess {
 public:
  BarnettProcess(const BarnettModelSpec& spec, Rng rng, BarnettInit init = BarnettInit::burn_in);

  /// Appends the next n samples of x and y to `out`.
  void generate(std::size_t n, SequencePair& out);

  /// Starts a fresh realization on the same random stream. Successive
  /// realizations are independent.
  void restart(BarnettInit init);

 private:
  void step();

  BarnettModelSpec spec_;
  Rng rng_;
  std::normal_distribution<double> normal_;
  std::vector<double> alpha_;  // weights on eta1 for y
  std::vector<double> beta_;   // weights on eta2 for x
  std::vector<double> eta1_;   // ring of the last r + 1 states, newest at head_
  std::vector<double> eta2_;
  std::size_t head_ = 0;
  double c_ = 0.0;
  Eigen::Matrix2d state_factor_ = Eigen::Matrix2d::Zero();  // Cholesky of the stationary law
};

SequencePair gen_barnett(const BarnettModelSpec& spec, std::size_t length, std::uint64_t seed,
                         std::uint64_t stream = 0, BarnettInit init = BarnettInit::burn_in);

/// Analytic covariance sequences of (x, y) for |m| <= max_lag.
CovarianceSequences barnett_covariances(const BarnettModelSpec& spec, std::size_t max_lag);

/// Population composite covariance for the (T, 1, T) Barnett embedding.
CompositeCovariance barnett_composite_covariance(const BarnettModelSpec& spec, std::size_t T);

}  // namespace cohercause
