#pragma once

// Null law of the sample partial coherence.
//
// Under H0 (zero partial cross-covariance) and M i.i.d. Gaussian columns,
// 1 - rho2_hat ~ Wilks Lambda(p, M - r - q, q), which is the product of p
// independent Beta((M - r - q - i + 1)/2, q/2) variables, i = 1..p.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cohercause {

struct BetaParams {
  double a = 0.0;
  double b = 0.0;
};

struct WilksLambdaSpec {
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t r = 0;
  std::size_t M = 0;
  std::vector<BetaParams> beta_params;  ///< one factor per x dimension

  /// Mean of rho2_hat under H0: 1 - prod a_i / (a_i + b_i).
  double null_mean() const;
};

inline constexpr std::size_t kDefaultNullSamples = 200'000;
/// Samples drawn per RNG stream in sample_null. Fixed so that output does
/// not depend on the worker count.
inline constexpr std::size_t kNullSamplesPerStream = 4096;

/// Throws InsufficientSamples unless M - r > p + q.
WilksLambdaSpec make_spec(std::size_t p, std::size_t q, std::size_t r, std::size_t M);

/// n draws of 1 - prod b_i. Deterministic in (spec, n, seed) for any `jobs`.
std::vector<double> sample_null(const WilksLambdaSpec& spec, std::size_t n, std::uint64_t seed,
                                std::size_t jobs = 1);

/// Monte Carlo null quantiles. Holds the sorted samples so that thresholds
/// and p-values come from one draw and are consistent with each other:
/// stat > critical_value(alpha)  <=>  p_value(stat) < alpha.
class NullQuantiles {
 public:
  explicit NullQuantiles(std::vector<double> samples);

  /// Reject H0 when rho2_hat is strictly greater than the returned value.
  /// Throws InvalidArgument if alpha is outside (0, 1) or the sample is too
  /// small for alpha (n * min(alpha, 1 - alpha) < 50).
  double critical_value(double alpha) const;

  /// (#{samples >= stat} + 1) / (n + 1).
  double p_value(double stat) const;

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

double critical_value(const WilksLambdaSpec& spec, double alpha,
                      std::size_t n_mc = kDefaultNullSamples, std::uint64_t seed = 42,
                      std::size_t jobs = 1);

double p_value(const WilksLambdaSpec& spec, double stat, std::size_t n_mc = kDefaultNullSamples,
               std::uint64_t seed = 42, std::size_t jobs = 1);

/// Bartlett's large-M approximation:
///   -(M - r - (p + q + 1)/2) log(1 - rho2_hat) ~ chi^2 with pq degrees of freedom.
double bartlett_statistic(const WilksLambdaSpec& spec, double stat);
double bartlett_pvalue(const WilksLambdaSpec& spec, double stat);
/// The rho2_hat threshold whose Bartlett p-value equals alpha.
double bartlett_critical_value(const WilksLambdaSpec& spec, double alpha);

}  // namespace cohercause
