#pragma once

// Reproduction harness: pairwise coherence maps, size calibration, power
// versus MA order, and ROC curves for the bivariate ARMA(r, 1) system.
//
// Every Monte Carlo routine is deterministic in its seed and independent of
// the worker count: replication i always draws from stream i.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "cohercause/inference.hpp"
#include "cohercause/null_distribution.hpp"
#include "cohercause/simulate.hpp"

namespace cohercause {

struct IndexRange {
  int first = 0;
  int last = 0;  ///< inclusive

  std::size_t size() const noexcept {
    return last >= first ? static_cast<std::size_t>(last - first + 1) : 0;
  }
};

struct CoherenceMap {
  IndexRange s_range;
  IndexRange t_range;
  /// values[(t - t_first) * s_count + (s - s_first)] = rho2_z(s, t)
  std::vector<double> values;
  Conditioning conditioning = Conditioning::past_of_x;
  std::string source;  ///< "I", "II", "III", "barnett" or "data"

  double at(int s, int t) const;
};

inline constexpr std::size_t kDefaultConditioningDepth = 20;

/// Analytic map from model covariance sequences.
CoherenceMap coherence_map(const CovarianceSequences& model, IndexRange s_range, IndexRange t_range,
                           Conditioning conditioning, std::size_t T_cond, std::string source,
                           std::size_t jobs = 1);

/// Estimated map from one pair of sequences (consecutive windows).
CoherenceMap coherence_map(const SequencePair& data, IndexRange s_range, IndexRange t_range,
                           Conditioning conditioning, std::size_t T_cond,
                           Centering centering = Centering::subtract_mean, std::size_t jobs = 1);

/// Settings shared by every Barnett Monte Carlo experiment.
struct ReplicationConfig {
  BarnettModelSpec model;
  std::size_t replications = 10'000;
  /// Consecutive mode: samples per window (M - T columns after embedding).
  /// Independent mode: columns, each from its own realization.
  std::size_t M = 1000;
  std::size_t T = 10;
  WindowMode window_mode = WindowMode::consecutive;
  std::uint64_t seed = 42;
  Centering centering = Centering::subtract_mean;
  std::size_t jobs = 1;
};

inline constexpr std::size_t kFastReplications = 2'000;

struct ReplicatedStatistics {
  std::vector<double> statistics;  ///< rho2_hat per replication
  BlockDims dims;
  std::size_t columns = 0;  ///< panel columns per replication
};

/// Columns per replication implied by the config.
std::size_t panel_columns(const ReplicationConfig& config);

/// rho2_hat for each replication of the Barnett system.
ReplicatedStatistics replicate_statistics(const ReplicationConfig& config);

/// Null quantiles per (p, q, r, M, n_mc, seed), computed once and shared.
class ThresholdCache {
 public:
  std::shared_ptr<const NullQuantiles> get(const WilksLambdaSpec& spec, std::size_t n_mc,
                                           std::uint64_t seed, std::size_t jobs);

 private:
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t, std::uint64_t>;
  std::mutex mutex_;
  std::map<Key, std::shared_ptr<const NullQuantiles>> cache_;
};

struct RateEstimate {
  double rate = 0.0;
  double standard_error = 0.0;  ///< binomial sqrt(rate (1 - rate) / n)
  std::size_t rejections = 0;
  std::size_t replications = 0;
  double threshold = 0.0;
};

struct SizeEstimate : RateEstimate {
  double alpha = 0.05;
  WindowMode window_mode = WindowMode::consecutive;
};

struct PowerPoint : RateEstimate {
  std::size_t ma_order = 0;
  double alpha = 0.05;
  std::size_t T = 10;
  std::size_t M = 1000;
};

struct ROCPoint {
  double nominal_size = 0.0;
  double size = 0.0;
  double power = 0.0;
  double power_se = 0.0;
};

struct NullSettings {
  std::size_t n_mc = kDefaultNullSamples;
  std::uint64_t seed = 42;
};

/// Fraction of rejections under H0 (the model must have c = 0). Needs at
/// least 1000 replications.
SizeEstimate calibrate_size(const ReplicationConfig& config, double alpha,
                            const NullSettings& null = {}, ThresholdCache* cache = nullptr);

/// Power at fixed alpha for each MA order; replications for order r use a
/// seed derived from (config.seed, r).
std::vector<PowerPoint> power_curve(const ReplicationConfig& config,
                                    const std::vector<std::size_t>& ma_orders, double alpha,
                                    const NullSettings& null = {}, ThresholdCache* cache = nullptr);

inline const std::vector<double> kDefaultSizeGrid{0.01, 0.02, 0.05, 0.1, 0.2, 0.5};

/// Power against size. Thresholds are empirical quantiles of H0 statistics
/// simulated with the same noise streams as the alternative; the endpoints
/// (0, 0) and (1, 1) are always included.
std::vector<ROCPoint> roc_curve(const ReplicationConfig& config,
                                const std::vector<double>& size_grid = kDefaultSizeGrid);

}  // namespace cohercause
