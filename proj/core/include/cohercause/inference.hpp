#pragma once

// From raw sequences to a decision on H0: zero partial cross-covariance
// between x and y given z.
//
// A LagSpec says which lagged samples of which channel go into x, y and z.
// lag_embed() turns sequences into a data panel D = (X; Y; Z) with one
// realization per column, and test_causal_influence() computes
//
//   1 - rho2_hat = det S_uu|z / (det S_xx|z det S_yy|z),   S = D D^T
//
// and compares it with its Wilks Lambda null law.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cohercause/covariance.hpp"
#include "cohercause/null_distribution.hpp"

namespace cohercause {

enum class Channel { x, y };

enum class WindowMode {
  /// Successive columns advance t by `stride` along one pair of sequences.
  /// Columns overlap in time and are weakly dependent.
  consecutive,
  /// One column per independent realization of the pair.
  independent,
};

enum class Conditioning {
  /// z = x_t, x_{t-1}, ... with x_s left out.
  past_of_x,
  /// z = y_{t-1}, y_{t-2}, ...
  past_of_y,
};

/// A block of the embedded vector: samples channel[t - lag] for each lag.
struct LagRole {
  Channel channel = Channel::x;
  std::vector<int> lags;
};

struct LagSpec {
  LagRole x_role;
  LagRole y_role{Channel::y, {0}};
  LagRole z_role{Channel::y, {}};
  WindowMode window_mode = WindowMode::consecutive;
  std::size_t stride = 1;

  /// x = [x_{t-1} .. x_{t-T}], y = y_t, z = [y_{t-1} .. y_{t-T}].
  static LagSpec barnett(std::size_t T);

  /// x = x_s, y = y_t with s = t - offset, z per `conditioning` with
  /// T_cond samples. Under past_of_x the T_cond most recent samples up to
  /// and including x_t are used, skipping x_s.
  static LagSpec pairwise(int offset, Conditioning conditioning, std::size_t T_cond);

  /// Throws InvalidArgument for empty x/y roles, zero stride, or a sample
  /// that appears twice within one column.
  void validate() const;

  BlockDims dims() const;
  int min_lag() const;
  int max_lag() const;
  /// Lag depth: the largest |lag| over all roles.
  std::size_t depth() const;
};

/// Stacked realizations: rows grouped as (X; Y; Z), one realization per column.
class DataPanel {
 public:
  /// Throws ShapeError if rows != p + q + r, InsufficientSamples unless
  /// M > p + q + r.
  DataPanel(Matrix data, BlockDims dims, std::optional<LagSpec> meta = std::nullopt);

  const Matrix& data() const noexcept { return data_; }
  const BlockDims& dims() const noexcept { return dims_; }
  const std::optional<LagSpec>& meta() const noexcept { return meta_; }
  std::size_t columns() const noexcept { return static_cast<std::size_t>(data_.cols()); }

 private:
  Matrix data_;
  BlockDims dims_;
  std::optional<LagSpec> meta_;
};

struct SequencePair {
  std::vector<double> x;
  std::vector<double> y;
};

/// Consecutive-window embedding of one pair of sequences.
DataPanel lag_embed(std::span<const double> x, std::span<const double> y, const LagSpec& spec);

/// Independent-realization embedding: one column per pair, taken at the
/// latest time index each pair supports.
DataPanel lag_embed(std::span<const SequencePair> realizations, const LagSpec& spec);

enum class Centering { none, subtract_mean };

/// S = D D^T, unnormalized. With Centering::subtract_mean each row of D is
/// centered first, which costs one degree of freedom in the null law.
CompositeCovariance sample_covariance(const DataPanel& panel,
                                      Centering centering = Centering::subtract_mean);

/// rho2_hat from a sample covariance; same code path as partial_coherence().
/// Rank deficiency is reported as InsufficientSamples.
double likelihood_ratio(const CompositeCovariance& S);

enum class TestMethod { wilks_mc, bartlett };

std::string to_string(TestMethod method);
TestMethod parse_test_method(const std::string& name);

struct TestOptions {
  double alpha = 0.05;
  TestMethod method = TestMethod::wilks_mc;
  std::size_t n_mc = kDefaultNullSamples;
  std::uint64_t seed = 42;
  Centering centering = Centering::subtract_mean;
  std::size_t jobs = 1;
};

struct TestOutcome {
  double statistic = 0.0;
  double threshold = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  TestMethod method = TestMethod::wilks_mc;
  bool reject_null = false;
  BlockDims dims;
  std::size_t M = 0;
  std::uint64_t seed = 0;

  /// "indication of causal influence at level a" or
  /// "finding of non-causality at level a".
  std::string verdict() const;
};

/// Effective sample count for the Wilks law: M, or M - 1 when centered.
std::size_t effective_samples(std::size_t M, Centering centering);

/// Wilks spec for a panel under the given centering.
WilksLambdaSpec null_spec(const BlockDims& dims, std::size_t M, Centering centering);

TestOutcome test_causal_influence(const DataPanel& panel, const TestOptions& options = {});

/// Decision against precomputed null quantiles (used by Monte Carlo loops).
TestOutcome decide(double statistic, const NullQuantiles& null, const BlockDims& dims,
                   std::size_t M, const TestOptions& options);

}  // namespace cohercause
