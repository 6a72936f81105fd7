#include "cohercause/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "cohercause/coherence.hpp"
#include "cohercause/error.hpp"
#include "cohercause/parallel.hpp"

namespace cohercause {
namespace {

// Consecutive windows are generated serially from one stream and scored in
// parallel, this many at a time.
constexpr std::size_t kWindowBatch = 256;

void check_ranges(IndexRange s_range, IndexRange t_range) {
  if (s_range.size() == 0 || t_range.size() == 0) throw InvalidArgument("empty s or t range");
}

CoherenceMap empty_map(IndexRange s_range, IndexRange t_range, Conditioning conditioning,
                       std::string source) {
  check_ranges(s_range, t_range);
  CoherenceMap map;
  map.s_range = s_range;
  map.t_range = t_range;
  map.conditioning = conditioning;
  map.source = std::move(source);
  map.values.assign(s_range.size() * t_range.size(), 0.0);
  return map;
}

template <typename Score>
void fill_map(CoherenceMap& map, std::size_t jobs, Score&& score) {
  const std::size_t ns = map.s_range.size();
  parallel_for(map.values.size(), jobs, [&](std::size_t i) {
    const int s = map.s_range.first + static_cast<int>(i % ns);
    const int t = map.t_range.first + static_cast<int>(i / ns);
    map.values[i] = score(s, t);
  });
}

double binomial_se(double rate, std::size_t n) {
  return n > 0 ? std::sqrt(rate * (1.0 - rate) / static_cast<double>(n)) : 0.0;
}

std::size_t count_above(const std::vector<double>& stats, double threshold) {
  return static_cast<std::size_t>(
      std::count_if(stats.begin(), stats.end(), [&](double v) { return v > threshold; }));
}

void validate_config(const ReplicationConfig& config) {
  config.model.validate();
  if (config.replications == 0) throw InvalidArgument("replications must be positive");
  if (config.T < 1) throw InvalidArgument("lag depth T must be at least 1");
}

std::vector<double> consecutive_statistics(const ReplicationConfig& config, const LagSpec& spec) {
  if (config.M <= config.T) {
    throw InsufficientSamples("window of " + std::to_string(config.M) +
                              " samples is too short for lag depth " + std::to_string(config.T));
  }
  std::vector<double> stats(config.replications);
  BarnettProcess process(config.model, make_rng(config.seed, 0), BarnettInit::burn_in);
  std::vector<SequencePair> windows(kWindowBatch);
  for (std::size_t start = 0; start < config.replications; start += kWindowBatch) {
    const std::size_t count = std::min(kWindowBatch, config.replications - start);
    for (std::size_t w = 0; w < count; ++w) {
      windows[w].x.clear();
      windows[w].y.clear();
      process.generate(config.M, windows[w]);
    }
    parallel_for(count, config.jobs, [&](std::size_t w) {
      const auto panel = lag_embed(windows[w].x, windows[w].y, spec);
      stats[start + w] = likelihood_ratio(sample_covariance(panel, config.centering));
    });
  }
  return stats;
}

std::vector<double> independent_statistics(const ReplicationConfig& config, const LagSpec& spec) {
  std::vector<double> stats(config.replications);
  parallel_for(config.replications, config.jobs, [&](std::size_t i) {
    BarnettProcess process(config.model, make_rng(config.seed, i), BarnettInit::stationary);
    std::vector<SequencePair> realizations(config.M);
    for (std::size_t c = 0; c < config.M; ++c) {
      if (c > 0) process.restart(BarnettInit::stationary);
      process.generate(config.T + 1, realizations[c]);
    }
    const auto panel = lag_embed(std::span<const SequencePair>(realizations), spec);
    stats[i] = likelihood_ratio(sample_covariance(panel, config.centering));
  });
  return stats;
}

std::shared_ptr<const NullQuantiles> null_for(const ReplicatedStatistics& rep,
                                              const ReplicationConfig& config,
                                              const NullSettings& null, ThresholdCache* cache) {
  const auto spec = null_spec(rep.dims, rep.columns, config.centering);
  if (cache) return cache->get(spec, null.n_mc, null.seed, config.jobs);
  return std::make_shared<const NullQuantiles>(sample_null(spec, null.n_mc, null.seed, config.jobs));
}

}  // namespace

double CoherenceMap::at(int s, int t) const {
  if (s < s_range.first || s > s_range.last || t < t_range.first || t > t_range.last) {
    throw InvalidArgument("(" + std::to_string(s) + ", " + std::to_string(t) +
                          ") lies outside the map");
  }
  const auto i = static_cast<std::size_t>(t - t_range.first) * s_range.size() +
                 static_cast<std::size_t>(s - s_range.first);
  return values[i];
}

CoherenceMap coherence_map(const CovarianceSequences& model, IndexRange s_range, IndexRange t_range,
                           Conditioning conditioning, std::size_t T_cond, std::string source,
                           std::size_t jobs) {
  auto map = empty_map(s_range, t_range, conditioning, std::move(source));
  fill_map(map, jobs, [&](int s, int t) {
    return partial_coherence(model_composite_covariance(model, s, t, conditioning, T_cond)).rho2;
  });
  return map;
}

CoherenceMap coherence_map(const SequencePair& data, IndexRange s_range, IndexRange t_range,
                           Conditioning conditioning, std::size_t T_cond, Centering centering,
                           std::size_t jobs) {
  auto map = empty_map(s_range, t_range, conditioning, "data");
  fill_map(map, jobs, [&](int s, int t) {
    const auto panel = lag_embed(data.x, data.y, LagSpec::pairwise(t - s, conditioning, T_cond));
    return likelihood_ratio(sample_covariance(panel, centering));
  });
  return map;
}

std::size_t panel_columns(const ReplicationConfig& config) {
  if (config.window_mode == WindowMode::independent) return config.M;
  return config.M > config.T ? config.M - config.T : 0;
}

ReplicatedStatistics replicate_statistics(const ReplicationConfig& config) {
  validate_config(config);
  const auto spec = LagSpec::barnett(config.T);
  ReplicatedStatistics out;
  out.dims = spec.dims();
  out.columns = panel_columns(config);
  if (out.columns <= out.dims.total()) {
    throw InsufficientSamples("M = " + std::to_string(out.columns) +
                              " panel columns; need more than " + std::to_string(out.dims.total()));
  }
  out.statistics = config.window_mode == WindowMode::consecutive
                       ? consecutive_statistics(config, spec)
                       : independent_statistics(config, spec);
  return out;
}

std::shared_ptr<const NullQuantiles> ThresholdCache::get(const WilksLambdaSpec& spec,
                                                         std::size_t n_mc, std::uint64_t seed,
                                                         std::size_t jobs) {
  const Key key{spec.p, spec.q, spec.r, spec.M, n_mc, seed};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto quantiles = std::make_shared<const NullQuantiles>(sample_null(spec, n_mc, seed, jobs));
  std::lock_guard lock(mutex_);
  return cache_.emplace(key, std::move(quantiles)).first->second;
}

SizeEstimate calibrate_size(const ReplicationConfig& config, double alpha,
                            const NullSettings& null, ThresholdCache* cache) {
  if (config.model.c() != 0.0) {
    throw InvalidArgument("size calibration needs a null model (F = 0 or coupling 0)");
  }
  if (config.replications < 1000) {
    throw InvalidArgument("size calibration needs at least 1000 replications");
  }
  const auto rep = replicate_statistics(config);
  const auto quantiles = null_for(rep, config, null, cache);
  SizeEstimate out;
  out.alpha = alpha;
  out.window_mode = config.window_mode;
  out.threshold = quantiles->critical_value(alpha);
  out.replications = rep.statistics.size();
  out.rejections = count_above(rep.statistics, out.threshold);
  out.rate = static_cast<double>(out.rejections) / static_cast<double>(out.replications);
  out.standard_error = binomial_se(out.rate, out.replications);
  return out;
}

std::vector<PowerPoint> power_curve(const ReplicationConfig& config,
                                    const std::vector<std::size_t>& ma_orders, double alpha,
                                    const NullSettings& null, ThresholdCache* cache) {
  ThresholdCache local;
  if (!cache) cache = &local;
  std::vector<PowerPoint> out;
  out.reserve(ma_orders.size());
  for (std::size_t order : ma_orders) {
    ReplicationConfig cfg = config;
    cfg.model.ma_order = order;
    cfg.seed = child_seed(config.seed, order);
    const auto rep = replicate_statistics(cfg);
    const auto quantiles = null_for(rep, cfg, null, cache);
    PowerPoint point;
    point.ma_order = order;
    point.alpha = alpha;
    point.T = cfg.T;
    point.M = cfg.M;
    point.threshold = quantiles->critical_value(alpha);
    point.replications = rep.statistics.size();
    point.rejections = count_above(rep.statistics, point.threshold);
    point.rate = static_cast<double>(point.rejections) / static_cast<double>(point.replications);
    point.standard_error = binomial_se(point.rate, point.replications);
    out.push_back(point);
  }
  return out;
}

std::vector<ROCPoint> roc_curve(const ReplicationConfig& config,
                                const std::vector<double>& size_grid) {
  for (double a : size_grid) {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("ROC sizes must lie in [0, 1]");
  }
  ReplicationConfig null_config = config;
  null_config.model.coupling_override = 0.0;
  const auto alt = replicate_statistics(config).statistics;
  auto h0 = replicate_statistics(null_config).statistics;
  std::sort(h0.begin(), h0.end());

  std::vector<double> grid = size_grid;
  grid.push_back(0.0);
  grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t n = h0.size();
  std::vector<ROCPoint> out;
  out.reserve(grid.size());
  for (double nominal : grid) {
    // Largest threshold with at most floor(nominal * n) null exceedances.
    const auto allowed = static_cast<std::size_t>(std::floor(nominal * static_cast<double>(n) + 1e-9));
    double threshold = allowed >= n ? -std::numeric_limits<double>::infinity() : h0[n - allowed - 1];
    if (nominal == 0.0) threshold = std::numeric_limits<double>::infinity();
    ROCPoint point;
    point.nominal_size = nominal;
    point.size = static_cast<double>(count_above(h0, threshold)) / static_cast<double>(n);
    point.power = static_cast<double>(count_above(alt, threshold)) / static_cast<double>(alt.size());
    point.power_se = binomial_se(point.power, alt.size());
    out.push_back(point);
  }
  return out;
}

}  // namespace cohercause
