#include "cohercause/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <utility>

#include "cohercause/coherence.hpp"
#include "cohercause/error.hpp"

namespace cohercause {
namespace {

std::vector<int> lag_range(int first, int last) {
  std::vector<int> out;
  for (int l = first; l <= last; ++l) out.push_back(l);
  return out;
}

template <typename F>
void for_each_role(const LagSpec& spec, F&& f) {
  f(spec.x_role);
  f(spec.y_role);
  f(spec.z_role);
}

std::span<const double> channel_of(Channel c, std::span<const double> x, std::span<const double> y) {
  return c == Channel::x ? x : y;
}

// Writes one column of the panel from sequences at time t.
void fill_column(Matrix& D, Eigen::Index col, const LagSpec& spec, std::span<const double> x,
                 std::span<const double> y, long long t) {
  Eigen::Index row = 0;
  for_each_role(spec, [&](const LagRole& role) {
    const auto seq = channel_of(role.channel, x, y);
    for (int lag : role.lags) D(row++, col) = seq[static_cast<std::size_t>(t - lag)];
  });
}

}  // namespace

LagSpec LagSpec::barnett(std::size_t T) {
  if (T < 1) throw InvalidArgument("lag depth T must be at least 1");
  const int depth = static_cast<int>(T);
  LagSpec spec;
  spec.x_role = {Channel::x, lag_range(1, depth)};
  spec.y_role = {Channel::y, {0}};
  spec.z_role = {Channel::y, lag_range(1, depth)};
  return spec;
}

LagSpec LagSpec::pairwise(int offset, Conditioning conditioning, std::size_t T_cond) {
  LagSpec spec;
  spec.x_role = {Channel::x, {offset}};
  spec.y_role = {Channel::y, {0}};
  if (conditioning == Conditioning::past_of_y) {
    spec.z_role = {Channel::y, lag_range(1, static_cast<int>(T_cond))};
  } else {
    spec.z_role.channel = Channel::x;
    for (int lag = 0; spec.z_role.lags.size() < T_cond; ++lag) {
      if (lag != offset) spec.z_role.lags.push_back(lag);
    }
  }
  return spec;
}

void LagSpec::validate() const {
  if (x_role.lags.empty() || y_role.lags.empty()) {
    throw InvalidArgument("lag spec needs at least one x sample and one y sample");
  }
  if (stride < 1) throw InvalidArgument("stride must be at least 1");
  std::set<std::pair<Channel, int>> seen;
  for_each_role(*this, [&](const LagRole& role) {
    for (int lag : role.lags) {
      if (!seen.emplace(role.channel, lag).second) {
        throw InvalidArgument(std::string("lag spec uses sample ") +
                              (role.channel == Channel::x ? "x" : "y") + "[t-" +
                              std::to_string(lag) + "] twice in one column");
      }
    }
  });
}

BlockDims LagSpec::dims() const { return {x_role.lags.size(), y_role.lags.size(), z_role.lags.size()}; }

int LagSpec::min_lag() const {
  int m = 0;
  bool any = false;
  for_each_role(*this, [&](const LagRole& role) {
    for (int l : role.lags) {
      m = any ? std::min(m, l) : l;
      any = true;
    }
  });
  return m;
}

int LagSpec::max_lag() const {
  int m = 0;
  bool any = false;
  for_each_role(*this, [&](const LagRole& role) {
    for (int l : role.lags) {
      m = any ? std::max(m, l) : l;
      any = true;
    }
  });
  return m;
}

std::size_t LagSpec::depth() const {
  return static_cast<std::size_t>(std::max(std::abs(min_lag()), std::abs(max_lag())));
}

DataPanel::DataPanel(Matrix data, BlockDims dims, std::optional<LagSpec> meta)
    : data_(std::move(data)), dims_(dims), meta_(std::move(meta)) {
  dims_.validate();
  if (static_cast<std::size_t>(data_.rows()) != dims_.total()) {
    throw ShapeError("panel has " + std::to_string(data_.rows()) + " rows, dims need " +
                     std::to_string(dims_.total()));
  }
  if (columns() <= dims_.total()) {
    throw InsufficientSamples("panel has M = " + std::to_string(columns()) +
                              " columns; need M > p + q + r = " + std::to_string(dims_.total()));
  }
}

DataPanel lag_embed(std::span<const double> x, std::span<const double> y, const LagSpec& spec) {
  spec.validate();
  if (x.size() != y.size()) throw ShapeError("x and y sequences differ in length");
  const long long n = static_cast<long long>(x.size());
  const long long first = std::max(0, spec.max_lag());
  const long long last = n - 1 - std::max(0, -spec.min_lag());
  if (last < first) {
    throw InsufficientSamples("sequences of length " + std::to_string(n) +
                              " are too short for lag depth " + std::to_string(spec.depth()));
  }
  const auto stride = static_cast<long long>(spec.stride);
  const long long M = (last - first) / stride + 1;
  const auto dims = spec.dims();
  Matrix D(static_cast<Eigen::Index>(dims.total()), M);
  for (long long c = 0; c < M; ++c) fill_column(D, c, spec, x, y, first + c * stride);

  LagSpec meta = spec;
  meta.window_mode = WindowMode::consecutive;
  return DataPanel(std::move(D), dims, std::move(meta));
}

DataPanel lag_embed(std::span<const SequencePair> realizations, const LagSpec& spec) {
  spec.validate();
  const auto dims = spec.dims();
  const long long need = std::max(0, spec.max_lag()) + std::max(0, -spec.min_lag()) + 1;
  Matrix D(static_cast<Eigen::Index>(dims.total()),
           static_cast<Eigen::Index>(realizations.size()));
  for (std::size_t c = 0; c < realizations.size(); ++c) {
    const auto& r = realizations[c];
    if (r.x.size() != r.y.size()) throw ShapeError("realization " + std::to_string(c) + ": x and y differ in length");
    const long long n = static_cast<long long>(r.x.size());
    if (n < need) {
      throw InsufficientSamples("realization " + std::to_string(c) + " has " + std::to_string(n) +
                                " samples; the lag spec needs " + std::to_string(need));
    }
    const long long t = n - 1 - std::max(0, -spec.min_lag());
    fill_column(D, static_cast<Eigen::Index>(c), spec, r.x, r.y, t);
  }
  LagSpec meta = spec;
  meta.window_mode = WindowMode::independent;
  return DataPanel(std::move(D), dims, std::move(meta));
}

CompositeCovariance sample_covariance(const DataPanel& panel, Centering centering) {
  const auto n = static_cast<Eigen::Index>(panel.dims().total());
  Matrix S = Matrix::Zero(n, n);
  if (centering == Centering::subtract_mean) {
    const Matrix centered = panel.data().colwise() - panel.data().rowwise().mean();
    S.selfadjointView<Eigen::Lower>().rankUpdate(centered);
  } else {
    S.selfadjointView<Eigen::Lower>().rankUpdate(panel.data());
  }
  S.triangularView<Eigen::StrictlyUpper>() = S.transpose();
  return CompositeCovariance(std::move(S), panel.dims());
}

double likelihood_ratio(const CompositeCovariance& S) {
  try {
    return partial_coherence(S).rho2;
  } catch (const NotPositiveDefinite& e) {
    throw InsufficientSamples(std::string("sample covariance is rank deficient: ") + e.what());
  }
}

std::string to_string(TestMethod method) {
  return method == TestMethod::wilks_mc ? "wilks-mc" : "bartlett";
}

TestMethod parse_test_method(const std::string& name) {
  if (name == "wilks-mc") return TestMethod::wilks_mc;
  if (name == "bartlett") return TestMethod::bartlett;
  throw InvalidArgument("unknown test method '" + name + "' (expected wilks-mc or bartlett)");
}

std::string TestOutcome::verdict() const {
  char level[32];
  std::snprintf(level, sizeof level, "%g", alpha);
  return reject_null ? std::string("indication of causal influence at level ") + level
                     : std::string("finding of non-causality at level ") + level;
}

std::size_t effective_samples(std::size_t M, Centering centering) {
  return centering == Centering::subtract_mean && M > 0 ? M - 1 : M;
}

WilksLambdaSpec null_spec(const BlockDims& dims, std::size_t M, Centering centering) {
  return make_spec(dims.p, dims.q, dims.r, effective_samples(M, centering));
}

TestOutcome decide(double statistic, const NullQuantiles& null, const BlockDims& dims,
                   std::size_t M, const TestOptions& options) {
  TestOutcome out;
  out.statistic = statistic;
  out.alpha = options.alpha;
  out.method = TestMethod::wilks_mc;
  out.dims = dims;
  out.M = M;
  out.seed = options.seed;
  out.threshold = null.critical_value(options.alpha);
  out.p_value = null.p_value(statistic);
  out.reject_null = statistic > out.threshold;
  return out;
}

TestOutcome test_causal_influence(const DataPanel& panel, const TestOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  const auto& dims = panel.dims();
  const std::size_t M = panel.columns();
  const auto spec = null_spec(dims, M, options.centering);
  const double stat = likelihood_ratio(sample_covariance(panel, options.centering));

  if (options.method == TestMethod::wilks_mc) {
    const NullQuantiles null(sample_null(spec, options.n_mc, options.seed, options.jobs));
    return decide(stat, null, dims, M, options);
  }

  TestOutcome out;
  out.statistic = stat;
  out.alpha = options.alpha;
  out.method = TestMethod::bartlett;
  out.dims = dims;
  out.M = M;
  out.seed = options.seed;
  out.threshold = bartlett_critical_value(spec, options.alpha);
  out.p_value = stat < 1.0 ? bartlett_pvalue(spec, stat) : 0.0;
  out.reject_null = out.p_value < options.alpha;
  // Rounding at the boundary: nudge the threshold to the side of the decision.
  if (out.reject_null && !(stat > out.threshold)) out.threshold = std::nextafter(stat, 0.0);
  if (!out.reject_null && stat > out.threshold) out.threshold = stat;
  return out;
}

}  // namespace cohercause
