#include "cohercause/null_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "cohercause/error.hpp"
#include "cohercause/parallel.hpp"
#include "cohercause/random.hpp"

namespace cohercause {

double WilksLambdaSpec::null_mean() const {
  double prod = 1.0;
  for (const auto& [a, b] : beta_params) prod *= a / (a + b);
  return 1.0 - prod;
}

WilksLambdaSpec make_spec(std::size_t p, std::size_t q, std::size_t r, std::size_t M) {
  if (p < 1 || q < 1) throw InvalidArgument("Wilks Lambda needs p >= 1 and q >= 1");
  if (M <= r || M - r <= p + q) {
    std::ostringstream os;
    os << "Wilks Lambda needs M - r > p + q (p=" << p << ", q=" << q << ", r=" << r
       << ", M=" << M << ")";
    throw InsufficientSamples(os.str());
  }
  WilksLambdaSpec spec{p, q, r, M, {}};
  spec.beta_params.reserve(p);
  const double dof = static_cast<double>(M - r - q);
  for (std::size_t i = 1; i <= p; ++i) {
    spec.beta_params.push_back({(dof - static_cast<double>(i) + 1.0) / 2.0,
                                static_cast<double>(q) / 2.0});
  }
  return spec;
}

std::vector<double> sample_null(const WilksLambdaSpec& spec, std::size_t n, std::uint64_t seed,
                                std::size_t jobs) {
  if (spec.beta_params.empty()) throw InvalidArgument("Wilks spec has no Beta factors");
  std::vector<double> out(n);
  const std::size_t streams = (n + kNullSamplesPerStream - 1) / kNullSamplesPerStream;

  parallel_for(streams, jobs, [&](std::size_t s) {
    auto rng = make_rng(seed, s);
    std::vector<std::gamma_distribution<double>> ga, gb;
    for (const auto& [a, b] : spec.beta_params) {
      ga.emplace_back(a, 1.0);
      gb.emplace_back(b, 1.0);
    }
    const std::size_t begin = s * kNullSamplesPerStream;
    const std::size_t end = std::min(n, begin + kNullSamplesPerStream);
    for (std::size_t k = begin; k < end; ++k) {
      double prod = 1.0;
      for (std::size_t i = 0; i < ga.size(); ++i) {
        const double x = ga[i](rng);
        const double y = gb[i](rng);
        prod *= x / (x + y);
      }
      out[k] = 1.0 - prod;
    }
  });
  return out;
}

NullQuantiles::NullQuantiles(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw InvalidArgument("null sample is empty");
  std::sort(sorted_.begin(), sorted_.end());
}

double NullQuantiles::critical_value(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  const double n = static_cast<double>(sorted_.size());
  if (n * std::min(alpha, 1.0 - alpha) < 50.0) {
    std::ostringstream os;
    os << "n_mc = " << sorted_.size() << " is too small to resolve alpha = " << alpha;
    throw InvalidArgument(os.str());
  }
  // Largest exceedance count c with (c + 1)/(n + 1) < alpha.
  const double bound = alpha * (n + 1.0) - 1.0;
  const long long c = static_cast<long long>(std::ceil(bound)) - 1;
  if (c < 0) return 1.0;
  const auto idx = static_cast<long long>(sorted_.size()) - c - 1;
  return sorted_[static_cast<std::size_t>(std::max(0LL, idx))];
}

double NullQuantiles::p_value(double stat) const {
  const auto first = std::lower_bound(sorted_.begin(), sorted_.end(), stat);
  const auto exceed = static_cast<double>(sorted_.end() - first);
  return (exceed + 1.0) / (static_cast<double>(sorted_.size()) + 1.0);
}

double critical_value(const WilksLambdaSpec& spec, double alpha, std::size_t n_mc,
                      std::uint64_t seed, std::size_t jobs) {
  return NullQuantiles(sample_null(spec, n_mc, seed, jobs)).critical_value(alpha);
}

double p_value(const WilksLambdaSpec& spec, double stat, std::size_t n_mc, std::uint64_t seed,
               std::size_t jobs) {
  if (!(stat >= 0.0 && stat <= 1.0)) throw InvalidArgument("statistic must lie in [0, 1]");
  return NullQuantiles(sample_null(spec, n_mc, seed, jobs)).p_value(stat);
}

namespace {

double bartlett_factor(const WilksLambdaSpec& spec) {
  return static_cast<double>(spec.M) - static_cast<double>(spec.r) -
         static_cast<double>(spec.p + spec.q + 1) / 2.0;
}

boost::math::chi_squared_distribution<double> bartlett_law(const WilksLambdaSpec& spec) {
  return boost::math::chi_squared_distribution<double>(static_cast<double>(spec.p * spec.q));
}

}  // namespace

double bartlett_statistic(const WilksLambdaSpec& spec, double stat) {
  if (!(stat >= 0.0 && stat < 1.0)) throw InvalidArgument("statistic must lie in [0, 1)");
  return -bartlett_factor(spec) * std::log1p(-stat);
}

double bartlett_pvalue(const WilksLambdaSpec& spec, double stat) {
  const double x = bartlett_statistic(spec, stat);
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(bartlett_law(spec), x));
}

double bartlett_critical_value(const WilksLambdaSpec& spec, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  const double x = boost::math::quantile(boost::math::complement(bartlett_law(spec), alpha));
  return -std::expm1(-x / bartlett_factor(spec));
}

}  // namespace cohercause
