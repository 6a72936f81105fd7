#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cohercause/coherence.hpp"
#include "cohercause/error.hpp"
#include "cohercause/simulate.hpp"

namespace cc = cohercause;

namespace {

// Sample E[a_n b_{n+m}] with its batch-means standard error.
struct Estimate {
  double value;
  double se;
};

Estimate lagged_moment(const std::vector<double>& a, const std::vector<double>& b, int m,
                       std::size_t batches = 50) {
  const std::size_t start = m < 0 ? static_cast<std::size_t>(-m) : 0;
  const std::size_t stop = a.size() - (m > 0 ? static_cast<std::size_t>(m) : 0);
  const std::size_t per = (stop - start) / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t k = 0; k < batches; ++k) {
    for (std::size_t n = start + k * per; n < start + (k + 1) * per; ++n) {
      means[k] += a[n] * b[static_cast<std::size_t>(static_cast<long long>(n) + m)];
    }
    means[k] /= static_cast<double>(per);
  }
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / batches;
  double var = 0.0;
  for (double v : means) var += (v - mean) * (v - mean);
  var /= batches - 1;
  return {mean, std::sqrt(var / batches)};
}

}  // namespace

TEST(GeometricTruncation, DropsOnlyNegligibleTerms) {
  for (auto [c0, r] : {std::pair{0.8, 0.1}, {0.7, 0.7}, {-0.5, -0.9}}) {
    const auto K = cc::geometric_truncation(c0, r);
    EXPECT_LT(std::abs(c0) * std::pow(std::abs(r), static_cast<double>(K)), 1e-12);
    EXPECT_GE(std::abs(c0) * std::pow(std::abs(r), static_cast<double>(K - 1)), 1e-12);
  }
  EXPECT_THROW(cc::geometric_truncation(1.0, 1.0), cc::InvalidArgument);
}

TEST(MAModel, InputAutocovarianceIsGeometricSeries) {
  const auto spec = cc::MAFilterSpec::demonstration(cc::MACase::I);
  const auto cov = cc::analytic_covariances(spec, 5);
  for (int m = -5; m <= 5; ++m) {
    EXPECT_NEAR(cov.xx.at(m), 0.64 * std::pow(0.1, std::abs(m)) / 0.99, 1e-14);
  }
}

TEST(MAModel, OutputVarianceSumsIndependentParts) {
  const auto spec = cc::MAFilterSpec::demonstration(cc::MACase::II);
  const auto cov = cc::analytic_covariances(spec, 4);
  auto rxx = [](int m) { return 0.64 * std::pow(0.1, std::abs(m)) / 0.99; };
  double expected = 0.49 / (1.0 - 0.49);
  const int off[] = {0, -1, -2, -3};
  const double f[] = {0.7, 0.8, 0.7, 0.3};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) expected += f[i] * f[j] * rxx(off[i] - off[j]);
  EXPECT_NEAR(cov.yy.at(0), expected, 1e-12);
}

TEST(MAModel, SampleMomentsMatchAnalytic) {
  const auto spec = cc::MAFilterSpec::demonstration(cc::MACase::III);
  const auto data = cc::gen_ma(spec, 200'000, 42);
  const auto cov = cc::analytic_covariances(spec, 4);
  for (int m = -3; m <= 3; ++m) {
    const auto xy = lagged_moment(data.x, data.y, m);
    EXPECT_NEAR(xy.value, cov.xy.at(m), 5.0 * xy.se) << "xy lag " << m;
    const auto yy = lagged_moment(data.y, data.y, m);
    EXPECT_NEAR(yy.value, cov.yy.at(m), 5.0 * yy.se) << "yy lag " << m;
  }
}

TEST(MAModel, GeneratorIsDeterministicAndValidated) {
  const auto a = cc::gen_ma_case(cc::MACase::I, 500, 1);
  const auto b = cc::gen_ma_case(cc::MACase::I, 500, 1);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_NE(a.x, cc::gen_ma_case(cc::MACase::I, 500, 1, 1).x);
  EXPECT_EQ(a.x.size(), 500u);
  EXPECT_THROW(cc::gen_ma_case(cc::MACase::I, 10, 1), cc::InvalidArgument);
}

TEST(LaggedCovariance, OutOfRangeLagIsReported) {
  const auto cov = cc::analytic_covariances(cc::MAFilterSpec::demonstration(cc::MACase::I), 3);
  EXPECT_THROW(cc::lagged_covariance(cov, cc::LagSpec::barnett(5)), cc::InvalidArgument);
}

TEST(Barnett, CouplingFromTransferEntropy) {
  cc::BarnettModelSpec spec;
  const double eF = std::exp(0.02);
  EXPECT_NEAR(spec.c(), std::sqrt(std::exp(-0.02) * (eF - 1.0) * (eF - 0.64)), 1e-15);
  spec.F = 0.0;
  EXPECT_EQ(spec.c(), 0.0);
  spec.coupling_override = 1.0;
  EXPECT_EQ(spec.c(), 1.0);
  spec.a = 1.0;
  EXPECT_THROW(spec.validate(), cc::InvalidArgument);
}

TEST(Barnett, StateCovarianceSolvesLyapunov) {
  cc::BarnettModelSpec spec;
  const auto S = cc::barnett_state_covariance(spec);
  cc::Matrix A(2, 2);
  A << spec.a, spec.c(), 0.0, spec.b;
  EXPECT_LT((S - A * S * A.transpose() - cc::Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_NEAR(S(1, 1), 1.0 / (1.0 - 0.64), 1e-12);
}

TEST(Barnett, BinomialWeightsMatchRepeatedConvolution) {
  for (std::size_t r = 0; r <= 10; ++r) {
    std::vector<double> w{1.0};
    for (std::size_t k = 0; k < r; ++k) {
      std::vector<double> next(w.size() + 1, 0.0);
      for (std::size_t i = 0; i < w.size(); ++i) {
        next[i] += w[i];
        next[i + 1] += 0.6 * w[i];
      }
      w = next;
    }
    const auto got = cc::binomial_ma_weights(0.6, r);
    ASSERT_EQ(got.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(got[i], w[i], 1e-12 * w[i]);
  }
}

TEST(Barnett, SampleMomentsMatchAnalytic) {
  cc::BarnettModelSpec spec;
  spec.ma_order = 3;
  spec.coupling_override = 0.5;
  const auto data = cc::gen_barnett(spec, 400'000, 42);
  const auto cov = cc::barnett_covariances(spec, 4);
  for (int m = -3; m <= 3; ++m) {
    const auto xy = lagged_moment(data.x, data.y, m);
    EXPECT_NEAR(xy.value, cov.xy.at(m), 5.0 * xy.se) << "xy lag " << m;
    const auto xx = lagged_moment(data.x, data.x, m);
    EXPECT_NEAR(xx.value, cov.xx.at(m), 5.0 * xx.se) << "xx lag " << m;
    const auto yy = lagged_moment(data.y, data.y, m);
    EXPECT_NEAR(yy.value, cov.yy.at(m), 5.0 * yy.se) << "yy lag " << m;
  }
}

TEST(Barnett, StationaryStartHasStationaryVariance) {
  cc::BarnettModelSpec spec;
  spec.ma_order = 2;
  spec.coupling_override = 0.5;
  const auto cov = cc::barnett_covariances(spec, 0);
  cc::BarnettProcess process(spec, cc::make_rng(5, 0), cc::BarnettInit::stationary);
  const std::size_t n = 40'000;
  double sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) process.restart(cc::BarnettInit::stationary);
    cc::SequencePair one;
    process.generate(1, one);
    sxx += one.x[0] * one.x[0];
    syy += one.y[0] * one.y[0];
  }
  // Var of a Gaussian second moment is 2 sigma^4.
  EXPECT_NEAR(sxx / n, cov.xx.at(0), 5.0 * std::sqrt(2.0 / n) * cov.xx.at(0));
  EXPECT_NEAR(syy / n, cov.yy.at(0), 5.0 * std::sqrt(2.0 / n) * cov.yy.at(0));
}

TEST(Barnett, StreamingContinuesOneRealization) {
  cc::BarnettModelSpec spec;
  const auto whole = cc::gen_barnett(spec, 300, 9);
  cc::BarnettProcess process(spec, cc::make_rng(9, 0));
  cc::SequencePair parts;
  process.generate(100, parts);
  process.generate(200, parts);
  EXPECT_EQ(parts.x, whole.x);
  EXPECT_EQ(parts.y, whole.y);
}

TEST(Barnett, PopulationCoherenceApproachesLimit) {
  cc::BarnettModelSpec spec;
  const double limit = -std::expm1(-0.02);
  const double at20 = cc::partial_coherence(cc::barnett_composite_covariance(spec, 20)).rho2;
  EXPECT_NEAR(at20, limit, 0.1 * limit);
  spec.F = 0.0;
  EXPECT_NEAR(cc::partial_coherence(cc::barnett_composite_covariance(spec, 10)).rho2, 0.0, 1e-12);
}
