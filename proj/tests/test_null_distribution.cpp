#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cohercause/error.hpp"
#include "cohercause/null_distribution.hpp"

namespace cc = cohercause;

TEST(WilksSpec, BetaParameters) {
  const auto spec = cc::make_spec(10, 1, 10, 1000);
  ASSERT_EQ(spec.beta_params.size(), 10u);
  for (std::size_t i = 1; i <= 10; ++i) {
    EXPECT_DOUBLE_EQ(spec.beta_params[i - 1].a, (990.0 - static_cast<double>(i)) / 2.0);
    EXPECT_DOUBLE_EQ(spec.beta_params[i - 1].b, 0.5);
  }
  EXPECT_DOUBLE_EQ(cc::make_spec(1, 1, 0, 10).beta_params[0].a, 4.5);
  const auto single = cc::make_spec(1, 1, 0, 12);
  EXPECT_DOUBLE_EQ(single.beta_params[0].a, 5.5);
  EXPECT_DOUBLE_EQ(single.beta_params[0].b, 0.5);
}

TEST(WilksSpec, NeedsEnoughSamples) {
  EXPECT_THROW(cc::make_spec(2, 2, 3, 7), cc::InsufficientSamples);
  EXPECT_NO_THROW(cc::make_spec(2, 2, 3, 8));
  EXPECT_THROW(cc::make_spec(0, 1, 0, 10), cc::InvalidArgument);
  try {
    cc::make_spec(10, 1, 10, 20);
    FAIL();
  } catch (const cc::InsufficientSamples& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("p=10"), std::string::npos) << msg;
    EXPECT_NE(msg.find("M=20"), std::string::npos) << msg;
  }
}

TEST(SampleNull, SingleFactorMatchesInverseBeta) {
  const auto spec = cc::make_spec(1, 1, 0, 12);
  const std::size_t n = 200'000;
  const auto samples = cc::sample_null(spec, n, 42);
  const double alpha = 0.05;
  const double oracle = 1.0 - boost::math::ibeta_inv(5.5, 0.5, alpha);
  const double exceed =
      static_cast<double>(std::count_if(samples.begin(), samples.end(), [&](double v) { return v > oracle; })) / n;
  EXPECT_NEAR(exceed, alpha, 4.0 * std::sqrt(alpha * (1 - alpha) / n));

  const double cv = cc::critical_value(spec, alpha, n, 42);
  const double cv_cdf = boost::math::ibeta(5.5, 0.5, 1.0 - cv);  // P(rho2 > cv)
  EXPECT_NEAR(cv_cdf, alpha, 4.0 * std::sqrt(alpha * (1 - alpha) / n));
}

TEST(SampleNull, SingleResponseMatchesClosedForm) {
  // With q = 1 the Wilks law collapses to one Beta((M - r - p) / 2, p / 2).
  const std::size_t p = 3, r = 2, M = 30;
  const auto samples = cc::sample_null(cc::make_spec(p, 1, r, M), 20'000, 7);
  const double a = (static_cast<double>(M - r - p)) / 2.0, b = p / 2.0;
  std::vector<double> lambda(samples.size());
  std::transform(samples.begin(), samples.end(), lambda.begin(), [](double v) { return 1.0 - v; });
  std::sort(lambda.begin(), lambda.end());
  double ks = 0.0;
  const double n = static_cast<double>(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double F = boost::math::ibeta(a, b, lambda[i]);
    ks = std::max({ks, std::abs(F - i / n), std::abs(F - (i + 1) / n)});
  }
  EXPECT_LT(ks, 1.63 / std::sqrt(n));  // 1% level
}

TEST(SampleNull, MeanMatchesBetaProduct) {
  const auto spec = cc::make_spec(10, 1, 10, 1000);
  const auto s = cc::sample_null(spec, 100'000, 3);
  double prod = 1.0;
  for (std::size_t i = 1; i <= 10; ++i) {
    const double a = (990.0 - static_cast<double>(i)) / 2.0;
    prod *= a / (a + 0.5);
  }
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean);
  var /= s.size() - 1;
  EXPECT_NEAR(mean, 1.0 - prod, 4.0 * std::sqrt(var / s.size()));
  EXPECT_NEAR(spec.null_mean(), 1.0 - prod, 1e-14);
}

TEST(SampleNull, IndependentOfJobs) {
  const auto spec = cc::make_spec(4, 2, 3, 50);
  const auto one = cc::sample_null(spec, 10'000, 9, 1);
  const auto four = cc::sample_null(spec, 10'000, 9, 4);
  EXPECT_EQ(one, four);
  EXPECT_NE(one, cc::sample_null(spec, 10'000, 10, 1));
}

TEST(NullQuantiles, ThresholdAndPValueAgree) {
  const cc::NullQuantiles q(cc::sample_null(cc::make_spec(2, 1, 2, 40), 5'000, 1));
  for (double alpha : {0.01, 0.05, 0.1, 0.5}) {
    const double thr = q.critical_value(alpha);
    for (double stat : q.sorted()) {
      EXPECT_EQ(stat > thr, q.p_value(stat) < alpha) << "alpha " << alpha << " stat " << stat;
    }
  }
}

TEST(NullQuantiles, PValueDefinition) {
  const cc::NullQuantiles q({0.1, 0.2, 0.3, 0.4});
  EXPECT_DOUBLE_EQ(q.p_value(0.25), 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(q.p_value(0.4), 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(q.p_value(0.5), 1.0 / 5.0);
}

TEST(NullQuantiles, RejectsBadAlphaOrTooFewSamples) {
  const cc::NullQuantiles q(std::vector<double>(999, 0.1));
  EXPECT_THROW(q.critical_value(0.0), cc::InvalidArgument);
  EXPECT_THROW(q.critical_value(1.0), cc::InvalidArgument);
  EXPECT_THROW(q.critical_value(0.01), cc::InvalidArgument);  // 9.99 expected exceedances
  EXPECT_NO_THROW(q.critical_value(0.1));
}

TEST(Bartlett, StatisticIsScaledLogLikelihood) {
  const auto spec = cc::make_spec(1, 1, 0, 1000);
  const double s = 0.004;
  EXPECT_NEAR(cc::bartlett_statistic(spec, s), 998.5 * -std::log1p(-s), 1e-12);
  const double x = cc::bartlett_statistic(spec, s);
  EXPECT_NEAR(cc::bartlett_pvalue(spec, s), boost::math::gamma_q(0.5, x / 2.0), 1e-14);
}

TEST(Bartlett, CriticalValueInvertsPValue) {
  const auto spec = cc::make_spec(10, 1, 10, 999);
  const double cv = cc::bartlett_critical_value(spec, 0.05);
  EXPECT_NEAR(cc::bartlett_pvalue(spec, cv), 0.05, 1e-10);
}
