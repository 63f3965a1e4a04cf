// Copyright 2026 The QCKA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qcka/stat_bounds.h"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "gtest/gtest.h"
#include "qcka/validation/hypergeometric.h"
#include "qcka/validation/suites.h"

namespace qcka {
namespace {

using SamplingFn =
    std::function<absl::StatusOr<double>(double, double, double, double)>;

// Fraction of hypergeometric draws in which the unsampled items' error rate
// exceeds sample rate + gamma.
double SamplingViolationRate(const SamplingFn& gamma, double n, double k,
                             double rate, double eps, int trials,
                             std::uint64_t seed) {
  const auto population = static_cast<std::int64_t>(n + k);
  const auto marked = static_cast<std::int64_t>(std::llround(rate * (n + k)));
  const auto sampler = *validation::HypergeometricSampler::Create(
      population, marked, static_cast<std::int64_t>(k));
  std::mt19937_64 rng(seed);
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    const std::int64_t x = sampler(rng);
    const double sample_rate = static_cast<double>(x) / k;
    const double rest_rate = static_cast<double>(marked - x) / n;
    const absl::StatusOr<double> g = gamma(n, k, sample_rate, eps);
    if (!g.ok() || rest_rate > sample_rate + *g) ++violations;
  }
  return static_cast<double>(violations) / trials;
}

double ThreeSigmaCeiling(double eps, int trials) {
  return eps + 3.0 * std::sqrt(eps * (1.0 - eps) / trials);
}

TEST(VariantBoundsTest, ZeroObservation) {
  const double beta = std::log(1e3);
  const Interval b = *VariantExpectedBounds(0.0, 1e-3);
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_NEAR(b.upper, 2.0 * beta, 1e-12);
}

TEST(VariantBoundsTest, CollapsesAsEpsApproachesOne) {
  const Interval b = *VariantExpectedBounds(5000.0, 1.0 - 1e-15);
  EXPECT_NEAR(b.lower, 5000.0, 1e-4);
  EXPECT_NEAR(b.upper, 5000.0, 1e-4);
}

TEST(ChernoffBoundsTest, ZeroExpectation) {
  const double beta = std::log(1e3);
  const Interval b = *ChernoffObservedBounds(0.0, 1e-3);
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_NEAR(b.upper, beta, 1e-12);
  const Interval c = *ChernoffObservedBounds(5000.0, 1.0 - 1e-15);
  EXPECT_NEAR(c.lower, 5000.0, 1e-4);
  EXPECT_NEAR(c.upper, 5000.0, 1e-4);
}

TEST(BoundsTest, RejectEpsOutsideUnitInterval) {
  for (double eps : {0.0, 1.0, -0.5, 2.0}) {
    EXPECT_FALSE(VariantExpectedBounds(10.0, eps).ok()) << eps;
    EXPECT_FALSE(ChernoffObservedBounds(10.0, eps).ok()) << eps;
    EXPECT_FALSE(SamplingCorrection(100.0, 100.0, 0.1, eps).ok()) << eps;
  }
  EXPECT_FALSE(VariantExpectedBounds(-1.0, 0.1).ok());
}

TEST(BoundsTest, NestingAndWidthMonotonicity) {
  for (double x : {0.0, 0.5, 3.0, 80.0, 1e4, 1e9}) {
    double previous_width = INFINITY;
    double previous_chernoff = INFINITY;
    for (double eps : {1e-12, 1e-8, 1e-4, 1e-2, 0.3, 0.9}) {
      const Interval v = *VariantExpectedBounds(x, eps);
      EXPECT_LE(v.lower, x);
      EXPECT_GE(v.upper, x);
      EXPECT_GE(v.lower, 0.0);
      EXPECT_LT(v.upper - v.lower, previous_width);
      previous_width = v.upper - v.lower;
      const Interval c = *ChernoffObservedBounds(x, eps);
      EXPECT_LE(c.lower, x);
      EXPECT_GE(c.upper, x);
      EXPECT_LE(c.upper - c.lower, previous_chernoff);
      previous_chernoff = c.upper - c.lower;
    }
  }
}

TEST(SamplingCorrectionTest, VanishesForLargeSamples) {
  double previous = INFINITY;
  for (double n = 1e3; n <= 1e12; n *= 10) {
    const double g = *SamplingCorrection(n, n, 0.05, 1e-10);
    EXPECT_GT(g, 0.0);
    EXPECT_LT(g, previous);
    previous = g;
  }
  EXPECT_LT(previous, 1e-4);
}

TEST(SamplingCorrectionTest, DecreasesAsEpsGrows) {
  for (double lambda : {0.0, 0.01, 0.05, 0.3}) {
    double previous = INFINITY;
    for (double eps : {1e-15, 1e-10, 1e-6, 1e-3, 1e-2, 0.1, 0.5}) {
      const double g = *SamplingCorrection(1e5, 3e4, lambda, eps);
      EXPECT_LT(g, previous) << lambda << " " << eps;
      previous = g;
    }
  }
}

TEST(SamplingCorrectionTest, LargeSymmetricCaseCovers) {
  const double g = *SamplingCorrection(1e6, 1e6, 0.05, 1e-10);
  EXPECT_GT(g, 0.0);
  EXPECT_LT(g, 0.01);
  constexpr int kTrials = 20000;
  EXPECT_LE(SamplingViolationRate(SamplingCorrection, 1e6, 1e6, 0.05, 1e-3,
                                  kTrials, 31),
            ThreeSigmaCeiling(1e-3, kTrials));
}

// The Gaussian closed form is too narrow once the sample is large; the
// pipeline's correction is not.
TEST(SamplingCorrectionTest, ClosedFormUnderCovers) {
  constexpr int kTrials = 20000;
  const double closed = SamplingViolationRate(ClosedFormSamplingCorrection,
                                              1e4, 1e4, 0.05, 1e-2, kTrials, 32);
  const double used = SamplingViolationRate(SamplingCorrection, 1e4, 1e4,
                                            0.05, 1e-2, kTrials, 32);
  EXPECT_GT(closed, ThreeSigmaCeiling(1e-2, kTrials));
  EXPECT_LE(used, ThreeSigmaCeiling(1e-2, kTrials));
}

TEST(CoverageSuiteTest, LibraryBoundsPass) {
  validation::CoverageOptions options;
  options.trials = 20000;
  const validation::SuiteReport r = validation::RunCoverageSuite(options);
  EXPECT_TRUE(r.passed) << r.summary;
  EXPECT_EQ(r.checks, 30);
}

TEST(CoverageSuiteTest, SignFlippedGammaIsCaught) {
  validation::CoverageOptions options;
  options.trials = 20000;
  options.bounds.sampling = [](double n, double k, double lambda,
                               double eps) -> absl::StatusOr<double> {
    absl::StatusOr<double> g = SamplingCorrection(n, k, lambda, eps);
    if (!g.ok()) return g;
    return -*g;
  };
  const validation::SuiteReport r = validation::RunCoverageSuite(options);
  EXPECT_FALSE(r.passed);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_NE(r.failures.front().find("sampling"), std::string::npos);
}

TEST(BoundUseCounterTest, AuditRequiresExactBudget) {
  BoundUseCounter counter;
  EXPECT_FALSE(counter.Audit().ok());
  for (int i = 0; i < BoundBudget::kVariantUses; ++i) {
    ASSERT_TRUE(counter.VariantLower(10.0, 1e-3).ok());
  }
  for (int i = 0; i < BoundBudget::kChernoffUses; ++i) {
    ASSERT_TRUE(counter.ChernoffLower(10.0, 1e-3).ok());
  }
  ASSERT_TRUE(counter.Sampling(100.0, 100.0, 0.1, 1e-3).ok());
  EXPECT_TRUE(counter.Audit().ok());
  ASSERT_TRUE(counter.VariantUpper(10.0, 1e-3).ok());
  EXPECT_FALSE(counter.Audit().ok());
}

TEST(BoundBudgetTest, TwentySixTerms) {
  EXPECT_EQ(BoundBudget::kVariantUses + BoundBudget::kChernoffUses +
                BoundBudget::kSamplingUses + BoundBudget::kEntropyTerms,
            26);
  EXPECT_DOUBLE_EQ(BoundBudget::PerTerm(2.6e-9), 1e-10);
}

TEST(HypergeometricTest, SampleMeanMatchesAnalyticMean) {
  const auto sampler =
      *validation::HypergeometricSampler::Create(5000, 700, 1200);
  EXPECT_DOUBLE_EQ(sampler.Mean(), 1200.0 * 700.0 / 5000.0);
  std::mt19937_64 rng(4);
  constexpr int kDraws = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = static_cast<double>(sampler(rng));
    sum += x;
    sum_sq += x * x;
    ASSERT_GE(x, sampler.min_value());
    ASSERT_LE(x, sampler.max_value());
  }
  const double mean = sum / kDraws;
  // Variance of the hypergeometric distribution.
  const double N = 5000, K = 700, n = 1200;
  const double var = n * (K / N) * (1 - K / N) * (N - n) / (N - 1);
  EXPECT_NEAR(mean, sampler.Mean(), 5.0 * std::sqrt(var / kDraws));
  EXPECT_NEAR(sum_sq / kDraws - mean * mean, var, 0.05 * var);
}

}  // namespace
}  // namespace qcka
