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


#include "qcka/core.h"

#include <cmath>
#include <random>

#include "boost/math/distributions/poisson.hpp"
#include "boost/math/tools/roots.hpp"
#include "boost/multiprecision/cpp_bin_float.hpp"
#include "gtest/gtest.h"
#include "test_params.h"

namespace qcka {
namespace {

using ::qcka::testing::GenericSource;

// h(x) in 50-digit arithmetic.
double HighPrecisionEntropy(double x) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big p(x);
  const Big q = Big(1) - p;
  return static_cast<double>(-(p * log(p) + q * log(q)) / log(Big(2)));
}

// Single-photon weight of a sender that emits intensity mu with probability
// t: t Pr[Poisson(mu) = 1].
double OnePhoton(double t, double mu) {
  return t * boost::math::pdf(boost::math::poisson_distribution<>(mu), 1);
}

// t_b found by root bracketing on the ratio condition between the Z and X
// single-excitation weights, without the closed form.
double TbByBisection(double mu_a, double mu_b, double t_a, double nu_a,
                     double nu_b) {
  auto gap = [&](double t_b) {
    const double w10 = OnePhoton(t_a, mu_a) * (1.0 - t_b);
    const double w01 = OnePhoton(t_b, mu_b) * (1.0 - t_a);
    return w10 / (w10 + w01) - nu_a / (nu_a + nu_b);
  };
  boost::math::tools::eps_tolerance<double> tol(52);
  const auto [lo, hi] = boost::math::tools::bisect(gap, 1e-300, 1.0 - 1e-16,
                                                   tol);
  return 0.5 * (lo + hi);
}

TEST(BinaryEntropyTest, FixedPoints) {
  EXPECT_EQ(*BinaryEntropy(0.5), 1.0);
  EXPECT_EQ(*BinaryEntropy(0.0), 0.0);
  EXPECT_EQ(*BinaryEntropy(1.0), 0.0);
}

TEST(BinaryEntropyTest, MatchesHighPrecisionEvaluation) {
  EXPECT_NEAR(*BinaryEntropy(0.11), HighPrecisionEntropy(0.11), 1e-15);
  EXPECT_NEAR(*BinaryEntropy(0.11), 0.4999160, 1e-7);
  for (double x : {1e-12, 1e-6, 0.01, 0.035, 0.25, 0.4999}) {
    EXPECT_NEAR(*BinaryEntropy(x), HighPrecisionEntropy(x), 1e-15) << x;
  }
}

TEST(BinaryEntropyTest, RejectsOutsideUnitInterval) {
  EXPECT_FALSE(BinaryEntropy(-1e-9).ok());
  EXPECT_FALSE(BinaryEntropy(1.0 + 1e-9).ok());
  EXPECT_FALSE(BinaryEntropy(std::nan("")).ok());
}

TEST(BinaryEntropyTest, SymmetricAboutOneHalf) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(*BinaryEntropy(x), *BinaryEntropy(1.0 - x), 1e-14) << x;
  }
}

TEST(SolveBobSendingTest, SymmetricCaseReturnsAliceValue) {
  EXPECT_NEAR(*SolveBobSendingProbability(0.5, 0.5, 0.3, 0.1, 0.1), 0.3,
              1e-15);
}

TEST(SolveBobSendingTest, ApproachesOneWithAlice) {
  EXPECT_GT(*SolveBobSendingProbability(0.5, 0.4, 1.0 - 1e-12, 0.1, 0.05),
            1.0 - 1e-10);
}

TEST(SolveBobSendingTest, AsymmetricCaseMatchesRootBracketing) {
  const double t_b = *SolveBobSendingProbability(0.5, 0.4, 0.3, 0.1, 0.05);
  EXPECT_NEAR(t_b, TbByBisection(0.5, 0.4, 0.3, 0.1, 0.05), 1e-12);

  // Back substitution into the intensity-ratio constraint.
  const double w10 = OnePhoton(0.3, 0.5) * (1.0 - t_b);
  const double w01 = OnePhoton(t_b, 0.4) * (1.0 - 0.3);
  EXPECT_NEAR((w10 / w01) / (0.1 / 0.05), 1.0, 1e-12);
}

TEST(SolveBobSendingTest, RejectsInvalidInputs) {
  EXPECT_FALSE(SolveBobSendingProbability(0.0, 0.4, 0.3, 0.1, 0.05).ok());
  EXPECT_FALSE(SolveBobSendingProbability(0.5, 0.4, 0.3, -0.1, 0.05).ok());
  EXPECT_FALSE(SolveBobSendingProbability(0.5, 0.4, 0.0, 0.1, 0.05).ok());
  EXPECT_FALSE(SolveBobSendingProbability(0.5, 0.4, 1.0, 0.1, 0.05).ok());
}

TEST(SolveBobSendingTest, IncreasingInAlice) {
  double previous = 0.0;
  for (double t_a = 0.01; t_a < 1.0; t_a += 0.01) {
    const double t_b = *SolveBobSendingProbability(0.3, 0.7, t_a, 0.02, 0.09);
    EXPECT_GT(t_b, previous) << t_a;
    previous = t_b;
  }
}

TEST(SingleExcitationTest, SymmetricSourceGivesEqualWeights) {
  SourceParams s = GenericSource();
  s.mu_b = s.mu_a;
  s.nu_b = s.nu_a;
  s.t_b = s.t_a;
  const SingleExcitationPair p = *SingleExcitationStates(s);
  EXPECT_NEAR(p.z.w10, 0.5, 1e-15);
  EXPECT_NEAR(p.z.w01, 0.5, 1e-15);
  EXPECT_NEAR(p.x.w10, 0.5, 1e-15);
  EXPECT_NEAR(p.x.w01, 0.5, 1e-15);
}

TEST(SingleExcitationTest, PerturbedDecoyBreaksEquality) {
  SourceParams s = GenericSource();
  s.nu_a *= 1.1;
  const SingleExcitationPair p = *SingleExcitationStates(s);
  EXPECT_GT(std::abs(p.z.w10 - p.x.w10), 1e-3);
  EXPECT_FALSE(ValidateSourceParams(s).ok());
}

TEST(SingleExcitationTest, ConstrainedDrawsCoincide) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    SourceParams s = GenericSource();
    s.mu_a = 0.05 + 0.95 * u(rng);
    s.mu_b = 0.05 + 0.95 * u(rng);
    s.nu_a = s.mu_a * (0.02 + 0.9 * u(rng));
    s.nu_b = s.mu_b * (0.02 + 0.9 * u(rng));
    s.t_a = 0.01 + 0.98 * u(rng);
    s = *WithConstrainedBobSending(s);
    const SingleExcitationPair p = *SingleExcitationStates(s);
    EXPECT_NEAR(p.z.w10 + p.z.w01, 1.0, 1e-12);
    EXPECT_NEAR(p.z.w10, p.x.w10, 1e-12);
    EXPECT_NEAR(p.z.w01, p.x.w01, 1e-12);
    EXPECT_TRUE(ValidateSourceParams(s).ok());
  }
}

TEST(ValidateTest, RejectsOutOfRangeSettings) {
  SourceParams s = GenericSource();
  s.nu_a = s.mu_a;
  EXPECT_FALSE(ValidateSourceRanges(s).ok());
  s = GenericSource();
  s.p_0a = 0.7;
  s.p_nua = 0.4;
  EXPECT_FALSE(ValidateSourceRanges(s).ok());
  s = GenericSource();
  s.delta = 2.0;
  EXPECT_FALSE(ValidateSourceRanges(s).ok());

  ChannelParams ch;
  ch.misalignment_x = 0.5;
  EXPECT_FALSE(ValidateChannelParams(ch).ok());
  SecurityParams sec;
  sec.total_rounds = 1.5;
  EXPECT_FALSE(ValidateSecurityParams(sec).ok());
}

}  // namespace
}  // namespace qcka
