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


#include "qcka/finite_key.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "qcka/asymptotic.h"
#include "qcka/validation/fock_oracle.h"
#include "qcka/validation/suites.h"
#include "test_params.h"

namespace qcka {
namespace {

using ::qcka::testing::GenericSource;
using ::qcka::testing::TableOneSource;
using enum Intensity;

SecurityParams Rounds(double n) {
  SecurityParams sec;
  sec.total_rounds = n;
  return sec;
}

TEST(KeyLengthTest, EveryCallSpendsTheFullBudget) {
  std::mt19937_64 rng(51);
  for (int c = 0; c < 60; ++c) {
    const SourceParams src = validation::RandomSource(rng);
    const ChannelParams ch = validation::RandomChannel(rng, 150.0);
    const SecurityParams sec = Rounds(c % 2 ? 1e10 : 1e14);
    const absl::StatusOr<FiniteKeyResult> expected =
        ExpectedKeyLength(src, ch, sec);
    ASSERT_TRUE(expected.ok()) << expected.status();
    const absl::StatusOr<ObservedCounts> counts =
        SampleCounts(src, ch, sec, 100 + c);
    ASSERT_TRUE(counts.ok());
    const absl::StatusOr<FiniteKeyResult> sampled =
        KeyLength(*counts, src, sec, ch.ec_efficiency);
    ASSERT_TRUE(sampled.ok()) << sampled.status();
    for (const FiniteKeyResult* r : {&*expected, &*sampled}) {
      EXPECT_EQ(r->variant_uses, 12);
      EXPECT_EQ(r->chernoff_uses, 4);
      EXPECT_EQ(r->sampling_uses, 1);
      EXPECT_GE(r->key_length, 0.0);
      EXPECT_GE(r->e1ph_up, 0.0);
      EXPECT_LE(r->e1ph_up, 0.5);
    }
  }
}

TEST(KeyLengthTest, NeverBeatsAsymptoticRate) {
  std::mt19937_64 rng(52);
  for (int c = 0; c < 100; ++c) {
    const SourceParams src = validation::RandomSource(rng);
    const ChannelParams ch = validation::RandomChannel(rng, 150.0);
    const double r = AsymptoticRate(src, ch)->rate;
    for (double n : {1e8, 1e12, 1e16, 1e18}) {
      const FiniteKeyResult f = *ExpectedKeyLength(src, ch, Rounds(n));
      EXPECT_LE(f.key_length / n, r * (1 + 1e-6)) << c << " N=" << n;
    }
  }
}

TEST(KeyLengthTest, ApproachesAsymptoticRateForHugeN) {
  SourceParams src = TableOneSource();
  src.p_za = src.p_zb = 0.999;
  const ChannelParams ch = DefaultFiberChannel(0, 50);
  const double r = AsymptoticRate(src, ch)->rate;
  const double l = ExpectedKeyLength(src, ch, Rounds(1e18))->key_length;
  EXPECT_LE(l / 1e18, r);
  EXPECT_GE(l / 1e18, 0.95 * r);
}

TEST(KeyLengthTest, NonDecreasingInRoundsAndEps) {
  const SourceParams src = TableOneSource();
  const ChannelParams ch = DefaultFiberChannel(50, 100);
  double previous = 0.0;
  for (double n = 1e9; n <= 1e18; n *= 10) {
    const double l = ExpectedKeyLength(src, ch, Rounds(n))->key_length;
    EXPECT_GE(l, previous) << n;
    previous = l;
  }
  previous = 0.0;
  for (double eps : {1e-20, 1e-15, 1e-10, 1e-5, 1e-2}) {
    SecurityParams sec = Rounds(1e13);
    sec.eps_sec = eps;
    const double l = ExpectedKeyLength(src, ch, sec)->key_length;
    EXPECT_GE(l, previous) << eps;
    previous = l;
  }
}

TEST(KeyLengthTest, NoClicksNoKey) {
  const SourceParams src = GenericSource();
  const SecurityParams sec = Rounds(1e12);
  ObservedCounts counts;
  counts.announced = AnnouncedTotals(src, sec);
  const FiniteKeyResult r = *KeyLength(counts, src, sec, 1.1);
  EXPECT_EQ(r.key_length, 0.0);
  EXPECT_EQ(r.s0z.observed_low, 0.0);
  EXPECT_EQ(r.s1z.observed_low, 0.0);
  EXPECT_EQ(r.t_pm.t1_observed_up, 0.0);
  EXPECT_FALSE(r.phase_bound_defined);
  EXPECT_EQ(r.variant_uses, 12);
}

TEST(KeyLengthTest, ReportsSliceProbability) {
  SourceParams src = GenericSource();
  src.delta = std::numbers::pi / 16;
  const FiniteKeyResult r =
      *ExpectedKeyLength(src, DefaultFiberChannel(10, 20), Rounds(1e12));
  EXPECT_DOUBLE_EQ(r.p_pm, 0.125);
}

TEST(KeyLengthTest, PhaseErrorCoversTruthAtTableOnePoint) {
  const SourceParams src = TableOneSource();
  const ChannelParams ch = DefaultFiberChannel(25, 75);
  const FiniteKeyResult r = *ExpectedKeyLength(src, ch, Rounds(1e14));
  EXPECT_GT(r.key_length, 0.0);
  EXPECT_GE(r.e1ph_up, validation::TrueSinglePhoton(src, ch).e1_pm);
}

TEST(EstimatorTest, VacuumEstimateApproachesPlugInForLargeCounts) {
  const SourceParams src = GenericSource();
  const ChannelParams ch = DefaultFiberChannel(10, 20);
  const SecurityParams sec = Rounds(1e20);
  const ObservedCounts c = ExpectedCounts(src, ch, sec);
  BoundUseCounter bounds;
  const VacuumEstimate v = *EstimateVacuumZ(c, src, sec, bounds);
  const double plug_in =
      src.p_za * src.p_zb *
      (src.t_a * (1 - src.t_b) * std::exp(-src.mu_a) +
       src.t_b * (1 - src.t_a) * std::exp(-src.mu_b)) *
      sec.total_rounds * c.z_clicks(kVacuum, kVacuum) /
      c.announced(kVacuum, kVacuum);
  EXPECT_LE(v.observed_low, plug_in);
  EXPECT_NEAR(v.observed_low / plug_in, 1.0, 1e-3);
}

TEST(EstimatorTest, VacuumEstimateNeedsVacuumRounds) {
  BoundUseCounter bounds;
  EXPECT_TRUE(absl::IsFailedPrecondition(
      EstimateVacuumZ(ObservedCounts{}, GenericSource(), Rounds(1e6), bounds)
          .status()));
}

TEST(EstimatorTest, NoPhaseMatchedErrorsNoSinglePhotonErrors) {
  const SourceParams src = GenericSource();
  const SecurityParams sec = Rounds(1e12);
  ObservedCounts c = ExpectedCounts(src, DefaultFiberChannel(10, 20), sec);
  c.pm_errors = 0.0;
  BoundUseCounter bounds;
  EXPECT_EQ(EstimateSinglePhotonErrors(c, src, sec, bounds)->t1_observed_up,
            0.0);
}

TEST(EstimatorTest, DarkCountOnlyVacuumAccountsForErrors) {
  SourceParams src = GenericSource();
  src.mu_a = src.mu_b = 2e-9;
  src.nu_a = src.nu_b = 1e-9;
  src = *WithConstrainedBobSending(src);
  ChannelParams ch = DefaultFiberChannel(10, 20);
  ch.dark_count_prob = 1e-4;
  const SecurityParams sec = Rounds(1e16);
  const ObservedCounts c = ExpectedCounts(src, ch, sec);
  BoundUseCounter bounds;
  const VacuumErrorEstimate t =
      *EstimateSinglePhotonErrors(c, src, sec, bounds);
  // Only fluctuation terms are left.
  EXPECT_LT(t.t1_observed_up, 0.01 * c.pm_errors);
}

TEST(PhaseErrorRateTest, Limits) {
  const SecurityParams sec = Rounds(1e14);
  BoundUseCounter a;
  const double small = *PhaseErrorRateBound(1e12, 1e11, 0.0, sec, a);
  EXPECT_GT(small, 0.0);
  EXPECT_LT(small, 1e-9);
  BoundUseCounter b;
  EXPECT_EQ(*PhaseErrorRateBound(1e6, 1e4, 5e3, sec, b), 0.5);
  BoundUseCounter c;
  EXPECT_TRUE(absl::IsFailedPrecondition(
      PhaseErrorRateBound(1e6, 0.0, 0.0, sec, c).status()));
}

TEST(DecoySuiteTest, TaggedSoundnessOnSmallRun) {
  validation::DecoySuiteOptions options;
  options.configs = 20;
  options.finite_trials = 5;
  const validation::SuiteReport r = validation::RunDecoySuite(options);
  EXPECT_TRUE(r.passed) << r.summary;
}

}  // namespace
}  // namespace qcka
