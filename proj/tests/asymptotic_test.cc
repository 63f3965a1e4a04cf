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


#include "qcka/asymptotic.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "qcka/validation/fock_oracle.h"
#include "qcka/validation/suites.h"
#include "test_params.h"

namespace qcka {
namespace {

using ::qcka::testing::GenericSource;
using ::qcka::testing::TableOneSource;
using enum Intensity;

TEST(YieldBoundsTest, BoundsNeverExceedPhotonNumberTruth) {
  std::mt19937_64 rng(41);
  for (int c = 0; c < 40; ++c) {
    const SourceParams src = validation::RandomSource(rng);
    const ChannelParams ch = validation::RandomChannel(rng, 150.0);
    const ExpectedYields y = ComputeExpectedYields(src, ch);
    const validation::SinglePhotonTruth truth =
        validation::TrueSinglePhoton(src, ch);
    const DecoyYields z = *YieldBounds(y, src, Basis::kZ);
    const DecoyYields x = *YieldBounds(y, src, Basis::kX);
    const double slack = 1e-9;
    EXPECT_LE(z.y10, truth.y10_z * (1 + slack) + 1e-300) << c;
    EXPECT_LE(z.y01, truth.y01_z * (1 + slack) + 1e-300) << c;
    EXPECT_LE(z.y1, truth.y1_z * (1 + slack) + 1e-300) << c;
    EXPECT_LE(x.y10, truth.y10_x * (1 + slack) + 1e-300) << c;
    EXPECT_LE(x.y01, truth.y01_x * (1 + slack) + 1e-300) << c;
    EXPECT_LE(x.y1, truth.y1_x * (1 + slack) + 1e-300) << c;
    const absl::StatusOr<PhaseErrorEstimate> e1 = PhaseErrorBound(y, src);
    if (e1.ok()) {
      EXPECT_GE(e1->value, truth.e1_pm * (1 - slack)) << c;
    }
  }
}

TEST(YieldBoundsTest, NoClicksNoYield) {
  const ExpectedYields zero;
  const DecoyYields z = *YieldBounds(zero, GenericSource(), Basis::kZ);
  EXPECT_EQ(z.y0, 0.0);
  EXPECT_EQ(z.y1, 0.0);
}

// With yields only for zero and one photon, Q_k = e^-k (Y0 + k Y1), the
// three-intensity estimate is exact.
TEST(YieldBoundsTest, ExactForTwoTermPhotonModel) {
  const SourceParams src = GenericSource();
  const double y0 = 3e-6;
  const double ya = 0.0123;
  const double yb = 0.0456;
  ExpectedYields y;
  for (PairTable<double>* q : {&y.z_gain, &y.x_gain}) {
    auto gain = [&](double k, double y1) { return std::exp(-k) * (y0 + k * y1); };
    (*q)(kVacuum, kVacuum) = y0;
    (*q)(kSignal, kVacuum) = gain(src.mu_a, ya);
    (*q)(kDecoy, kVacuum) = gain(src.nu_a, ya);
    (*q)(kVacuum, kSignal) = gain(src.mu_b, yb);
    (*q)(kVacuum, kDecoy) = gain(src.nu_b, yb);
  }
  for (Basis basis : {Basis::kZ, Basis::kX}) {
    const DecoyYields d = *YieldBounds(y, src, basis);
    EXPECT_NEAR(d.y10, ya, 1e-12);
    EXPECT_NEAR(d.y01, yb, 1e-12);
    EXPECT_NEAR(d.y1, (src.nu_a * ya + src.nu_b * yb) / (src.nu_a + src.nu_b),
                1e-12);
  }
}

TEST(YieldBoundsTest, DegenerateDecoyRejected) {
  SourceParams src = GenericSource();
  src.nu_a = src.mu_a;
  EXPECT_FALSE(YieldBounds(ExpectedYields{}, src, Basis::kZ).ok());
}

TEST(PhaseErrorTest, VanishesWhenErrorsAreAllVacuum) {
  const SourceParams src = GenericSource();
  ExpectedYields y = ComputeExpectedYields(src, DefaultFiberChannel(20, 40));
  const DecoyYields x = *YieldBounds(y, src, Basis::kX);
  const double nu_sum = src.nu_a + src.nu_b;
  // E^pm Q^pm per phase-matched round equals Y0 e^-(nu_a+nu_b) / 2.
  y.pm_error = 0.25;
  y.pm_gain = x.y0 * std::exp(-nu_sum) / 2.0 / y.pm_error *
              PhaseMatchingProbability(src.delta);
  const PhaseErrorEstimate e = *PhaseErrorBound(y, src);
  EXPECT_NEAR(e.raw, 0.0, 1e-12);
  EXPECT_EQ(e.value, 0.0);
}

TEST(PhaseErrorTest, DarkCountRegimeStaysSound) {
  SourceParams src = GenericSource();
  src.mu_a = src.mu_b = 2e-6;
  src.nu_a = src.nu_b = 1e-6;
  src = *WithConstrainedBobSending(src);
  ChannelParams ch = DefaultFiberChannel(50, 50);
  ch.dark_count_prob = 1e-3;
  const absl::StatusOr<PhaseErrorEstimate> e =
      PhaseErrorBound(ComputeExpectedYields(src, ch), src);
  if (e.ok()) {
    EXPECT_GE(e->value, validation::TrueSinglePhoton(src, ch).e1_pm);
    EXPECT_LE(e->value, 0.5);
  } else {
    EXPECT_TRUE(absl::IsFailedPrecondition(e.status()));
  }
}

TEST(PhaseErrorTest, CloseToTruthAtOptimizedPoint) {
  const SourceParams src = TableOneSource();
  const ChannelParams ch = DefaultFiberChannel(100, 100);
  const PhaseErrorEstimate e =
      *PhaseErrorBound(ComputeExpectedYields(src, ch), src);
  const double truth = validation::TrueSinglePhoton(src, ch).e1_pm;
  EXPECT_GE(e.value, truth);
  EXPECT_LT(e.value - truth, 0.01);
}

TEST(AsymptoticRateTest, NoLightNoKey) {
  ChannelParams ch = DefaultFiberChannel(5000, 5000);
  ch.dark_count_prob = 0.0;
  const AsymptoticResult r = *AsymptoticRate(GenericSource(), ch);
  EXPECT_EQ(r.rate, 0.0);
}

TEST(AsymptoticRateTest, RateIsFlooredSumOfTerms) {
  std::mt19937_64 rng(43);
  for (int c = 0; c < 100; ++c) {
    const SourceParams src = validation::RandomSource(rng);
    const ChannelParams ch = validation::RandomChannel(rng, 200.0);
    const AsymptoticResult r = *AsymptoticRate(src, ch);
    EXPECT_EQ(r.rate, std::max(0.0, r.rate_raw));
    EXPECT_NEAR(r.rate_raw,
                r.vacuum_rate + r.single_rate * (1 - BinaryEntropyClamped(r.e1ph)) -
                    r.xi_ec,
                1e-15);
    EXPECT_GE(r.e1ph, 0.0);
    EXPECT_LE(r.e1ph, 0.5);
    for (double v : {r.z.y0, r.z.y1, r.x.y0, r.x.y1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(AsymptoticRateTest, FullPhaseNoiseWithoutVacuumGivesZero) {
  const SourceParams src = GenericSource();
  ExpectedYields y = ComputeExpectedYields(src, DefaultFiberChannel(30, 30));
  y.z_gain(kVacuum, kVacuum) = 0.0;
  y.pm_error = 0.5;
  y.pm_gain = 1.0;  // forces the raw phase error far above 1/2
  const AsymptoticResult r = *AsymptoticRateFromYields(src, 1.1, y);
  EXPECT_EQ(r.e1ph, 0.5);
  EXPECT_EQ(r.z.y0, 0.0);
  EXPECT_NEAR(r.rate_raw, -r.xi_ec, 1e-18);
  EXPECT_EQ(r.rate, 0.0);
}

TEST(AsymptoticRateTest, NonIncreasingWithDistance) {
  const SourceParams src = TableOneSource();
  double previous = INFINITY;
  for (double total = 50; total <= 600; total += 10) {
    ChannelParams ch = DefaultFiberChannel((total - 50) / 2, (total + 50) / 2);
    ch.dark_count_prob = 0.0;
    const double r = AsymptoticRate(src, ch)->rate;
    EXPECT_LE(r, previous * (1 + 1e-12)) << total;
    previous = r;
  }
}

}  // namespace
}  // namespace qcka
