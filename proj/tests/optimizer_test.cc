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


#include "qcka/optimizer.h"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "qcka/asymptotic.h"
#include "qcka/core.h"
#include "qcka/validation/suites.h"
#include "test_params.h"

namespace qcka {
namespace {

using ::qcka::testing::TableOneSource;

OptimizationSpec Spec(Objective objective, bool symmetric, int starts = 4,
                      int evals = 800) {
  OptimizationSpec spec;
  spec.objective = objective;
  spec.symmetric = symmetric;
  spec.multistart = starts;
  spec.max_evals = evals;
  return spec;
}

SecurityParams Rounds(double n) {
  SecurityParams sec;
  sec.total_rounds = n;
  return sec;
}

TEST(NelderMeadTest, FindsQuadraticMaximum) {
  const std::vector<double> target = {0.2, 0.7, 0.45};
  const auto f = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s -= (x[i] - target[i]) * (x[i] - target[i]) * (i + 1);
    }
    return s;
  };
  const SimplexResult r = MaximizeNelderMead(f, {0.5, 0.5, 0.5}, 2000);
  ASSERT_EQ(r.best.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.best[i], target[i], 1e-4);
  EXPECT_NEAR(r.best_value, 0.0, 1e-8);
  EXPECT_LE(r.evaluations, 2000);
}

TEST(NelderMeadTest, StaysInsideUnitBox) {
  const auto f = [](std::span<const double> x) {
    EXPECT_GE(x[0], 0.0);
    EXPECT_LE(x[0], 1.0);
    EXPECT_GE(x[1], 0.0);
    EXPECT_LE(x[1], 1.0);
    return x[0] + x[1];
  };
  const SimplexResult r = MaximizeNelderMead(f, {0.3, 0.6}, 500);
  EXPECT_NEAR(r.best_value, 2.0, 1e-6);
}

TEST(ParameterCodingTest, RoundTrip) {
  std::mt19937_64 rng(61);
  for (bool symmetric : {false, true}) {
    const OptimizationSpec spec = Spec(Objective::kAsymptotic, symmetric);
    for (int c = 0; c < 50; ++c) {
      SourceParams src = validation::RandomSource(rng);
      if (symmetric) {
        src.mu_b = src.mu_a;
        src.nu_b = src.nu_a;
        src.p_zb = src.p_za;
        src.p_0b = src.p_0a;
        src.p_nub = src.p_nua;
        src = *WithConstrainedBobSending(src);
      }
      const std::vector<double> unit = EncodeParameters(spec, src);
      ASSERT_EQ(static_cast<int>(unit.size()), FreeParameterCount(symmetric));
      const absl::StatusOr<SourceParams> back = DecodeParameters(spec, unit);
      if (!back.ok()) continue;  // outside the search box
      EXPECT_NEAR(back->mu_a, src.mu_a, 1e-12 * src.mu_a + 1e-15);
      EXPECT_NEAR(back->nu_b, src.nu_b, 1e-12 * src.nu_b + 1e-15);
      EXPECT_NEAR(back->t_a, src.t_a, 1e-12);
      EXPECT_NEAR(back->p_zb, src.p_zb, 1e-12);
      EXPECT_NEAR(back->delta, src.delta, 1e-12);
      EXPECT_NEAR(back->q_z, src.q_z, 1e-12);
    }
  }
}

TEST(ParameterCodingTest, DecodedPointsSatisfyConstraint) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const OptimizationSpec spec = Spec(Objective::kAsymptotic, false);
  for (int c = 0; c < 200; ++c) {
    std::vector<double> unit(FreeParameterCount(false));
    for (double& x : unit) x = u(rng);
    const absl::StatusOr<SourceParams> src = DecodeParameters(spec, unit);
    if (!src.ok()) continue;
    EXPECT_LE(ConstraintResidual(*src), kConstraintTolerance);
  }
}

TEST(OptimizeTest, OptimumIsFeasibleAndDominatesTrace) {
  for (Objective objective : {Objective::kAsymptotic, Objective::kFinite}) {
    const OptimizationSpec spec = Spec(objective, false);
    const absl::StatusOr<OptimizationResult> r =
        Optimize(spec, DefaultFiberChannel(50, 100), Rounds(1e14));
    ASSERT_TRUE(r.ok()) << r.status();
    ASSERT_TRUE(r->feasible);
    EXPECT_GT(r->value, 0.0);
    EXPECT_LE(ConstraintResidual(r->best), kConstraintTolerance);
    EXPECT_TRUE(ValidateSourceParams(r->best).ok());
    ASSERT_FALSE(r->trace.empty());
    for (const TracePoint& p : r->trace) EXPECT_LE(p.value, r->value);
    const Evaluation again = EvaluateObjective(
        objective, r->best, DefaultFiberChannel(50, 100), Rounds(1e14));
    EXPECT_EQ(again.value, r->value);
  }
}

TEST(OptimizeTest, DeterministicInSeed) {
  const OptimizationSpec spec = Spec(Objective::kFinite, false, 3, 400);
  const ChannelParams ch = DefaultFiberChannel(25, 75);
  const OptimizationResult a = *Optimize(spec, ch, Rounds(1e12));
  const OptimizationResult b = *Optimize(spec, ch, Rounds(1e12));
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.value, b.value);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].start, b.trace[i].start);
    EXPECT_EQ(a.trace[i].value, b.trace[i].value);
  }
}

TEST(OptimizeTest, WarmStartIsNeverWorse) {
  const OptimizationSpec spec = Spec(Objective::kFinite, false, 1, 300);
  const ChannelParams ch = DefaultFiberChannel(25, 75);
  const double warm = EvaluateObjective(Objective::kFinite, TableOneSource(),
                                        ch, Rounds(1e14))
                          .value;
  const OptimizationResult r =
      *Optimize(spec, ch, Rounds(1e14), TableOneSource());
  EXPECT_GE(r.value, warm * (1 - 1e-9));
}

TEST(OptimizeTest, AsymmetricNotWorseOnSymmetricChannel) {
  for (double arm : {20.0, 80.0}) {
    const ChannelParams ch = DefaultFiberChannel(arm, arm);
    const double asym =
        Optimize(Spec(Objective::kFinite, false, 8, 2000), ch, Rounds(1e14))
            ->value;
    const double sym =
        Optimize(Spec(Objective::kFinite, true, 8, 2000), ch, Rounds(1e14))
            ->value;
    EXPECT_GE(asym, 0.99 * sym) << arm;
  }
}

TEST(OptimizeTest, ZeroBeyondCutoff) {
  const absl::StatusOr<OptimizationResult> r = Optimize(
      Spec(Objective::kFinite, false, 2, 300), DefaultFiberChannel(800, 850),
      Rounds(1e10));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->value, 0.0);
}

TEST(OptimizeTest, SymmetricModeTiesBobToAlice) {
  const OptimizationResult r = *Optimize(
      Spec(Objective::kAsymptotic, true, 2, 300), DefaultFiberChannel(30, 30),
      Rounds(1e14));
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.best.mu_a, r.best.mu_b);
  EXPECT_EQ(r.best.nu_a, r.best.nu_b);
  EXPECT_EQ(r.best.p_za, r.best.p_zb);
  EXPECT_EQ(r.best.p_0a, r.best.p_0b);
  EXPECT_EQ(r.best.p_nua, r.best.p_nub);
  // The same point evaluated without the symmetric restriction.
  const double direct =
      AsymptoticRate(r.best, DefaultFiberChannel(30, 30))->rate;
  EXPECT_NEAR(r.value, direct, 1e-12 * direct);
}

TEST(ScanTest, SinglePointMatchesOptimize) {
  const OptimizationSpec spec = Spec(Objective::kFinite, false, 2, 300);
  const std::vector<double> totals = {150.0};
  const std::vector<ScanRow> rows =
      *Scan(spec, ChannelParams{}, totals, 50.0, Rounds(1e14));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].length_a_km, 50.0);
  EXPECT_EQ(rows[0].length_b_km, 100.0);
  ChannelParams ch;
  ch.length_a_km = 50.0;
  ch.length_b_km = 100.0;
  const OptimizationResult direct = *Optimize(spec, ch, Rounds(1e14));
  EXPECT_EQ(rows[0].result.value, direct.value);
  EXPECT_EQ(rows[0].result.best, direct.best);
}

TEST(ScanTest, FlagsRisingRates) {
  const OptimizationSpec spec = Spec(Objective::kAsymptotic, false, 2, 300);
  const std::vector<double> totals = {100.0, 200.0, 300.0};
  const std::vector<ScanRow> rows =
      *Scan(spec, ChannelParams{}, totals, 0.0, Rounds(1e14));
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      EXPECT_EQ(rows[i].monotone_value, rows[i].result.value);
      continue;
    }
    EXPECT_LE(rows[i].monotone_value, rows[i - 1].monotone_value);
    EXPECT_EQ(rows[i].rate_increased,
              rows[i].result.value > rows[i - 1].result.value);
  }
}

TEST(ScanTest, RejectsTotalsShorterThanDifference) {
  const std::vector<double> totals = {20.0};
  EXPECT_FALSE(Scan(Spec(Objective::kFinite, false), ChannelParams{}, totals,
                    50.0, Rounds(1e14))
                   .ok());
}

}  // namespace
}  // namespace qcka
