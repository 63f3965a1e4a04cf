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

// Concentration bounds relating expected and observed counts of sums of
// independent Bernoulli trials, and the sampling-without-replacement
// correction. Every bound holds except with the stated failure probability.

#ifndef QCKA_STAT_BOUNDS_H_
#define QCKA_STAT_BOUNDS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace qcka {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Bounds on the expected value given an observed count x, with
// beta = ln(1/eps):
//   upper = x + beta + sqrt(2 beta x + beta^2)
//   lower = max(0, x - beta/2 - sqrt(2 beta x + beta^2 / 4))
absl::StatusOr<Interval> VariantExpectedBounds(double observed, double eps);

// Bounds on the observed count given its expected value x*:
//   upper = x* + beta/2 + sqrt(2 beta x* + beta^2 / 4)
//   lower = max(0, x* - sqrt(2 beta x*))
absl::StatusOr<Interval> ChernoffObservedBounds(double expected, double eps);

// Correction gamma(n, k, lambda, eps) such that, when k items are drawn at
// random without replacement from n + k and show error rate lambda, the
// remaining n items have error rate at most lambda + gamma except with
// probability eps. Computed from the Kullback-Leibler Chernoff bound, which
// also holds for sampling without replacement. Defined for lambda in [0, 1].
absl::StatusOr<double> SamplingCorrection(double n, double k, double lambda,
                                          double eps);

// Widely quoted Gaussian-approximation closed form
//   [(1 - 2 lambda) A G / (n + k) + sqrt(A^2 G^2 / (n + k)^2
//     + 4 lambda (1 - lambda) G)] / [2 + 2 A^2 G / (n + k)^2],
//   A = max(n, k), G = (n + k) / (n k) ln((n + k) / (2 pi n k lambda
//     (1 - lambda) eps^2)).
// Its failure probability exceeds eps once n k lambda (1 - lambda) / (n + k)
// is large, so it is not used by the pipeline. Kept for comparison.
absl::StatusOr<double> ClosedFormSamplingCorrection(double n, double k,
                                                    double lambda, double eps);

// Failure-probability accounting for the finite-key pipeline. The secrecy
// budget is split evenly over every bound application and every smoothing
// term of the min-entropy estimate.
struct BoundBudget {
  static constexpr int kVariantUses = 12;
  static constexpr int kChernoffUses = 4;
  static constexpr int kSamplingUses = 1;
  static constexpr int kEntropyTerms = 9;
  static constexpr int kTotalTerms =
      kVariantUses + kChernoffUses + kSamplingUses + kEntropyTerms;

  // Per-term failure probability eps_sec / 26.
  static double PerTerm(double eps_sec) { return eps_sec / kTotalTerms; }
};

static_assert(BoundBudget::kTotalTerms == 26);

// Tallies one-sided bound applications so callers can audit them against
// BoundBudget. A use is recorded even when the bound itself fails.
class BoundUseCounter {
 public:
  absl::StatusOr<double> VariantLower(double observed, double eps);
  absl::StatusOr<double> VariantUpper(double observed, double eps);
  absl::StatusOr<double> ChernoffLower(double expected, double eps);
  absl::StatusOr<double> ChernoffUpper(double expected, double eps);
  absl::StatusOr<double> Sampling(double n, double k, double lambda,
                                  double eps);

  int variant_uses() const { return variant_; }
  int chernoff_uses() const { return chernoff_; }
  int sampling_uses() const { return sampling_; }

  // Fails unless the tallies match BoundBudget exactly.
  absl::Status Audit() const;

 private:
  int variant_ = 0;
  int chernoff_ = 0;
  int sampling_ = 0;
};

}  // namespace qcka

#endif  // QCKA_STAT_BOUNDS_H_
