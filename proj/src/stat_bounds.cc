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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_format.h"

namespace qcka {
namespace {

absl::StatusOr<double> Beta(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("failure probability must lie in (0, 1), got %g", eps));
  }
  return std::log(1.0 / eps);
}

}  // namespace

absl::StatusOr<Interval> VariantExpectedBounds(double observed, double eps) {
  absl::StatusOr<double> beta = Beta(eps);
  if (!beta.ok()) return beta.status();
  if (!(observed >= 0.0)) {
    return absl::InvalidArgumentError("observed count must be non-negative");
  }
  const double b = *beta;
  const double x = observed;
  Interval out;
  out.upper = x + b + std::sqrt(2.0 * b * x + b * b);
  out.lower = std::max(0.0, x - b / 2.0 - std::sqrt(2.0 * b * x + b * b / 4.0));
  return out;
}

absl::StatusOr<Interval> ChernoffObservedBounds(double expected, double eps) {
  absl::StatusOr<double> beta = Beta(eps);
  if (!beta.ok()) return beta.status();
  if (!(expected >= 0.0)) {
    return absl::InvalidArgumentError("expected count must be non-negative");
  }
  const double b = *beta;
  const double x = expected;
  Interval out;
  out.upper = x + b / 2.0 + std::sqrt(2.0 * b * x + b * b / 4.0);
  out.lower = std::max(0.0, x - std::sqrt(2.0 * b * x));
  return out;
}

namespace {

// Kullback-Leibler divergence between Bernoulli(x) and Bernoulli(p).
double BernoulliDivergence(double x, double p) {
  double d = 0.0;
  if (x > 0.0) d += x * std::log(x / p);
  if (x < 1.0) d += (1.0 - x) * std::log((1.0 - x) / (1.0 - p));
  return d;
}

}  // namespace

absl::StatusOr<double> SamplingCorrection(double n, double k, double lambda,
                                          double eps) {
  if (!(n >= 1.0) || !(k >= 1.0)) {
    return absl::InvalidArgumentError("sample sizes must be >= 1");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample error rate must lie in [0, 1], got %g", lambda));
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    return absl::InvalidArgumentError("failure probability must lie in (0, 1)");
  }
  // Upper confidence limit on the rate p of the whole population: the
  // largest p with k D(lambda || p) <= ln(1/eps). Bisection keeps the
  // upper end of the bracket so the limit is never underestimated.
  const double budget = std::log(1.0 / eps) / k;
  double lo = lambda;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (BernoulliDivergence(lambda, mid) > budget) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // The remaining n items carry (n + k) p - k lambda errors.
  return std::max(0.0, (n + k) / n * (hi - lambda));
}

absl::StatusOr<double> ClosedFormSamplingCorrection(double n, double k,
                                                    double lambda, double eps) {
  if (!(n >= 1.0) || !(k >= 1.0)) {
    return absl::InvalidArgumentError("sample sizes must be >= 1");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample error rate must lie in (0, 1), got %g", lambda));
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    return absl::InvalidArgumentError("failure probability must lie in (0, 1)");
  }
  const double sum = n + k;
  const double a = std::max(n, k);
  const double var = lambda * (1.0 - lambda);
  const double g =
      (sum / (n * k)) *
      std::log(sum / (2.0 * std::numbers::pi * n * k * var * eps * eps));
  if (!(g > 0.0)) return 0.0;
  const double ag = a * g / sum;
  const double numerator =
      (1.0 - 2.0 * lambda) * ag + std::sqrt(ag * ag + 4.0 * var * g);
  const double denominator = 2.0 + 2.0 * a * a * g / (sum * sum);
  return std::max(0.0, numerator / denominator);
}

absl::StatusOr<double> BoundUseCounter::VariantLower(double observed,
                                                     double eps) {
  ++variant_;
  absl::StatusOr<Interval> b = VariantExpectedBounds(observed, eps);
  if (!b.ok()) return b.status();
  return b->lower;
}

absl::StatusOr<double> BoundUseCounter::VariantUpper(double observed,
                                                     double eps) {
  ++variant_;
  absl::StatusOr<Interval> b = VariantExpectedBounds(observed, eps);
  if (!b.ok()) return b.status();
  return b->upper;
}

absl::StatusOr<double> BoundUseCounter::ChernoffLower(double expected,
                                                      double eps) {
  ++chernoff_;
  absl::StatusOr<Interval> b = ChernoffObservedBounds(expected, eps);
  if (!b.ok()) return b.status();
  return b->lower;
}

absl::StatusOr<double> BoundUseCounter::ChernoffUpper(double expected,
                                                      double eps) {
  ++chernoff_;
  absl::StatusOr<Interval> b = ChernoffObservedBounds(expected, eps);
  if (!b.ok()) return b.status();
  return b->upper;
}

absl::StatusOr<double> BoundUseCounter::Sampling(double n, double k,
                                                 double lambda, double eps) {
  ++sampling_;
  return SamplingCorrection(n, k, lambda, eps);
}

absl::Status BoundUseCounter::Audit() const {
  if (variant_ != BoundBudget::kVariantUses ||
      chernoff_ != BoundBudget::kChernoffUses ||
      sampling_ != BoundBudget::kSamplingUses) {
    return absl::InternalError(absl::StrFormat(
        "failure budget mismatch: %d variant, %d Chernoff, %d sampling uses "
        "(expected %d/%d/%d)",
        variant_, chernoff_, sampling_, BoundBudget::kVariantUses,
        BoundBudget::kChernoffUses, BoundBudget::kSamplingUses));
  }
  return absl::OkStatus();
}

}  // namespace qcka
