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

// Property suites run by `qcka validate`, the unit tests and the acceptance
// binary. Each suite draws its own random configurations from a seed and
// reports every failed check by name.

#ifndef QCKA_VALIDATION_SUITES_H_
#define QCKA_VALIDATION_SUITES_H_

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "qcka/core.h"
#include "qcka/stat_bounds.h"

namespace qcka::validation {

struct SuiteReport {
  std::string name;
  bool passed = true;
  int checks = 0;
  std::vector<std::string> failures;  // capped; see failure_count
  int failure_count = 0;
  std::string summary;

  void Fail(std::string what);
};

// Random source settings inside the validity ranges, with t_b fixed by the
// intensity-ratio constraint.
SourceParams RandomSource(std::mt19937_64& rng);

// Random channel with arm lengths up to `max_length_km`, detector efficiency
// in [0.3, 1], log-uniform dark counts in [1e-8, 1e-3], misalignment in
// [0, 0.1] and a small residual phase offset.
ChannelParams RandomChannel(std::mt19937_64& rng, double max_length_km);

struct ConstraintOptions {
  int draws = 1000;
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
};

// Solved sending probabilities make the Z and X single-excitation states
// coincide.
SuiteReport RunConstraintSuite(const ConstraintOptions& options);

struct ChannelSuiteOptions {
  int configs = 20;
  std::int64_t trials_per_config = 10'000'000;  // split over 10 categories
  double max_z_score = 4.0;
  double max_length_km = 60.0;
  std::uint64_t seed = 12;
};

// Analytic gains and error rates against the photon-level simulation.
SuiteReport RunChannelSuite(const ChannelSuiteOptions& options);

// Bound implementations under test. Defaults are the library's.
struct BoundFunctions {
  std::function<absl::StatusOr<Interval>(double, double)> variant =
      VariantExpectedBounds;
  std::function<absl::StatusOr<Interval>(double, double)> chernoff =
      ChernoffObservedBounds;
  std::function<absl::StatusOr<double>(double, double, double, double)>
      sampling = SamplingCorrection;
};

struct CoverageOptions {
  std::vector<double> eps = {1e-2, 1e-3};
  int trials = 100'000;
  std::uint64_t seed = 3;
  BoundFunctions bounds;
};

// Empirical violation frequency of every one-sided bound is at most
// eps + 3 sigma, with sigma the binomial standard error at eps.
SuiteReport RunCoverageSuite(const CoverageOptions& options);

struct DecoySuiteOptions {
  int configs = 100;
  // Tagged finite-size runs per configuration.
  int finite_trials = 10;
  // Failure probability of every individual bound application.
  double finite_eps = 1e-2;
  double total_rounds = 1e12;
  double max_length_km = 100.0;
  std::uint64_t seed = 4;
};

// Decoy-state estimates never beat the photon-number ground truth:
// asymptotic bounds in every configuration, finite bounds with failure
// frequency at most finite_eps + 3 sigma.
SuiteReport RunDecoySuite(const DecoySuiteOptions& options);

}  // namespace qcka::validation

#endif  // QCKA_VALIDATION_SUITES_H_
