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

// Round-by-round photon-level simulation of the receiver, used to check the
// analytic gains and error rates. Each round draws Poisson photon numbers,
// routes every photon through loss and the basis splitter, splits the
// interfering photons between the two X detectors according to the sampled
// phases, adds dark counts and applies misalignment as an outcome flip.

#ifndef QCKA_VALIDATION_PHOTON_MC_H_
#define QCKA_VALIDATION_PHOTON_MC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "qcka/channel.h"
#include "qcka/core.h"

namespace qcka::validation {

struct EventTally {
  std::int64_t trials = 0;
  std::int64_t clicks = 0;  // effective events
  std::int64_t errors = 0;  // effective events on the wrong detector
};

struct ChannelSample {
  PairTable<EventTally> z;  // errors unused
  PairTable<EventTally> x;  // errors against the nominal detector
  // Phase-matched subset of the (nu_a, nu_b) X rounds; trials counts every
  // such round, accepted or not.
  EventTally pm;
  EventTally z_all;  // both senders in the Z basis
};

// Runs `trials_per_category` rounds for each of the nine intensity pairs and
// for the all-Z category. Deterministic in `seed`.
absl::StatusOr<ChannelSample> SimulatePhotons(const SourceParams& src,
                                              const ChannelParams& ch,
                                              std::int64_t trials_per_category,
                                              std::uint64_t seed);

struct Comparison {
  std::string quantity;
  double analytic = 0.0;
  double simulated = 0.0;
  double std_error = 0.0;
  // Normal-equivalent score of the exact two-sided binomial test; +inf when
  // the analytic value is impossible.
  double z_score = 0.0;
};

// Every gain and error rate of `expected` against the simulated frequencies,
// with the analytic value as the null hypothesis. Error-rate comparisons are
// skipped when no effective event was simulated.
std::vector<Comparison> CompareWithSimulation(const ExpectedYields& expected,
                                              const ChannelSample& sample);

}  // namespace qcka::validation

#endif  // QCKA_VALIDATION_PHOTON_MC_H_
