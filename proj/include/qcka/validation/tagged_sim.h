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

// Finite-size data sets in which every event carries its true photon number.
// Counts are drawn cell by cell (sender choices, photon-number class,
// detector outcome) with probabilities from the Fock oracle, so the ground
// truth for each finite-key estimator is known exactly.

#ifndef QCKA_VALIDATION_TAGGED_SIM_H_
#define QCKA_VALIDATION_TAGGED_SIM_H_

#include <array>
#include <cstdint>

#include "absl/status/statusor.h"
#include "qcka/channel.h"
#include "qcka/core.h"
#include "qcka/validation/fock_oracle.h"

namespace qcka::validation {

struct TaggedCounts {
  ObservedCounts counts;
  // Effective all-Z events from rounds where exactly one party sent, split by
  // the sender's photon number.
  double s0z = 0.0;
  double s1z = 0.0;
  // Phase-matched decoy-pair events carrying exactly one photon, and how many
  // of them were bit errors.
  double s1pm = 0.0;
  double t1pm = 0.0;
  // Phase errors carried by the s1z events. Each is drawn with the
  // single-photon phase-matched error probability, the population the
  // sampling argument refers to.
  double phase_errors_z = 0.0;
};

// Detection probabilities of one configuration, computed once so repeated
// draws are cheap.
class TaggedModel {
 public:
  static absl::StatusOr<TaggedModel> Create(const SourceParams& src,
                                            const ChannelParams& ch);

  absl::StatusOr<TaggedCounts> Sample(const SecurityParams& sec,
                                      std::uint64_t seed) const;

 private:
  struct Classes {
    std::array<double, 2> pmf{};  // photon numbers 0 and 1; the rest is >= 2
    std::array<Outcome, 3> outcome{};
  };

  TaggedModel() = default;

  SourceParams src_;
  std::array<double, 25> cell_p_{};
  PairTable<double> z_gain_;
  PairTable<double> x_gain_;
  double z_both_ = 0.0;     // both senders emit
  double z_neither_ = 0.0;  // neither emits
  std::array<Classes, 2> z_single_{};  // indexed by sender
  Classes pm_;
  double rejected_gain_ = 0.0;
  double e1_pm_ = 0.0;
};

absl::StatusOr<TaggedCounts> SampleTaggedCounts(const SourceParams& src,
                                                const ChannelParams& ch,
                                                const SecurityParams& sec,
                                                std::uint64_t seed);

}  // namespace qcka::validation

#endif  // QCKA_VALIDATION_TAGGED_SIM_H_
