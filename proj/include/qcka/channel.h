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

// Analytic model of the receiver: two arms split by a passive beam splitter
// into a Z path (one threshold detector per arm) and an X path (interference
// on a 50:50 splitter followed by two threshold detectors). Sources are
// phase-randomized weak coherent pulses, dark counts are independent per
// detector and X-basis misalignment flips the outcome.
//
// All gains are per announced round of the relevant intensity pair and count
// "effective" events, i.e. exactly one of the two detectors of a basis fired.

#ifndef QCKA_CHANNEL_H_
#define QCKA_CHANNEL_H_

#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "qcka/core.h"

namespace qcka {

enum class Basis { kZ, kX };

struct GainError {
  double gain = 0.0;
  double error_rate = 0.0;
};

struct ExpectedYields {
  PairTable<double> z_gain;
  PairTable<double> x_gain;
  // X error rates over the full phase circle; the correct detector is D3
  // whenever the announced relative phase has a non-negative cosine.
  PairTable<double> x_error;
  // Phase-matched decoy pair. The gain is normalized per announced
  // (nu_a, nu_b) round, so it already carries the acceptance probability.
  double pm_gain = 0.0;
  double pm_error = 0.0;
  // Rounds where both senders chose the Z basis.
  double z_all_gain = 0.0;
  double z_all_error = 0.0;
};

// Transmittance of one arm including detector efficiency.
double ArmTransmittance(const ChannelParams& ch, Side side);

// Probability that the announced relative phase falls inside one of the two
// accepted slices: 2 delta / pi.
double PhaseMatchingProbability(double delta);

// Gain of the Z detectors when Alice and Bob emit the given intensities.
double ZPairGain(const SourceParams& src, const ChannelParams& ch,
                 Intensity k_a, Intensity k_b);

// Gain and three-way-disagreement error rate of rounds where both senders
// chose the Z basis. Bit conventions: Alice sending is 1, Bob sending is 0,
// D1 alone is 1, D2 alone is 0; an event is correct only for 111 or 000.
GainError ExpectedZGainError(const SourceParams& src, const ChannelParams& ch);

// Gain and error rate of the X detectors for an intensity pair, either over
// the uniform phase circle or restricted to the phase-matched slices.
GainError ExpectedXGainError(const SourceParams& src, const ChannelParams& ch,
                             Intensity k_a, Intensity k_b, bool phase_matched);

ExpectedYields ComputeExpectedYields(const SourceParams& src,
                                     const ChannelParams& ch);

// Announced-event bookkeeping and measured data.
//
// Counts are held as doubles so the same record can carry either sampled
// integer counts or real-valued expectations.
struct ObservedCounts {
  PairTable<double> announced;  // N_{k_a k_b}
  PairTable<double> z_clicks;   // n^z_{k_a k_b}
  PairTable<double> x_clicks;   // n^x_{k_a k_b}
  double z_block = 0.0;         // effective all-Z rounds n^z
  double z_error_rate = 0.0;    // E^z over the all-Z block
  double pm_clicks = 0.0;       // n^pm
  double pm_errors = 0.0;       // m^pm

  bool operator==(const ObservedCounts&) const = default;
};

// Expected announced totals N_{k_a k_b}. A sender in the X basis announces
// its chosen intensity; a sender in the Z basis announces mu when it sent and
// vacuum otherwise. Rounds where both senders chose Z are never announced.
PairTable<double> AnnouncedTotals(const SourceParams& src,
                                  const SecurityParams& sec);

// Expected number of rounds in which both senders chose the Z basis.
double AllZRounds(const SourceParams& src, const SecurityParams& sec);

// Expected values of every observed count.
ObservedCounts ExpectedCounts(const SourceParams& src, const ChannelParams& ch,
                              const SecurityParams& sec);

absl::Status ValidateObservedCounts(const ObservedCounts& counts);

// Draws one finite-size data set. Deterministic in `seed`.
absl::StatusOr<ObservedCounts> SampleCounts(const SourceParams& src,
                                            const ChannelParams& ch,
                                            const SecurityParams& sec,
                                            std::uint64_t seed);

}  // namespace qcka

#endif  // QCKA_CHANNEL_H_
