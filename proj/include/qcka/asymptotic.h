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

#ifndef QCKA_ASYMPTOTIC_H_
#define QCKA_ASYMPTOTIC_H_

#include "absl/status/statusor.h"
#include "qcka/channel.h"
#include "qcka/core.h"

namespace qcka {

// Decoy-state yield estimates for one measurement basis.
struct DecoyYields {
  double y0 = 0.0;   // vacuum yield, equal to the (0, 0) gain
  double y10 = 0.0;  // Alice single photon, Bob vacuum; floored at 0
  double y01 = 0.0;
  double y1 = 0.0;   // joint single-photon yield lower bound
  // Unfloored three-intensity estimates, kept for diagnostics.
  double y10_raw = 0.0;
  double y01_raw = 0.0;
};

// Three-intensity decoy bounds on the single-photon yields of basis `basis`.
// Fails when mu nu - nu^2 <= 0 on either side.
absl::StatusOr<DecoyYields> YieldBounds(const ExpectedYields& yields,
                                        const SourceParams& src, Basis basis);

struct PhaseErrorEstimate {
  double value = 0.5;  // clamped to [0, 1/2]
  double raw = 0.5;
};

// Upper bound on the single-photon phase error rate from the phase-matched
// decoy-pair statistics. The phase-matched gain in `yields` is per announced
// round, so it is divided by the acceptance probability before use.
// Fails with FailedPrecondition when the X single-photon yield bound is 0.
absl::StatusOr<PhaseErrorEstimate> PhaseErrorBound(
    const ExpectedYields& yields, const SourceParams& src);

struct AsymptoticResult {
  double rate = 0.0;      // max(0, rate_raw), key bits per round
  double rate_raw = 0.0;
  DecoyYields z;
  DecoyYields x;
  double e1ph = 0.5;
  double e1ph_raw = 0.5;
  bool phase_bound_defined = true;
  double q_z = 0.0;       // gain of all-Z rounds
  double e_z = 0.0;       // error rate of all-Z rounds
  double xi_ec = 0.0;     // Q^z f h(E^z)
  // Key events per round from vacuum and joint single-photon states.
  double vacuum_rate = 0.0;
  double single_rate = 0.0;
};

// Infinite-key rate in the limit where both senders almost always pick Z.
absl::StatusOr<AsymptoticResult> AsymptoticRateFromYields(
    const SourceParams& src, double ec_efficiency,
    const ExpectedYields& yields);

absl::StatusOr<AsymptoticResult> AsymptoticRate(const SourceParams& src,
                                                const ChannelParams& ch);

}  // namespace qcka

#endif  // QCKA_ASYMPTOTIC_H_
