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

// Photon-number-resolved receiver model used as ground truth in tests.
//
// Everything here is written in terms of per-photon detection probabilities:
// a Fock state of n photons in a single optical mode splits multinomially
// over the output ports of a lossy linear network, so threshold-detector
// outcomes follow from powers of the "no photon here" probabilities. The
// coherent-state formulas of the channel module are never called.

#ifndef QCKA_VALIDATION_FOCK_ORACLE_H_
#define QCKA_VALIDATION_FOCK_ORACLE_H_

#include "qcka/core.h"

namespace qcka::validation {

// Photon numbers above this are dropped from Poisson sums. For mean photon
// numbers of order one the neglected tail is far below double precision.
inline constexpr int kMaxPhotons = 60;

// Effective-event probabilities split by whether the event matches the
// expected bit.
struct Outcome {
  double correct = 0.0;
  double wrong = 0.0;

  double effective() const { return correct + wrong; }
};

// Z detectors with n_a photons entering Alice's arm and n_b Bob's. "Correct"
// means D1 fired alone.
Outcome ZFockOutcome(const SourceParams& src, const ChannelParams& ch,
                     int n_a, int n_b);

// X detectors with n photons in the mode formed by weights k_a, k_b on the
// two arms (intensities of a coherent pair, or any non-negative weights).
// The announced relative phase is uniform on [-half_width, half_width] and
// "correct" means D3 fired alone after misalignment. By symmetry this also
// covers the slice shifted by pi with the bit mapping inverted.
Outcome XFockOutcome(const SourceParams& src, const ChannelParams& ch,
                     double k_a, double k_b, int n, double half_width);

// Poisson mixture of XFockOutcome over n, optionally restricted to a range
// of photon numbers [n_min, n_max].
Outcome XPoissonOutcome(const SourceParams& src, const ChannelParams& ch,
                        double k_a, double k_b, double half_width, int n_min,
                        int n_max);

// Poisson mixture of ZFockOutcome over both photon numbers.
Outcome ZPoissonOutcome(const SourceParams& src, const ChannelParams& ch,
                        double k_a, double k_b);

// Z outcome when a single sender emits a coherent pulse of intensity k with
// photon number restricted to [n_min, n_max], averaged over that range.
// "Correct" means the sender's own detector (D1 for Alice, D2 for Bob)
// fired alone.
Outcome ZSingleSenderOutcome(const SourceParams& src, const ChannelParams& ch,
                             Side sender, double k, int n_min, int n_max);

// Poisson probability of n photons at mean k.
double PoissonPmf(double k, int n);

// Probability that Poisson(k) lies in [n_min, n_max].
double PoissonMass(double k, int n_min, int n_max);

struct SinglePhotonTruth {
  double y10_z = 0.0;
  double y01_z = 0.0;
  double y1_z = 0.0;  // weighted by the single-excitation state nu_a : nu_b
  double y10_x = 0.0;
  double y01_x = 0.0;
  double y1_x = 0.0;
  // Bit error rate of phase-matched events carrying exactly one photon in the
  // decoy-pair mode. This is the quantity the phase error bound must cover.
  double e1_pm = 0.0;
};

SinglePhotonTruth TrueSinglePhoton(const SourceParams& src,
                                   const ChannelParams& ch);

}  // namespace qcka::validation

#endif  // QCKA_VALIDATION_FOCK_ORACLE_H_
