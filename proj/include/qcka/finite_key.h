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

// Composable finite-key estimators. Expected ("starred") counts are bounded
// from observed counts with VariantExpectedBounds, then converted back to
// observed-count bounds with ChernoffObservedBounds. Every application runs
// at eps_sec / 26 and is tallied in a BoundUseCounter.
//
// Variant-bound allocation (12): for both the Z and the X click tables,
// lower bounds on (0,0), (nu_a,0), (0,nu_b) and upper bounds on (0,0),
// (mu_a,0), (0,mu_b). Chernoff conversions (4): s0^z, s1^z, s1^pm, t0^pm.
// Sampling correction (1): the phase error rate.

#ifndef QCKA_FINITE_KEY_H_
#define QCKA_FINITE_KEY_H_

#include "absl/status/statusor.h"
#include "qcka/channel.h"
#include "qcka/core.h"
#include "qcka/stat_bounds.h"

namespace qcka {

struct VacuumEstimate {
  double expected_low = 0.0;  // lower bound on s0^{z*}
  double observed_low = 0.0;  // lower bound on s0^z
};

struct SinglePhotonEstimate {
  double s10_expected_low = 0.0;
  double s01_expected_low = 0.0;
  double expected_low = 0.0;  // s10 + s01
  double observed_low = 0.0;
};

struct VacuumErrorEstimate {
  double t0_expected_low = 0.0;
  double t0_observed_low = 0.0;
  double t1_observed_up = 0.0;  // m^pm - t0, floored at 0
};

// Lower bound on vacuum events in the Z key block. Fails when N_00 = 0.
absl::StatusOr<VacuumEstimate> EstimateVacuumZ(const ObservedCounts& counts,
                                               const SourceParams& src,
                                               const SecurityParams& sec,
                                               BoundUseCounter& bounds);

// Lower bound on joint single-photon events in the Z key block.
absl::StatusOr<SinglePhotonEstimate> EstimateSingleZ(
    const ObservedCounts& counts, const SourceParams& src,
    const SecurityParams& sec, BoundUseCounter& bounds);

// Lower bound on joint single-photon events among phase-matched decoy-pair
// X events.
absl::StatusOr<SinglePhotonEstimate> EstimateSinglePhaseMatched(
    const ObservedCounts& counts, const SourceParams& src,
    const SecurityParams& sec, BoundUseCounter& bounds);

// Upper bound on bit errors carried by single-photon phase-matched events,
// using that vacuum events err with probability 1/2.
absl::StatusOr<VacuumErrorEstimate> EstimateSinglePhotonErrors(
    const ObservedCounts& counts, const SourceParams& src,
    const SecurityParams& sec, BoundUseCounter& bounds);

// Phase error rate bound t1/s1pm + gamma(s1z, s1pm, t1/s1pm, eps_sec/26),
// clamped to [0, 1/2]. Fails with FailedPrecondition when s1pm < 1 or
// s1z < 1 (the sampling correction is undefined).
absl::StatusOr<double> PhaseErrorRateBound(double s1z_low, double s1pm_low,
                                           double t1pm_up,
                                           const SecurityParams& sec,
                                           BoundUseCounter& bounds);

struct FiniteKeyResult {
  double key_length = 0.0;      // bits, floored at 0
  double key_length_raw = 0.0;  // before flooring
  VacuumEstimate s0z;
  SinglePhotonEstimate s1z;
  SinglePhotonEstimate s1pm;
  VacuumErrorEstimate t_pm;
  double e1ph_up = 0.5;
  bool phase_bound_defined = true;
  double lambda_ec = 0.0;  // n^z f h(E^z)
  double p_pm = 0.0;       // 2 delta / pi
  int variant_uses = 0;
  int chernoff_uses = 0;
  int sampling_uses = 0;
};

// Final key length
//   l = s0z + s1z [1 - h(e1ph)] - lambda_EC - log2(4/eps_cor)
//       - 6 log2(26/eps_sec),
// floored at 0. Fails with InternalError if the bound-use audit does not
// match BoundBudget.
absl::StatusOr<FiniteKeyResult> KeyLength(const ObservedCounts& counts,
                                          const SourceParams& src,
                                          const SecurityParams& sec,
                                          double ec_efficiency);

// KeyLength on the expected counts of the analytic channel model.
absl::StatusOr<FiniteKeyResult> ExpectedKeyLength(const SourceParams& src,
                                                  const ChannelParams& ch,
                                                  const SecurityParams& sec);

}  // namespace qcka

#endif  // QCKA_FINITE_KEY_H_
