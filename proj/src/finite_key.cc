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

#include "qcka/finite_key.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "qcka/status_macros.h"

namespace qcka {
namespace {

using enum Intensity;

absl::StatusOr<double> Rate(double count, double rounds, const char* what) {
  if (!(rounds > 0.0)) {
    return absl::FailedPreconditionError(
        absl::StrFormat("no announced rounds for %s", what));
  }
  return count / rounds;
}

struct DecoyRates {
  double decoy_low;
  double signal_up;
  double vacuum_up;
};

// mu^2/(mu nu - nu^2) [e^nu r_nu - nu^2/mu^2 e^mu r_mu - (mu^2-nu^2)/mu^2 r_0];
// the prefactor applied by the caller differs per estimator.
absl::StatusOr<double> DecoyBracket(double mu, double nu, const DecoyRates& r) {
  const double denom = mu * nu - nu * nu;
  if (!(denom > 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "degenerate decoy intensities (mu=%g, nu=%g)", mu, nu));
  }
  const double ratio = (nu * nu) / (mu * mu);
  return (std::exp(nu) * r.decoy_low - ratio * std::exp(mu) * r.signal_up -
          (1.0 - ratio) * r.vacuum_up) /
         denom;
}

// Variant-bounded per-round click rates for one sender's decoy triple.
absl::StatusOr<DecoyRates> SideRates(const PairTable<double>& clicks,
                                     const PairTable<double>& announced,
                                     Side side, double vacuum_up_rate,
                                     double eps, BoundUseCounter& bounds) {
  auto pair = [side](Intensity k) {
    return side == Side::kAlice ? std::pair{k, kVacuum}
                                : std::pair{kVacuum, k};
  };
  const auto [da, db] = pair(kDecoy);
  const auto [sa, sb] = pair(kSignal);
  DecoyRates r;
  QCKA_ASSIGN_OR_RETURN(const double decoy_low,
                        bounds.VariantLower(clicks(da, db), eps));
  QCKA_ASSIGN_OR_RETURN(r.decoy_low,
                        Rate(decoy_low, announced(da, db), "decoy pair"));
  QCKA_ASSIGN_OR_RETURN(const double signal_up,
                        bounds.VariantUpper(clicks(sa, sb), eps));
  QCKA_ASSIGN_OR_RETURN(r.signal_up,
                        Rate(signal_up, announced(sa, sb), "signal pair"));
  r.vacuum_up = vacuum_up_rate;
  return r;
}

struct SingleSided {
  double alice;
  double bob;
};

// Floored decoy brackets for both senders from one click table.
absl::StatusOr<SingleSided> DecoyBrackets(const PairTable<double>& clicks,
                                          const ObservedCounts& counts,
                                          const SourceParams& src, double eps,
                                          BoundUseCounter& bounds) {
  QCKA_ASSIGN_OR_RETURN(const double vac_up,
                        bounds.VariantUpper(clicks(kVacuum, kVacuum), eps));
  QCKA_ASSIGN_OR_RETURN(
      const double vac_rate,
      Rate(vac_up, counts.announced(kVacuum, kVacuum), "vacuum pair"));
  QCKA_ASSIGN_OR_RETURN(const DecoyRates ra,
                        SideRates(clicks, counts.announced, Side::kAlice,
                                  vac_rate, eps, bounds));
  QCKA_ASSIGN_OR_RETURN(const DecoyRates rb,
                        SideRates(clicks, counts.announced, Side::kBob,
                                  vac_rate, eps, bounds));
  QCKA_ASSIGN_OR_RETURN(const double alice,
                        DecoyBracket(src.mu_a, src.nu_a, ra));
  QCKA_ASSIGN_OR_RETURN(const double bob, DecoyBracket(src.mu_b, src.nu_b, rb));
  return SingleSided{alice, bob};
}

}  // namespace

absl::StatusOr<VacuumEstimate> EstimateVacuumZ(const ObservedCounts& counts,
                                               const SourceParams& src,
                                               const SecurityParams& sec,
                                               BoundUseCounter& bounds) {
  const double eps = BoundBudget::PerTerm(sec.eps_sec);
  const double n00 = counts.announced(kVacuum, kVacuum);
  if (!(n00 > 0.0)) {
    return absl::FailedPreconditionError("N_00 is zero");
  }
  QCKA_ASSIGN_OR_RETURN(const double clicks_low,
                        bounds.VariantLower(counts.z_clicks(kVacuum, kVacuum),
                                            eps));
  const double weight = src.t_a * (1.0 - src.t_b) * std::exp(-src.mu_a) +
                        src.t_b * (1.0 - src.t_a) * std::exp(-src.mu_b);
  VacuumEstimate out;
  out.expected_low =
      src.p_za * src.p_zb * weight * sec.total_rounds * clicks_low / n00;
  QCKA_ASSIGN_OR_RETURN(out.observed_low,
                        bounds.ChernoffLower(out.expected_low, eps));
  return out;
}

absl::StatusOr<SinglePhotonEstimate> EstimateSingleZ(
    const ObservedCounts& counts, const SourceParams& src,
    const SecurityParams& sec, BoundUseCounter& bounds) {
  const double eps = BoundBudget::PerTerm(sec.eps_sec);
  QCKA_ASSIGN_OR_RETURN(
      const SingleSided bracket,
      DecoyBrackets(counts.z_clicks, counts, src, eps, bounds));
  const double both_z = src.p_za * src.p_zb * sec.total_rounds;
  SinglePhotonEstimate out;
  out.s10_expected_low =
      std::max(0.0, src.t_a * (1.0 - src.t_b) * src.mu_a * src.mu_a *
                        std::exp(-src.mu_a) * both_z * bracket.alice);
  out.s01_expected_low =
      std::max(0.0, src.t_b * (1.0 - src.t_a) * src.mu_b * src.mu_b *
                        std::exp(-src.mu_b) * both_z * bracket.bob);
  out.expected_low = out.s10_expected_low + out.s01_expected_low;
  QCKA_ASSIGN_OR_RETURN(out.observed_low,
                        bounds.ChernoffLower(out.expected_low, eps));
  return out;
}

absl::StatusOr<SinglePhotonEstimate> EstimateSinglePhaseMatched(
    const ObservedCounts& counts, const SourceParams& src,
    const SecurityParams& sec, BoundUseCounter& bounds) {
  const double eps = BoundBudget::PerTerm(sec.eps_sec);
  QCKA_ASSIGN_OR_RETURN(
      const SingleSided bracket,
      DecoyBrackets(counts.x_clicks, counts, src, eps, bounds));
  const double matched = (1.0 - src.p_za) * (1.0 - src.p_zb) * src.p_nua *
                         src.p_nub * PhaseMatchingProbability(src.delta) *
                         std::exp(-(src.nu_a + src.nu_b)) * sec.total_rounds;
  SinglePhotonEstimate out;
  out.s10_expected_low =
      std::max(0.0, matched * src.mu_a * src.nu_a * bracket.alice);
  out.s01_expected_low =
      std::max(0.0, matched * src.mu_b * src.nu_b * bracket.bob);
  out.expected_low = out.s10_expected_low + out.s01_expected_low;
  QCKA_ASSIGN_OR_RETURN(out.observed_low,
                        bounds.ChernoffLower(out.expected_low, eps));
  return out;
}

absl::StatusOr<VacuumErrorEstimate> EstimateSinglePhotonErrors(
    const ObservedCounts& counts, const SourceParams& src,
    const SecurityParams& sec, BoundUseCounter& bounds) {
  const double eps = BoundBudget::PerTerm(sec.eps_sec);
  const double n00 = counts.announced(kVacuum, kVacuum);
  if (!(n00 > 0.0)) {
    return absl::FailedPreconditionError("N_00 is zero");
  }
  QCKA_ASSIGN_OR_RETURN(const double clicks_low,
                        bounds.VariantLower(counts.x_clicks(kVacuum, kVacuum),
                                            eps));
  VacuumErrorEstimate out;
  out.t0_expected_low = (1.0 - src.p_za) * (1.0 - src.p_zb) * src.p_nua *
                        src.p_nub * PhaseMatchingProbability(src.delta) *
                        std::exp(-(src.nu_a + src.nu_b)) * sec.total_rounds *
                        clicks_low / (2.0 * n00);
  QCKA_ASSIGN_OR_RETURN(out.t0_observed_low,
                        bounds.ChernoffLower(out.t0_expected_low, eps));
  out.t1_observed_up = std::max(0.0, counts.pm_errors - out.t0_observed_low);
  return out;
}

absl::StatusOr<double> PhaseErrorRateBound(double s1z_low, double s1pm_low,
                                           double t1pm_up,
                                           const SecurityParams& sec,
                                           BoundUseCounter& bounds) {
  const double eps = BoundBudget::PerTerm(sec.eps_sec);
  const double lambda = s1pm_low > 0.0 ? t1pm_up / s1pm_low : 0.0;
  const double clamped = std::clamp(lambda, 0.0, 0.5);
  absl::StatusOr<double> gamma =
      bounds.Sampling(s1z_low, s1pm_low, clamped, eps);
  if (!(s1pm_low >= 1.0) || !(s1z_low >= 1.0)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "phase error rate undefined (s1z=%g, s1pm=%g)", s1z_low, s1pm_low));
  }
  if (lambda >= 0.5) return 0.5;
  if (!gamma.ok()) return gamma.status();
  return std::clamp(lambda + *gamma, 0.0, 0.5);
}

absl::StatusOr<FiniteKeyResult> KeyLength(const ObservedCounts& counts,
                                          const SourceParams& src,
                                          const SecurityParams& sec,
                                          double ec_efficiency) {
  QCKA_RETURN_IF_ERROR(ValidateSourceParams(src));
  QCKA_RETURN_IF_ERROR(ValidateSecurityParams(sec));
  QCKA_RETURN_IF_ERROR(ValidateObservedCounts(counts));

  BoundUseCounter bounds;
  FiniteKeyResult r;
  r.p_pm = PhaseMatchingProbability(src.delta);
  QCKA_ASSIGN_OR_RETURN(r.s0z, EstimateVacuumZ(counts, src, sec, bounds));
  QCKA_ASSIGN_OR_RETURN(r.s1z, EstimateSingleZ(counts, src, sec, bounds));
  QCKA_ASSIGN_OR_RETURN(r.s1pm,
                        EstimateSinglePhaseMatched(counts, src, sec, bounds));
  QCKA_ASSIGN_OR_RETURN(r.t_pm,
                        EstimateSinglePhotonErrors(counts, src, sec, bounds));
  absl::StatusOr<double> e1 =
      PhaseErrorRateBound(r.s1z.observed_low, r.s1pm.observed_low,
                          r.t_pm.t1_observed_up, sec, bounds);
  if (e1.ok()) {
    r.e1ph_up = *e1;
  } else if (absl::IsFailedPrecondition(e1.status())) {
    r.phase_bound_defined = false;
    r.e1ph_up = 0.5;
  } else {
    return e1.status();
  }

  r.variant_uses = bounds.variant_uses();
  r.chernoff_uses = bounds.chernoff_uses();
  r.sampling_uses = bounds.sampling_uses();
  QCKA_RETURN_IF_ERROR(bounds.Audit());

  r.lambda_ec =
      counts.z_block * ec_efficiency * BinaryEntropyClamped(counts.z_error_rate);
  const double single_term =
      r.phase_bound_defined
          ? r.s1z.observed_low * (1.0 - BinaryEntropyClamped(r.e1ph_up))
          : 0.0;
  r.key_length_raw = r.s0z.observed_low + single_term - r.lambda_ec -
                     std::log2(4.0 / sec.eps_cor) -
                     6.0 * std::log2(BoundBudget::kTotalTerms / sec.eps_sec);
  r.key_length = std::max(0.0, r.key_length_raw);
  return r;
}

absl::StatusOr<FiniteKeyResult> ExpectedKeyLength(const SourceParams& src,
                                                  const ChannelParams& ch,
                                                  const SecurityParams& sec) {
  QCKA_RETURN_IF_ERROR(ValidateChannelParams(ch));
  return KeyLength(ExpectedCounts(src, ch, sec), src, sec, ch.ec_efficiency);
}

}  // namespace qcka
