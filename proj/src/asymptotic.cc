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

#include "qcka/asymptotic.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace qcka {
namespace {

// mu/(mu nu - nu^2) [e^nu Q_nu - nu^2/mu^2 e^mu Q_mu - (mu^2-nu^2)/mu^2 Q_0]
absl::StatusOr<double> SingleSidedYield(double mu, double nu, double q_decoy,
                                        double q_signal, double q_vacuum) {
  const double denom = mu * nu - nu * nu;
  if (!(denom > 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "degenerate decoy intensities (mu=%g, nu=%g)", mu, nu));
  }
  const double ratio = (nu * nu) / (mu * mu);
  return mu / denom *
         (std::exp(nu) * q_decoy - ratio * std::exp(mu) * q_signal -
          (1.0 - ratio) * q_vacuum);
}

}  // namespace

absl::StatusOr<DecoyYields> YieldBounds(const ExpectedYields& yields,
                                        const SourceParams& src, Basis basis) {
  const PairTable<double>& q = basis == Basis::kZ ? yields.z_gain : yields.x_gain;
  using enum Intensity;
  DecoyYields out;
  out.y0 = q(kVacuum, kVacuum);
  absl::StatusOr<double> y10 =
      SingleSidedYield(src.mu_a, src.nu_a, q(kDecoy, kVacuum),
                       q(kSignal, kVacuum), q(kVacuum, kVacuum));
  if (!y10.ok()) return y10.status();
  absl::StatusOr<double> y01 =
      SingleSidedYield(src.mu_b, src.nu_b, q(kVacuum, kDecoy),
                       q(kVacuum, kSignal), q(kVacuum, kVacuum));
  if (!y01.ok()) return y01.status();
  out.y10_raw = *y10;
  out.y01_raw = *y01;
  out.y10 = std::max(0.0, *y10);
  out.y01 = std::max(0.0, *y01);
  out.y1 = (src.nu_a * out.y10 + src.nu_b * out.y01) / (src.nu_a + src.nu_b);
  return out;
}

absl::StatusOr<PhaseErrorEstimate> PhaseErrorBound(
    const ExpectedYields& yields, const SourceParams& src) {
  absl::StatusOr<DecoyYields> x = YieldBounds(yields, src, Basis::kX);
  if (!x.ok()) return x.status();
  if (!(x->y1 > 0.0)) {
    return absl::FailedPreconditionError(
        "X-basis single-photon yield bound is zero; phase error undefined");
  }
  const double accept = PhaseMatchingProbability(src.delta);
  const double nu_sum = src.nu_a + src.nu_b;
  const double matched_errors = yields.pm_error * yields.pm_gain / accept;
  PhaseErrorEstimate out;
  out.raw = (std::exp(nu_sum) * matched_errors - x->y0 / 2.0) / (nu_sum * x->y1);
  out.value = std::clamp(out.raw, 0.0, 0.5);
  return out;
}

absl::StatusOr<AsymptoticResult> AsymptoticRateFromYields(
    const SourceParams& src, double ec_efficiency,
    const ExpectedYields& yields) {
  AsymptoticResult r;
  absl::StatusOr<DecoyYields> z = YieldBounds(yields, src, Basis::kZ);
  if (!z.ok()) return z.status();
  absl::StatusOr<DecoyYields> x = YieldBounds(yields, src, Basis::kX);
  if (!x.ok()) return x.status();
  r.z = *z;
  r.x = *x;

  absl::StatusOr<PhaseErrorEstimate> e1 = PhaseErrorBound(yields, src);
  if (e1.ok()) {
    r.e1ph = e1->value;
    r.e1ph_raw = e1->raw;
  } else if (absl::IsFailedPrecondition(e1.status())) {
    r.phase_bound_defined = false;
  } else {
    return e1.status();
  }

  const double va = src.t_a * (1.0 - src.t_b) * std::exp(-src.mu_a);
  const double vb = src.t_b * (1.0 - src.t_a) * std::exp(-src.mu_b);
  const double vacuum_weight = va + vb;
  const double single_weight = va * src.mu_a + vb * src.mu_b;

  r.q_z = yields.z_all_gain;
  r.e_z = yields.z_all_error;
  r.xi_ec = r.q_z * ec_efficiency * BinaryEntropyClamped(r.e_z);
  r.vacuum_rate = vacuum_weight * r.z.y0;
  r.single_rate = single_weight * r.z.y1;
  r.rate_raw = r.vacuum_rate +
               r.single_rate * (1.0 - BinaryEntropyClamped(r.e1ph)) - r.xi_ec;
  r.rate = std::max(0.0, r.rate_raw);
  return r;
}

absl::StatusOr<AsymptoticResult> AsymptoticRate(const SourceParams& src,
                                                const ChannelParams& ch) {
  if (absl::Status s = ValidateSourceParams(src); !s.ok()) return s;
  if (absl::Status s = ValidateChannelParams(ch); !s.ok()) return s;
  return AsymptoticRateFromYields(src, ch.ec_efficiency,
                                  ComputeExpectedYields(src, ch));
}

}  // namespace qcka
