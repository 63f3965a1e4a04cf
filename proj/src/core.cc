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

#include "qcka/core.h"

#include <cmath>
#include <numbers>

#include "absl/strings/str_format.h"

namespace qcka {
namespace {

bool OpenUnit(double p) { return p > 0.0 && p < 1.0; }

absl::Status RequireOpenUnit(const char* name, double p) {
  if (!OpenUnit(p)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must lie in (0, 1), got %g", name, p));
  }
  return absl::OkStatus();
}

}  // namespace

double SourceParams::IntensityOf(Side side, Intensity k) const {
  const bool alice = side == Side::kAlice;
  switch (k) {
    case Intensity::kSignal:
      return alice ? mu_a : mu_b;
    case Intensity::kDecoy:
      return alice ? nu_a : nu_b;
    case Intensity::kVacuum:
      return 0.0;
  }
  return 0.0;
}

double SourceParams::XIntensityProbability(Side side, Intensity k) const {
  const bool alice = side == Side::kAlice;
  switch (k) {
    case Intensity::kSignal:
      return alice ? p_mua() : p_mub();
    case Intensity::kDecoy:
      return alice ? p_nua : p_nub;
    case Intensity::kVacuum:
      return alice ? p_0a : p_0b;
  }
  return 0.0;
}

ChannelParams DefaultFiberChannel(double length_a_km, double length_b_km) {
  ChannelParams ch;
  ch.length_a_km = length_a_km;
  ch.length_b_km = length_b_km;
  return ch;
}

absl::Status ValidateSourceRanges(const SourceParams& src) {
  if (!(src.nu_a > 0.0 && src.nu_a < src.mu_a)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "decoy ordering 0 < nu_a < mu_a violated (nu_a=%g, mu_a=%g)",
        src.nu_a, src.mu_a));
  }
  if (!(src.nu_b > 0.0 && src.nu_b < src.mu_b)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "decoy ordering 0 < nu_b < mu_b violated (nu_b=%g, mu_b=%g)",
        src.nu_b, src.mu_b));
  }
  const struct {
    const char* name;
    double value;
  } probabilities[] = {
      {"t_a", src.t_a},     {"t_b", src.t_b},   {"p_za", src.p_za},
      {"p_zb", src.p_zb},   {"p_0a", src.p_0a}, {"p_0b", src.p_0b},
      {"p_nua", src.p_nua}, {"p_nub", src.p_nub}, {"q_z", src.q_z},
  };
  for (const auto& p : probabilities) {
    if (absl::Status s = RequireOpenUnit(p.name, p.value); !s.ok()) return s;
  }
  if (src.p_0a + src.p_nua > 1.0) {
    return absl::InvalidArgumentError("p_0a + p_nua exceeds 1");
  }
  if (src.p_0b + src.p_nub > 1.0) {
    return absl::InvalidArgumentError("p_0b + p_nub exceeds 1");
  }
  if (!(src.delta > 0.0 && src.delta <= std::numbers::pi / 2)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, pi/2], got %g", src.delta));
  }
  return absl::OkStatus();
}

double ConstraintResidual(const SourceParams& src) {
  const double implied = src.t_a * (1.0 - src.t_b) * src.mu_a *
                         std::exp(-src.mu_a) /
                         (src.t_b * (1.0 - src.t_a) * src.mu_b *
                          std::exp(-src.mu_b));
  const double ratio = src.nu_a / src.nu_b;
  return std::abs(ratio - implied) / ratio;
}

absl::Status ValidateSourceParams(const SourceParams& src) {
  if (absl::Status s = ValidateSourceRanges(src); !s.ok()) return s;
  const double residual = ConstraintResidual(src);
  if (!(residual <= kConstraintTolerance)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "intensity-ratio constraint violated (relative residual %g)",
        residual));
  }
  return absl::OkStatus();
}

absl::Status ValidateChannelParams(const ChannelParams& ch) {
  if (!(ch.length_a_km >= 0.0) || !(ch.length_b_km >= 0.0)) {
    return absl::InvalidArgumentError("fiber lengths must be non-negative");
  }
  if (!(ch.attenuation_db_per_km >= 0.0)) {
    return absl::InvalidArgumentError("attenuation must be non-negative");
  }
  if (!(ch.detector_efficiency > 0.0 && ch.detector_efficiency <= 1.0)) {
    return absl::InvalidArgumentError(
        "detector efficiency must lie in (0, 1]");
  }
  if (!(ch.dark_count_prob >= 0.0 && ch.dark_count_prob < 1.0)) {
    return absl::InvalidArgumentError("dark count probability must be in [0, 1)");
  }
  if (!(ch.misalignment_x >= 0.0 && ch.misalignment_x < 0.5)) {
    return absl::InvalidArgumentError("X misalignment must lie in [0, 0.5)");
  }
  if (!(ch.ec_efficiency >= 1.0)) {
    return absl::InvalidArgumentError("error-correction efficiency must be >= 1");
  }
  if (!std::isfinite(ch.phase_offset)) {
    return absl::InvalidArgumentError("phase offset must be finite");
  }
  return absl::OkStatus();
}

absl::Status ValidateSecurityParams(const SecurityParams& sec) {
  if (!(sec.total_rounds >= 1.0) || std::floor(sec.total_rounds) != sec.total_rounds) {
    return absl::InvalidArgumentError(
        absl::StrFormat("total rounds must be an integer >= 1, got %g",
                        sec.total_rounds));
  }
  if (!OpenUnit(sec.eps_sec) || !OpenUnit(sec.eps_cor)) {
    return absl::InvalidArgumentError("eps_sec and eps_cor must lie in (0, 1)");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> SolveBobSendingProbability(double mu_a, double mu_b,
                                                  double t_a, double nu_a,
                                                  double nu_b) {
  if (!(mu_a > 0.0) || !(mu_b > 0.0) || !(nu_a > 0.0) || !(nu_b > 0.0)) {
    return absl::InvalidArgumentError("intensities must be positive");
  }
  if (!OpenUnit(t_a)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("t_a must lie in (0, 1), got %g", t_a));
  }
  const double a = t_a * mu_a * std::exp(-mu_a);
  const double b = (1.0 - t_a) * mu_b * std::exp(-mu_b);
  const double k = nu_a / nu_b;
  return a / (a + k * b);
}

absl::StatusOr<SourceParams> WithConstrainedBobSending(SourceParams src) {
  absl::StatusOr<double> t_b =
      SolveBobSendingProbability(src.mu_a, src.mu_b, src.t_a, src.nu_a,
                                 src.nu_b);
  if (!t_b.ok()) return t_b.status();
  src.t_b = *t_b;
  return src;
}

absl::StatusOr<double> BinaryEntropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("binary entropy argument %g outside [0, 1]", x));
  }
  return BinaryEntropyClamped(x);
}

double BinaryEntropyClamped(double x) {
  if (!(x > 0.0) || !(x < 1.0)) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

absl::StatusOr<SingleExcitationPair> SingleExcitationStates(
    const SourceParams& src) {
  if (absl::Status s = ValidateSourceRanges(src); !s.ok()) return s;
  const double za = src.t_a * (1.0 - src.t_b) * src.mu_a * std::exp(-src.mu_a);
  const double zb = src.t_b * (1.0 - src.t_a) * src.mu_b * std::exp(-src.mu_b);
  const double norm_z = za + zb;
  const double norm_x = src.nu_a + src.nu_b;
  SingleExcitationPair out;
  out.z = {za / norm_z, zb / norm_z};
  out.x = {src.nu_a / norm_x, src.nu_b / norm_x};
  return out;
}

}  // namespace qcka
