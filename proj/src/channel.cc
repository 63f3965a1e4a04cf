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

#include "qcka/channel.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

namespace qcka {
namespace {

using Quadrature = boost::math::quadrature::gauss<double, 40>;

// Click probability of a threshold detector receiving a Poissonian mean
// photon number `mean`: 1 - (1 - p_d) e^{-mean}.
double ClickProbability(double log_no_dark, double mean) {
  return -std::expm1(log_no_dark - mean);
}

double NoClickProbability(double log_no_dark, double mean) {
  return std::exp(log_no_dark - mean);
}

double ExactlyOneClick(double log_no_dark, double mean_1, double mean_2) {
  const double c1 = ClickProbability(log_no_dark, mean_1);
  const double c2 = ClickProbability(log_no_dark, mean_2);
  return c1 * NoClickProbability(log_no_dark, mean_2) +
         c2 * NoClickProbability(log_no_dark, mean_1);
}

// I0(x) - 1 by its power series; x stays O(1) for physical intensities.
double BesselI0Minus1(double x) {
  const double q = x * x / 4.0;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

struct InterferenceArms {
  double half_sum;  // (mu'_A + mu'_B) / 2
  double cross;     // sqrt(mu'_A mu'_B)
};

InterferenceArms XArms(const SourceParams& src, const ChannelParams& ch,
                       Intensity k_a, Intensity k_b) {
  const double split = 1.0 - src.q_z;
  const double in_a =
      src.IntensityOf(Side::kAlice, k_a) * ArmTransmittance(ch, Side::kAlice) *
      split;
  const double in_b =
      src.IntensityOf(Side::kBob, k_b) * ArmTransmittance(ch, Side::kBob) *
      split;
  return {(in_a + in_b) / 2.0, std::sqrt(in_a * in_b)};
}

// D3 receives half_sum + cross cos(theta); D4 the complement.
double D3Only(double log_no_dark, const InterferenceArms& arms, double theta) {
  const double m3 = arms.half_sum + arms.cross * std::cos(theta);
  const double m4 = std::max(0.0, 2.0 * arms.half_sum - m3);
  return ClickProbability(log_no_dark, m3) * NoClickProbability(log_no_dark, m4);
}

double D4Only(double log_no_dark, const InterferenceArms& arms, double theta) {
  return D3Only(log_no_dark, arms, theta + std::numbers::pi);
}

}  // namespace

double ArmTransmittance(const ChannelParams& ch, Side side) {
  const double length =
      side == Side::kAlice ? ch.length_a_km : ch.length_b_km;
  return ch.detector_efficiency *
         std::pow(10.0, -ch.attenuation_db_per_km * length / 10.0);
}

double PhaseMatchingProbability(double delta) {
  return 2.0 * delta / std::numbers::pi;
}

double ZPairGain(const SourceParams& src, const ChannelParams& ch,
                 Intensity k_a, Intensity k_b) {
  const double log_no_dark = std::log1p(-ch.dark_count_prob);
  const double mean_1 = src.IntensityOf(Side::kAlice, k_a) *
                        ArmTransmittance(ch, Side::kAlice) * src.q_z;
  const double mean_2 = src.IntensityOf(Side::kBob, k_b) *
                        ArmTransmittance(ch, Side::kBob) * src.q_z;
  return ExactlyOneClick(log_no_dark, mean_1, mean_2);
}

GainError ExpectedZGainError(const SourceParams& src, const ChannelParams& ch) {
  const double log_no_dark = std::log1p(-ch.dark_count_prob);
  const double sent_1 =
      src.mu_a * ArmTransmittance(ch, Side::kAlice) * src.q_z;
  const double sent_2 = src.mu_b * ArmTransmittance(ch, Side::kBob) * src.q_z;

  auto d1_only = [&](double m1, double m2) {
    return ClickProbability(log_no_dark, m1) * NoClickProbability(log_no_dark, m2);
  };

  // (Alice sends, Bob silent): bits 1,1; D1 alone is correct.
  const double w10 = src.t_a * (1.0 - src.t_b);
  const double correct_10 = d1_only(sent_1, 0.0);
  const double wrong_10 = d1_only(0.0, sent_1);
  // (Alice silent, Bob sends): bits 0,0; D2 alone is correct.
  const double w01 = (1.0 - src.t_a) * src.t_b;
  const double correct_01 = d1_only(sent_2, 0.0);
  const double wrong_01 = d1_only(0.0, sent_2);
  // Both or neither sending: sender bits disagree, every event is an error.
  const double w11 = src.t_a * src.t_b;
  const double w00 = (1.0 - src.t_a) * (1.0 - src.t_b);
  const double any_11 = ExactlyOneClick(log_no_dark, sent_1, sent_2);
  const double any_00 = ExactlyOneClick(log_no_dark, 0.0, 0.0);

  const double errors =
      w10 * wrong_10 + w01 * wrong_01 + w11 * any_11 + w00 * any_00;
  const double gain = w10 * correct_10 + w01 * correct_01 + errors;
  GainError out;
  out.gain = gain;
  out.error_rate = gain > 0.0 ? errors / gain : 0.0;
  return out;
}

GainError ExpectedXGainError(const SourceParams& src, const ChannelParams& ch,
                             Intensity k_a, Intensity k_b,
                             bool phase_matched) {
  const double log_no_dark = std::log1p(-ch.dark_count_prob);
  const InterferenceArms arms = XArms(src, ch, k_a, k_b);
  const double offset = ch.phase_offset;

  // The r = 1 slice is the r = 0 slice shifted by pi with the bit mapping
  // inverted, so both slices contribute identically; the same holds for the
  // two halves of the circle in the unmatched case.
  const double half_width =
      phase_matched ? src.delta : std::numbers::pi / 2.0;
  const double wrong_raw =
      Quadrature::integrate(
          [&](double u) { return D4Only(log_no_dark, arms, u - offset); },
          -half_width, half_width) /
      std::numbers::pi;

  double gain = 0.0;
  if (phase_matched) {
    gain = Quadrature::integrate(
               [&](double u) {
                 return D3Only(log_no_dark, arms, u - offset) +
                        D4Only(log_no_dark, arms, u - offset);
               },
               -half_width, half_width) /
           std::numbers::pi;
  } else {
    // Uniform phase: <e^{c cos theta}> = I0(c), hence
    // Q = 2 (1-p_d) e^{-2s} [e^s I0(c) - (1-p_d)].
    const double s = arms.half_sum;
    const double no_dark = std::exp(log_no_dark);
    const double bracket = std::expm1(s) * (1.0 + BesselI0Minus1(arms.cross)) +
                           BesselI0Minus1(arms.cross) + ch.dark_count_prob;
    gain = 2.0 * no_dark * std::exp(-2.0 * s) * bracket;
  }

  const double e = ch.misalignment_x;
  const double error_count = (1.0 - e) * wrong_raw + e * (gain - wrong_raw);
  GainError out;
  out.gain = gain;
  out.error_rate = gain > 0.0 ? std::clamp(error_count / gain, 0.0, 1.0) : 0.0;
  return out;
}

ExpectedYields ComputeExpectedYields(const SourceParams& src,
                                     const ChannelParams& ch) {
  ExpectedYields y;
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      y.z_gain(a, b) = ZPairGain(src, ch, a, b);
      const GainError x = ExpectedXGainError(src, ch, a, b, false);
      y.x_gain(a, b) = x.gain;
      y.x_error(a, b) = x.error_rate;
    }
  }
  const GainError pm = ExpectedXGainError(src, ch, Intensity::kDecoy,
                                          Intensity::kDecoy, true);
  y.pm_gain = pm.gain;
  y.pm_error = pm.error_rate;
  const GainError z = ExpectedZGainError(src, ch);
  y.z_all_gain = z.gain;
  y.z_all_error = z.error_rate;
  return y;
}

PairTable<double> AnnouncedTotals(const SourceParams& src,
                                  const SecurityParams& sec) {
  auto z_announce = [&](Side side, Intensity k) {
    const double t = side == Side::kAlice ? src.t_a : src.t_b;
    switch (k) {
      case Intensity::kSignal:
        return t;
      case Intensity::kVacuum:
        return 1.0 - t;
      case Intensity::kDecoy:
        return 0.0;
    }
    return 0.0;
  };
  const double xa = 1.0 - src.p_za;
  const double xb = 1.0 - src.p_zb;
  PairTable<double> out;
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      const double pa = src.XIntensityProbability(Side::kAlice, a);
      const double pb = src.XIntensityProbability(Side::kBob, b);
      const double prob = xa * xb * pa * pb +
                          xa * pa * src.p_zb * z_announce(Side::kBob, b) +
                          src.p_za * z_announce(Side::kAlice, a) * xb * pb;
      out(a, b) = prob * sec.total_rounds;
    }
  }
  return out;
}

double AllZRounds(const SourceParams& src, const SecurityParams& sec) {
  return src.p_za * src.p_zb * sec.total_rounds;
}

ObservedCounts ExpectedCounts(const SourceParams& src, const ChannelParams& ch,
                              const SecurityParams& sec) {
  const ExpectedYields y = ComputeExpectedYields(src, ch);
  ObservedCounts c;
  c.announced = AnnouncedTotals(src, sec);
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      c.z_clicks(a, b) = c.announced(a, b) * y.z_gain(a, b);
      c.x_clicks(a, b) = c.announced(a, b) * y.x_gain(a, b);
    }
  }
  c.z_block = AllZRounds(src, sec) * y.z_all_gain;
  c.z_error_rate = y.z_all_error;
  c.pm_clicks = c.announced(Intensity::kDecoy, Intensity::kDecoy) * y.pm_gain;
  c.pm_errors = c.pm_clicks * y.pm_error;
  return c;
}

absl::Status ValidateObservedCounts(const ObservedCounts& counts) {
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      const double n = counts.announced(a, b);
      if (!(n >= 0.0) || !(counts.z_clicks(a, b) >= 0.0) ||
          !(counts.x_clicks(a, b) >= 0.0)) {
        return absl::InvalidArgumentError("counts must be non-negative");
      }
      if (counts.z_clicks(a, b) > n || counts.x_clicks(a, b) > n) {
        return absl::InvalidArgumentError(
            "effective events exceed announced rounds for a pair");
      }
    }
  }
  if (!(counts.z_block >= 0.0) || !(counts.pm_clicks >= 0.0) ||
      !(counts.pm_errors >= 0.0)) {
    return absl::InvalidArgumentError("counts must be non-negative");
  }
  if (counts.pm_errors > counts.pm_clicks) {
    return absl::InvalidArgumentError(
        "phase-matched errors exceed phase-matched events");
  }
  if (!(counts.z_error_rate >= 0.0 && counts.z_error_rate <= 1.0)) {
    return absl::InvalidArgumentError("Z error rate outside [0, 1]");
  }
  return absl::OkStatus();
}

}  // namespace qcka
