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

#include "qcka/validation/fock_oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcka::validation {
namespace {

// Per-arm survival probability up to the detectors, written out directly
// rather than through the channel module.
double Survival(const ChannelParams& ch, double length_km) {
  return ch.detector_efficiency *
         std::pow(10.0, -ch.attenuation_db_per_km * length_km / 10.0);
}

// Probability that detector A fires alone when each of n photons lands on A
// with probability p_a and on B with p_b.
double OnlyFirstFires(double p_a, double p_b, int n, double dark) {
  const double quiet = 1.0 - dark;
  const double none_b = std::pow(1.0 - p_b, n);
  const double none_ab = std::pow(std::max(0.0, 1.0 - p_a - p_b), n);
  return quiet * (none_b - quiet * none_ab);
}

// Composite Simpson average of f over [-h, h].
template <typename F>
double WindowAverage(F f, double h) {
  constexpr int kPanels = 512;
  const double step = 2.0 * h / kPanels;
  double sum = f(-h) + f(h);
  for (int i = 1; i < kPanels; ++i) {
    sum += f(-h + i * step) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * step / 3.0 / (2.0 * h);
}

// Past the mode the Poisson tail is bounded by a geometric series, so once a
// term drops below this the rest cannot matter in double precision.
bool Negligible(double k, int n, double w) { return n > k + 1.0 && w < 1e-20; }

}  // namespace

double PoissonPmf(double k, int n) {
  if (k == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(k) - k - std::lgamma(n + 1.0));
}

double PoissonMass(double k, int n_min, int n_max) {
  double mass = 0.0;
  for (int n = n_min; n <= std::min(n_max, kMaxPhotons); ++n) {
    const double w = PoissonPmf(k, n);
    if (Negligible(k, n, w)) break;
    mass += w;
  }
  return mass;
}

Outcome ZFockOutcome(const SourceParams& src, const ChannelParams& ch,
                     int n_a, int n_b) {
  const double p_1 = Survival(ch, ch.length_a_km) * src.q_z;
  const double p_2 = Survival(ch, ch.length_b_km) * src.q_z;
  const double quiet = 1.0 - ch.dark_count_prob;
  const double silent_1 = quiet * std::pow(1.0 - p_1, n_a);
  const double silent_2 = quiet * std::pow(1.0 - p_2, n_b);
  return {(1.0 - silent_1) * silent_2, (1.0 - silent_2) * silent_1};
}

Outcome XFockOutcome(const SourceParams& src, const ChannelParams& ch,
                     double k_a, double k_b, int n, double half_width) {
  const double split = 1.0 - src.q_z;
  const double a = k_a * Survival(ch, ch.length_a_km) * split;
  const double b = k_b * Survival(ch, ch.length_b_km) * split;
  const double total = k_a + k_b;
  const double dark = ch.dark_count_prob;
  auto fires_alone = [&](double u, bool want_d3) {
    double p_3 = 0.0;
    double p_4 = 0.0;
    if (total > 0.0) {
      const double theta = u - ch.phase_offset;
      const double interference = 2.0 * std::sqrt(a * b) * std::cos(theta);
      p_3 = std::max(0.0, (a + b + interference) / (2.0 * total));
      p_4 = std::max(0.0, (a + b - interference) / (2.0 * total));
    }
    return want_d3 ? OnlyFirstFires(p_3, p_4, n, dark)
                   : OnlyFirstFires(p_4, p_3, n, dark);
  };
  const double d3 = WindowAverage(
      [&](double u) { return fires_alone(u, true); }, half_width);
  const double d4 = WindowAverage(
      [&](double u) { return fires_alone(u, false); }, half_width);
  const double e = ch.misalignment_x;
  return {(1.0 - e) * d3 + e * d4, (1.0 - e) * d4 + e * d3};
}

Outcome XPoissonOutcome(const SourceParams& src, const ChannelParams& ch,
                        double k_a, double k_b, double half_width, int n_min,
                        int n_max) {
  Outcome out;
  for (int n = n_min; n <= std::min(n_max, kMaxPhotons); ++n) {
    const double weight = PoissonPmf(k_a + k_b, n);
    if (Negligible(k_a + k_b, n, weight)) break;
    const Outcome o = XFockOutcome(src, ch, k_a, k_b, n, half_width);
    out.correct += weight * o.correct;
    out.wrong += weight * o.wrong;
  }
  return out;
}

Outcome ZPoissonOutcome(const SourceParams& src, const ChannelParams& ch,
                        double k_a, double k_b) {
  Outcome out;
  for (int n_a = 0; n_a <= kMaxPhotons; ++n_a) {
    const double w_a = PoissonPmf(k_a, n_a);
    if (Negligible(k_a, n_a, w_a)) break;
    for (int n_b = 0; n_b <= kMaxPhotons; ++n_b) {
      const double w_b = PoissonPmf(k_b, n_b);
      if (Negligible(k_b, n_b, w_b)) break;
      const double w = w_a * w_b;
      const Outcome o = ZFockOutcome(src, ch, n_a, n_b);
      out.correct += w * o.correct;
      out.wrong += w * o.wrong;
    }
  }
  return out;
}

Outcome ZSingleSenderOutcome(const SourceParams& src, const ChannelParams& ch,
                             Side sender, double k, int n_min, int n_max) {
  Outcome out;
  const double mass = PoissonMass(k, n_min, n_max);
  if (mass == 0.0) return out;
  for (int n = n_min; n <= std::min(n_max, kMaxPhotons); ++n) {
    const double pmf = PoissonPmf(k, n);
    if (Negligible(k, n, pmf)) break;
    const double w = pmf / mass;
    if (sender == Side::kAlice) {
      const Outcome o = ZFockOutcome(src, ch, n, 0);
      out.correct += w * o.correct;
      out.wrong += w * o.wrong;
    } else {
      // Bob's bit is read from D2, so the roles swap.
      const Outcome o = ZFockOutcome(src, ch, 0, n);
      out.correct += w * o.wrong;
      out.wrong += w * o.correct;
    }
  }
  return out;
}

SinglePhotonTruth TrueSinglePhoton(const SourceParams& src,
                                   const ChannelParams& ch) {
  constexpr double kFullCircle = std::numbers::pi / 2.0;
  SinglePhotonTruth t;
  t.y10_z = ZFockOutcome(src, ch, 1, 0).effective();
  t.y01_z = ZFockOutcome(src, ch, 0, 1).effective();
  t.y10_x = XFockOutcome(src, ch, 1.0, 0.0, 1, kFullCircle).effective();
  t.y01_x = XFockOutcome(src, ch, 0.0, 1.0, 1, kFullCircle).effective();
  const double sum = src.nu_a + src.nu_b;
  t.y1_z = (src.nu_a * t.y10_z + src.nu_b * t.y01_z) / sum;
  t.y1_x = (src.nu_a * t.y10_x + src.nu_b * t.y01_x) / sum;
  const Outcome pm = XFockOutcome(src, ch, src.nu_a, src.nu_b, 1, src.delta);
  t.e1_pm = pm.effective() > 0.0 ? pm.wrong / pm.effective() : 0.5;
  return t;
}

}  // namespace qcka::validation
