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

#include "qcka/validation/photon_mc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "boost/math/distributions/binomial.hpp"
#include "boost/math/distributions/normal.hpp"
#include "qcka/status_macros.h"

namespace qcka::validation {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Receiver {
 public:
  Receiver(const SourceParams& src, const ChannelParams& ch, std::uint64_t seed)
      : src_(src),
        ch_(ch),
        eta_a_(ArmTransmittance(ch, Side::kAlice)),
        eta_b_(ArmTransmittance(ch, Side::kBob)),
        rng_(seed) {}

  struct Clicks {
    bool d1 = false;
    bool d2 = false;
    bool d3 = false;
    bool d4 = false;
  };

  // One round with the given mean photon numbers and relative phase (phase
  // already includes the reference-frame offset).
  Clicks Round(double mean_a, double mean_b, double theta) {
    const int n_a = Poisson(mean_a);
    const int n_b = Poisson(mean_b);
    int z_1 = 0;
    int z_2 = 0;
    int x_a = 0;
    int x_b = 0;
    Route(n_a, eta_a_, z_1, x_a);
    Route(n_b, eta_b_, z_2, x_b);

    // Interfering photons leave BS3 towards D3 with probability
    // |alpha + beta e^{i theta}|^2 / (2 (|alpha|^2 + |beta|^2)).
    const double in_a = mean_a * eta_a_ * (1.0 - src_.q_z);
    const double in_b = mean_b * eta_b_ * (1.0 - src_.q_z);
    int x_3 = 0;
    int x_4 = 0;
    const int x_total = x_a + x_b;
    if (x_total > 0) {
      const double p_3 =
          (in_a + in_b + 2.0 * std::sqrt(in_a * in_b) * std::cos(theta)) /
          (2.0 * (in_a + in_b));
      for (int i = 0; i < x_total; ++i) {
        if (Uniform() < p_3) {
          ++x_3;
        } else {
          ++x_4;
        }
      }
    }

    Clicks c;
    c.d1 = z_1 > 0 || Dark();
    c.d2 = z_2 > 0 || Dark();
    c.d3 = x_3 > 0 || Dark();
    c.d4 = x_4 > 0 || Dark();
    if (c.d3 != c.d4 && Uniform() < ch_.misalignment_x) {
      std::swap(c.d3, c.d4);
    }
    return c;
  }

  double Uniform() { return uniform_(rng_); }
  double Phase() { return kTwoPi * Uniform(); }
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  int Poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<int>(mean)(rng_);
  }

  bool Dark() { return Uniform() < ch_.dark_count_prob; }

  void Route(int photons, double eta, int& to_z, int& to_x) {
    for (int i = 0; i < photons; ++i) {
      if (Uniform() >= eta) continue;
      if (Uniform() < src_.q_z) {
        ++to_z;
      } else {
        ++to_x;
      }
    }
  }

  const SourceParams& src_;
  const ChannelParams& ch_;
  double eta_a_;
  double eta_b_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Announced relative phase folded into (-pi, pi].
double Fold(double u) {
  u = std::remainder(u, kTwoPi);
  return u == -std::numbers::pi ? std::numbers::pi : u;
}

// Normal quantile matching the exact two-sided binomial tail probability of
// `successes` under success probability p. Agrees with |x - np| / sd for
// large counts and stays meaningful when np is of order one.
double EquivalentZScore(double p, std::int64_t successes, std::int64_t trials) {
  namespace bm = boost::math;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  p = std::clamp(p, 0.0, 1.0);
  const double x = static_cast<double>(successes);
  const double mean = p * static_cast<double>(trials);
  if (x == mean) return 0.0;
  if (p == 0.0 || p == 1.0) return kInf;
  const bm::binomial_distribution<double> dist(static_cast<double>(trials), p);
  const double tail = x > mean ? bm::cdf(bm::complement(dist, x - 1.0))
                               : bm::cdf(dist, x);
  const double two_sided = std::min(1.0, 2.0 * tail);
  if (two_sided <= 0.0) return kInf;
  if (two_sided >= 1.0) return 0.0;
  return bm::quantile(bm::complement(bm::normal_distribution<double>(),
                                     two_sided / 2.0));
}

void AddComparison(std::vector<Comparison>& out, std::string name,
                   double analytic, std::int64_t successes,
                   std::int64_t trials) {
  if (trials == 0) return;
  Comparison c;
  c.quantity = std::move(name);
  c.analytic = analytic;
  c.simulated = static_cast<double>(successes) / static_cast<double>(trials);
  c.std_error =
      std::sqrt(std::max(0.0, analytic * (1.0 - analytic)) / trials);
  c.z_score = EquivalentZScore(analytic, successes, trials);
  out.push_back(std::move(c));
}

const char* Name(Intensity k) {
  switch (k) {
    case Intensity::kSignal:
      return "mu";
    case Intensity::kDecoy:
      return "nu";
    case Intensity::kVacuum:
      return "0";
  }
  return "?";
}

}  // namespace

absl::StatusOr<ChannelSample> SimulatePhotons(const SourceParams& src,
                                              const ChannelParams& ch,
                                              std::int64_t trials_per_category,
                                              std::uint64_t seed) {
  QCKA_RETURN_IF_ERROR(ValidateSourceRanges(src));
  QCKA_RETURN_IF_ERROR(ValidateChannelParams(ch));
  if (trials_per_category < 0) {
    return absl::InvalidArgumentError("trial count must be non-negative");
  }
  Receiver rx(src, ch, seed);
  ChannelSample out;

  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      const double mean_a = src.IntensityOf(Side::kAlice, a);
      const double mean_b = src.IntensityOf(Side::kBob, b);
      const bool decoy_pair = a == Intensity::kDecoy && b == Intensity::kDecoy;
      EventTally& z = out.z(a, b);
      EventTally& x = out.x(a, b);
      for (std::int64_t i = 0; i < trials_per_category; ++i) {
        const double announced = Fold(rx.Phase() - rx.Phase());
        const Receiver::Clicks c =
            rx.Round(mean_a, mean_b, announced - ch.phase_offset);
        ++z.trials;
        ++x.trials;
        if (decoy_pair) ++out.pm.trials;
        if (c.d1 != c.d2) ++z.clicks;
        if (c.d3 == c.d4) continue;
        ++x.clicks;
        const bool expect_d3 = std::cos(announced) >= 0.0;
        if (c.d3 != expect_d3) ++x.errors;
        if (!decoy_pair) continue;
        const double distance = std::abs(announced);
        if (distance <= src.delta) {
          ++out.pm.clicks;
          if (!c.d3) ++out.pm.errors;
        } else if (distance >= std::numbers::pi - src.delta) {
          ++out.pm.clicks;
          if (!c.d4) ++out.pm.errors;
        }
      }
    }
  }

  for (std::int64_t i = 0; i < trials_per_category; ++i) {
    const bool a_sends = rx.Bernoulli(src.t_a);
    const bool b_sends = rx.Bernoulli(src.t_b);
    // Z-basis pulses carry undisclosed random phases.
    const Receiver::Clicks c =
        rx.Round(a_sends ? src.mu_a : 0.0, b_sends ? src.mu_b : 0.0,
                 rx.Phase());
    ++out.z_all.trials;
    if (c.d1 == c.d2) continue;
    ++out.z_all.clicks;
    const bool correct = (a_sends && !b_sends && c.d1) ||
                         (!a_sends && b_sends && c.d2);
    if (!correct) ++out.z_all.errors;
  }
  return out;
}

std::vector<Comparison> CompareWithSimulation(const ExpectedYields& expected,
                                              const ChannelSample& sample) {
  std::vector<Comparison> out;
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      const std::string pair = absl::StrFormat("(%s,%s)", Name(a), Name(b));
      const EventTally& z = sample.z(a, b);
      const EventTally& x = sample.x(a, b);
      AddComparison(out, "Q^z" + pair, expected.z_gain(a, b), z.clicks,
                    z.trials);
      AddComparison(out, "Q^x" + pair, expected.x_gain(a, b), x.clicks,
                    x.trials);
      AddComparison(out, "E^x" + pair, expected.x_error(a, b), x.errors,
                    x.clicks);
    }
  }
  AddComparison(out, "Q^pm", expected.pm_gain, sample.pm.clicks,
                sample.pm.trials);
  AddComparison(out, "E^pm", expected.pm_error, sample.pm.errors,
                sample.pm.clicks);
  AddComparison(out, "Q^z(all-Z)", expected.z_all_gain, sample.z_all.clicks,
                sample.z_all.trials);
  AddComparison(out, "E^z(all-Z)", expected.z_all_error, sample.z_all.errors,
                sample.z_all.clicks);
  return out;
}

}  // namespace qcka::validation
