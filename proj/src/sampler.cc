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

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>

#include "qcka/channel.h"

namespace qcka {
namespace {

// Largest round count the integer samplers accept.
constexpr double kMaxSampledRounds = 4.0e18;

// std::binomial_distribution slows to seconds per draw near 1e18 trials, so
// larger draws are summed over independent chunks of at most this size.
constexpr std::int64_t kBinomialChunk = 10'000'000'000'000'000;

class CountDraws {
 public:
  explicit CountDraws(std::uint64_t seed) : rng_(seed) {}

  std::int64_t Binomial(std::int64_t trials, double p) {
    if (trials <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    std::int64_t successes = 0;
    while (trials > 0) {
      const std::int64_t chunk = std::min(trials, kBinomialChunk);
      std::binomial_distribution<std::int64_t> dist(chunk, p);
      successes += dist(rng_);
      trials -= chunk;
    }
    return successes;
  }

  // Multinomial split of `trials` by sequential conditional binomials.
  template <std::size_t K>
  std::array<std::int64_t, K> Multinomial(std::int64_t trials,
                                          const std::array<double, K>& probs) {
    std::array<std::int64_t, K> out{};
    double remaining_mass = 0.0;
    for (double p : probs) remaining_mass += p;
    std::int64_t remaining = trials;
    for (std::size_t i = 0; i < K && remaining > 0; ++i) {
      if (i + 1 == K) {
        out[i] = remaining;
        break;
      }
      const double p =
          remaining_mass > 0.0 ? std::clamp(probs[i] / remaining_mass, 0.0, 1.0)
                               : 0.0;
      out[i] = Binomial(remaining, p);
      remaining -= out[i];
      remaining_mass -= probs[i];
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

absl::StatusOr<ObservedCounts> SampleCounts(const SourceParams& src,
                                            const ChannelParams& ch,
                                            const SecurityParams& sec,
                                            std::uint64_t seed) {
  if (absl::Status s = ValidateSourceRanges(src); !s.ok()) return s;
  if (absl::Status s = ValidateChannelParams(ch); !s.ok()) return s;
  if (!(sec.total_rounds >= 0.0) || sec.total_rounds > kMaxSampledRounds) {
    return absl::InvalidArgumentError(
        "total rounds not representable as a sampled count");
  }
  const auto total = static_cast<std::int64_t>(sec.total_rounds);

  SecurityParams unit = sec;
  unit.total_rounds = 1.0;
  const PairTable<double> pair_prob = AnnouncedTotals(src, unit);
  std::array<double, 10> probs{};
  std::size_t i = 0;
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) probs[i++] = pair_prob(a, b);
  }
  probs[9] = AllZRounds(src, unit);

  const ExpectedYields y = ComputeExpectedYields(src, ch);
  CountDraws draws(seed);
  const auto rounds = draws.Multinomial(total, probs);

  ObservedCounts c;
  i = 0;
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      const std::int64_t n = rounds[i++];
      c.announced(a, b) = static_cast<double>(n);
      c.z_clicks(a, b) = static_cast<double>(draws.Binomial(n, y.z_gain(a, b)));
      const std::int64_t x = draws.Binomial(n, y.x_gain(a, b));
      c.x_clicks(a, b) = static_cast<double>(x);
      if (a == Intensity::kDecoy && b == Intensity::kDecoy) {
        // Phase-matched events are a subset of the decoy-pair X events.
        const double accept =
            y.x_gain(a, b) > 0.0 ? y.pm_gain / y.x_gain(a, b) : 0.0;
        const std::int64_t pm = draws.Binomial(x, accept);
        c.pm_clicks = static_cast<double>(pm);
        c.pm_errors = static_cast<double>(draws.Binomial(pm, y.pm_error));
      }
    }
  }
  const std::int64_t z_block = draws.Binomial(rounds[9], y.z_all_gain);
  const std::int64_t z_errors = draws.Binomial(z_block, y.z_all_error);
  c.z_block = static_cast<double>(z_block);
  c.z_error_rate = z_block > 0 ? static_cast<double>(z_errors) /
                                     static_cast<double>(z_block)
                               : 0.0;
  return c;
}

}  // namespace qcka
