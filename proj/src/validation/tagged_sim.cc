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

#include "qcka/validation/tagged_sim.h"

#include <algorithm>
#include <array>
#include <cstddef>
#include <numbers>
#include <random>

#include "absl/status/status.h"
#include "qcka/status_macros.h"
#include "qcka/validation/fock_oracle.h"

namespace qcka::validation {
namespace {

using Count = std::int64_t;

// What one sender did in a round.
enum class Choice { kXSignal, kXDecoy, kXVacuum, kZSend, kZSilent };
constexpr std::array<Choice, 5> kChoices = {Choice::kXSignal, Choice::kXDecoy,
                                            Choice::kXVacuum, Choice::kZSend,
                                            Choice::kZSilent};

double ChoiceProbability(const SourceParams& src, Side side, Choice c) {
  const double p_z = side == Side::kAlice ? src.p_za : src.p_zb;
  const double t = side == Side::kAlice ? src.t_a : src.t_b;
  switch (c) {
    case Choice::kXSignal:
      return (1.0 - p_z) * src.XIntensityProbability(side, Intensity::kSignal);
    case Choice::kXDecoy:
      return (1.0 - p_z) * src.XIntensityProbability(side, Intensity::kDecoy);
    case Choice::kXVacuum:
      return (1.0 - p_z) * src.XIntensityProbability(side, Intensity::kVacuum);
    case Choice::kZSend:
      return p_z * t;
    case Choice::kZSilent:
      return p_z * (1.0 - t);
  }
  return 0.0;
}

bool IsZ(Choice c) { return c == Choice::kZSend || c == Choice::kZSilent; }

Intensity Announced(Choice c) {
  switch (c) {
    case Choice::kXSignal:
    case Choice::kZSend:
      return Intensity::kSignal;
    case Choice::kXDecoy:
      return Intensity::kDecoy;
    case Choice::kXVacuum:
    case Choice::kZSilent:
      return Intensity::kVacuum;
  }
  return Intensity::kVacuum;
}

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  Count Binomial(Count n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    return std::binomial_distribution<Count>(n, p)(rng_);
  }

  // Sequential conditional binomials; whatever is left over falls in an
  // implicit final cell.
  template <std::size_t K>
  std::array<Count, K> Multinomial(Count n, const std::array<double, K>& p) {
    std::array<Count, K> out{};
    double remaining = 1.0;
    for (std::size_t i = 0; i < K && n > 0; ++i) {
      const double q = remaining > 0.0 ? std::clamp(p[i] / remaining, 0.0, 1.0)
                                       : 0.0;
      out[i] = Binomial(n, q);
      n -= out[i];
      remaining -= p[i];
    }
    return out;
  }

  // Correct and wrong effective events among `rounds` with outcome `o`.
  std::array<Count, 2> Effective(Count rounds, const Outcome& o) {
    return Multinomial<2>(rounds, {o.correct, o.wrong});
  }

 private:
  std::mt19937_64 rng_;
};

Outcome Scaled(Outcome o, double factor) {
  return {o.correct * factor, o.wrong * factor};
}

}  // namespace

absl::StatusOr<TaggedModel> TaggedModel::Create(const SourceParams& src,
                                                const ChannelParams& ch) {
  QCKA_RETURN_IF_ERROR(ValidateSourceRanges(src));
  QCKA_RETURN_IF_ERROR(ValidateChannelParams(ch));
  TaggedModel m;
  m.src_ = src;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      m.cell_p_[5 * i + j] = ChoiceProbability(src, Side::kAlice, kChoices[i]) *
                             ChoiceProbability(src, Side::kBob, kChoices[j]);
    }
  }

  constexpr double kHalfCircle = std::numbers::pi / 2.0;
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      const double k_a = src.IntensityOf(Side::kAlice, a);
      const double k_b = src.IntensityOf(Side::kBob, b);
      m.z_gain_(a, b) = ZPoissonOutcome(src, ch, k_a, k_b).effective();
      m.x_gain_(a, b) =
          XPoissonOutcome(src, ch, k_a, k_b, kHalfCircle, 0, kMaxPhotons)
              .effective();
    }
  }
  m.z_both_ = ZPoissonOutcome(src, ch, src.mu_a, src.mu_b).effective();
  m.z_neither_ = ZPoissonOutcome(src, ch, 0.0, 0.0).effective();

  for (Side side : {Side::kAlice, Side::kBob}) {
    const double mu = src.IntensityOf(side, Intensity::kSignal);
    Classes& c = m.z_single_[side == Side::kAlice ? 0 : 1];
    c.pmf = {PoissonPmf(mu, 0), PoissonPmf(mu, 1)};
    c.outcome = {ZSingleSenderOutcome(src, ch, side, mu, 0, 0),
                 ZSingleSenderOutcome(src, ch, side, mu, 1, 1),
                 ZSingleSenderOutcome(src, ch, side, mu, 2, kMaxPhotons)};
  }

  const double nu = src.nu_a + src.nu_b;
  auto pm_class = [&](int n_min, int n_max) {
    const double mass = PoissonMass(nu, n_min, n_max);
    if (mass == 0.0) return Outcome{};
    return Scaled(XPoissonOutcome(src, ch, src.nu_a, src.nu_b, src.delta,
                                  n_min, n_max),
                  1.0 / mass);
  };
  m.pm_.pmf = {PoissonPmf(nu, 0), PoissonPmf(nu, 1)};
  m.pm_.outcome = {pm_class(0, 0), pm_class(1, 1), pm_class(2, kMaxPhotons)};

  // Gain of decoy-pair rounds whose phases fall outside the accepted slices.
  if (src.delta < kHalfCircle) {
    const double full =
        m.x_gain_(Intensity::kDecoy, Intensity::kDecoy) * kHalfCircle;
    const double inside = XPoissonOutcome(src, ch, src.nu_a, src.nu_b,
                                          src.delta, 0, kMaxPhotons)
                              .effective() *
                          src.delta;
    m.rejected_gain_ =
        std::clamp((full - inside) / (kHalfCircle - src.delta), 0.0, 1.0);
  }
  m.e1_pm_ = TrueSinglePhoton(src, ch).e1_pm;
  return m;
}

absl::StatusOr<TaggedCounts> TaggedModel::Sample(const SecurityParams& sec,
                                                 std::uint64_t seed) const {
  QCKA_RETURN_IF_ERROR(ValidateSecurityParams(sec));
  if (sec.total_rounds > 4e18) {
    return absl::InvalidArgumentError("total rounds exceed the count range");
  }
  Draws draws(seed);
  TaggedCounts out;
  const std::array<Count, 25> cells =
      draws.Multinomial(static_cast<Count>(sec.total_rounds), cell_p_);

  PairTable<Count> announced(0);
  Count decoy_pair_rounds = 0;
  Count z_block = 0;
  Count z_errors = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      const Choice ca = kChoices[i];
      const Choice cb = kChoices[j];
      const Count rounds = cells[5 * i + j];
      if (!(IsZ(ca) && IsZ(cb))) {
        announced(Announced(ca), Announced(cb)) += rounds;
        if (ca == Choice::kXDecoy && cb == Choice::kXDecoy) {
          decoy_pair_rounds += rounds;
        }
        continue;
      }
      const bool a_sends = ca == Choice::kZSend;
      const bool b_sends = cb == Choice::kZSend;
      if (a_sends == b_sends) {
        // The parties' bits disagree, so every effective event is an error.
        const Count clicks =
            draws.Binomial(rounds, a_sends ? z_both_ : z_neither_);
        z_block += clicks;
        z_errors += clicks;
        continue;
      }
      const Classes& c = z_single_[a_sends ? 0 : 1];
      const auto split = draws.Multinomial<2>(rounds, c.pmf);
      const auto vac = draws.Effective(split[0], c.outcome[0]);
      const auto one = draws.Effective(split[1], c.outcome[1]);
      const auto many =
          draws.Effective(rounds - split[0] - split[1], c.outcome[2]);
      out.s0z += static_cast<double>(vac[0] + vac[1]);
      out.s1z += static_cast<double>(one[0] + one[1]);
      z_block += vac[0] + vac[1] + one[0] + one[1] + many[0] + many[1];
      z_errors += vac[1] + one[1] + many[1];
    }
  }

  ObservedCounts& c = out.counts;
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      const Count n = announced(a, b);
      c.announced(a, b) = static_cast<double>(n);
      c.z_clicks(a, b) = static_cast<double>(draws.Binomial(n, z_gain_(a, b)));
      if (a == Intensity::kDecoy && b == Intensity::kDecoy) continue;
      c.x_clicks(a, b) = static_cast<double>(draws.Binomial(n, x_gain_(a, b)));
    }
  }

  // Decoy-pair X rounds: phase matching, then photon-number classes.
  const Count accepted =
      draws.Binomial(decoy_pair_rounds, PhaseMatchingProbability(src_.delta));
  const auto split = draws.Multinomial<2>(accepted, pm_.pmf);
  const auto vac = draws.Effective(split[0], pm_.outcome[0]);
  const auto one = draws.Effective(split[1], pm_.outcome[1]);
  const auto many =
      draws.Effective(accepted - split[0] - split[1], pm_.outcome[2]);
  out.s1pm = static_cast<double>(one[0] + one[1]);
  out.t1pm = static_cast<double>(one[1]);
  const Count pm_clicks =
      vac[0] + vac[1] + one[0] + one[1] + many[0] + many[1];
  c.pm_clicks = static_cast<double>(pm_clicks);
  c.pm_errors = static_cast<double>(vac[1] + one[1] + many[1]);
  c.x_clicks(Intensity::kDecoy, Intensity::kDecoy) = static_cast<double>(
      pm_clicks +
      draws.Binomial(decoy_pair_rounds - accepted, rejected_gain_));

  c.z_block = static_cast<double>(z_block);
  c.z_error_rate = z_block > 0 ? static_cast<double>(z_errors) /
                                     static_cast<double>(z_block)
                               : 0.0;
  out.phase_errors_z = static_cast<double>(
      draws.Binomial(static_cast<Count>(out.s1z), e1_pm_));
  return out;
}

absl::StatusOr<TaggedCounts> SampleTaggedCounts(const SourceParams& src,
                                                const ChannelParams& ch,
                                                const SecurityParams& sec,
                                                std::uint64_t seed) {
  QCKA_ASSIGN_OR_RETURN(const TaggedModel model, TaggedModel::Create(src, ch));
  return model.Sample(sec, seed);
}

}  // namespace qcka::validation
