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

#include "qcka/validation/suites.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "absl/strings/str_format.h"
#include "qcka/asymptotic.h"
#include "qcka/channel.h"
#include "qcka/finite_key.h"
#include "qcka/validation/fock_oracle.h"
#include "qcka/validation/hypergeometric.h"
#include "qcka/validation/photon_mc.h"
#include "qcka/validation/tagged_sim.h"

namespace qcka::validation {
namespace {

constexpr std::size_t kMaxListedFailures = 20;

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Largest violation frequency accepted at nominal probability eps.
double CoverageThreshold(double eps, double trials) {
  return eps + 3.0 * std::sqrt(eps * (1.0 - eps) / trials);
}

// One-sided violation tally for one (bound, case) combination.
struct Tally {
  std::string label;
  double eps = 0.0;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
};

void CheckTally(const Tally& t, SuiteReport& report) {
  ++report.checks;
  if (t.trials == 0) return;
  const double freq = static_cast<double>(t.violations) / t.trials;
  const double limit = CoverageThreshold(t.eps, static_cast<double>(t.trials));
  if (freq > limit) {
    report.Fail(absl::StrFormat("%s: violation frequency %.5g > %.5g (%d/%d)",
                                t.label, freq, limit, t.violations, t.trials));
  }
}

}  // namespace

void SuiteReport::Fail(std::string what) {
  passed = false;
  ++failure_count;
  if (failures.size() < kMaxListedFailures) failures.push_back(std::move(what));
}

SourceParams RandomSource(std::mt19937_64& rng) {
  SourceParams src;
  src.mu_a = Uniform(rng, 0.05, 1.0);
  src.mu_b = Uniform(rng, 0.05, 1.0);
  src.nu_a = src.mu_a * Uniform(rng, 0.02, 0.6);
  src.nu_b = src.mu_b * Uniform(rng, 0.02, 0.6);
  src.t_a = Uniform(rng, 0.05, 0.95);
  src.p_za = Uniform(rng, 0.05, 0.95);
  src.p_zb = Uniform(rng, 0.05, 0.95);
  src.p_0a = Uniform(rng, 0.05, 0.45);
  src.p_0b = Uniform(rng, 0.05, 0.45);
  src.p_nua = Uniform(rng, 0.05, 0.45);
  src.p_nub = Uniform(rng, 0.05, 0.45);
  src.delta = Uniform(rng, 0.05, std::numbers::pi / 2.0);
  src.q_z = Uniform(rng, 0.1, 0.9);
  // Always representable for the ranges above.
  src.t_b = *SolveBobSendingProbability(src.mu_a, src.mu_b, src.t_a, src.nu_a,
                                        src.nu_b);
  return src;
}

ChannelParams RandomChannel(std::mt19937_64& rng, double max_length_km) {
  ChannelParams ch = DefaultFiberChannel(Uniform(rng, 0.0, max_length_km),
                                         Uniform(rng, 0.0, max_length_km));
  ch.detector_efficiency = Uniform(rng, 0.3, 1.0);
  ch.dark_count_prob = std::pow(10.0, Uniform(rng, -8.0, -3.0));
  ch.misalignment_x = Uniform(rng, 0.0, 0.1);
  ch.phase_offset = Uniform(rng, -0.3, 0.3);
  return ch;
}

SuiteReport RunConstraintSuite(const ConstraintOptions& options) {
  SuiteReport report;
  report.name = "constraint";
  std::mt19937_64 rng(options.seed);
  double worst = 0.0;
  for (int i = 0; i < options.draws; ++i) {
    const SourceParams src = RandomSource(rng);
    const absl::StatusOr<SingleExcitationPair> states =
        SingleExcitationStates(src);
    ++report.checks;
    if (!states.ok()) {
      report.Fail(absl::StrFormat("draw %d: %s", i,
                                  states.status().ToString()));
      continue;
    }
    const double gap = std::max(std::abs(states->z.w10 - states->x.w10),
                                std::abs(states->z.w01 - states->x.w01));
    worst = std::max(worst, gap);
    if (gap > options.tolerance) {
      report.Fail(absl::StrFormat("draw %d: state mismatch %.3g", i, gap));
    }
  }
  report.summary = absl::StrFormat("%d draws, worst componentwise gap %.3g",
                                   options.draws, worst);
  return report;
}

SuiteReport RunChannelSuite(const ChannelSuiteOptions& options) {
  SuiteReport report;
  report.name = "channel";
  std::mt19937_64 rng(options.seed);
  const std::int64_t per_category = options.trials_per_config / 10;
  double worst = 0.0;
  for (int c = 0; c < options.configs; ++c) {
    const SourceParams src = RandomSource(rng);
    const ChannelParams ch = RandomChannel(rng, options.max_length_km);
    const absl::StatusOr<ChannelSample> sample =
        SimulatePhotons(src, ch, per_category, options.seed * 1000003 + c);
    if (!sample.ok()) {
      ++report.checks;
      report.Fail(absl::StrFormat("config %d: %s", c,
                                  sample.status().ToString()));
      continue;
    }
    const ExpectedYields expected = ComputeExpectedYields(src, ch);
    for (const Comparison& cmp : CompareWithSimulation(expected, *sample)) {
      ++report.checks;
      worst = std::max(worst, cmp.z_score);
      if (!(cmp.z_score <= options.max_z_score)) {
        report.Fail(absl::StrFormat(
            "config %d %s: analytic %.6g simulated %.6g (%.2f standard "
            "errors)",
            c, cmp.quantity, cmp.analytic, cmp.simulated, cmp.z_score));
      }
    }
  }
  report.summary =
      absl::StrFormat("%d configs, %d comparisons, worst %.2f standard errors",
                      options.configs, report.checks, worst);
  return report;
}

SuiteReport RunCoverageSuite(const CoverageOptions& options) {
  SuiteReport report;
  report.name = "coverage";
  std::mt19937_64 rng(options.seed);
  const BoundFunctions& f = options.bounds;
  constexpr double kBernoulliP = 0.01;
  const double means[] = {30.0, 1e3, 1e6};
  struct SamplingCase {
    double n;
    double k;
    double rate;
  };
  const SamplingCase sampling_cases[] = {
      {1e4, 1e4, 0.05}, {1e5, 2e3, 0.1}, {3e3, 1e4, 0.02}};

  std::vector<Tally> tallies;
  for (double eps : options.eps) {
    for (double mean : means) {
      const auto n = static_cast<std::int64_t>(mean / kBernoulliP);
      std::binomial_distribution<std::int64_t> draw(n, kBernoulliP);
      const double expected = static_cast<double>(n) * kBernoulliP;
      auto tag = [&](const char* which) {
        return Tally{absl::StrFormat("%s x*=%g eps=%g", which, mean, eps), eps};
      };
      Tally ch_lo = tag("chernoff-lower");
      Tally ch_hi = tag("chernoff-upper");
      Tally var_lo = tag("variant-lower");
      Tally var_hi = tag("variant-upper");
      const absl::StatusOr<Interval> observed_range = f.chernoff(expected, eps);
      for (int t = 0; t < options.trials; ++t) {
        const double x = static_cast<double>(draw(rng));
        ++ch_lo.trials;
        ++ch_hi.trials;
        ++var_lo.trials;
        ++var_hi.trials;
        if (!observed_range.ok() || x < observed_range->lower) ++ch_lo.violations;
        if (!observed_range.ok() || x > observed_range->upper) ++ch_hi.violations;
        const absl::StatusOr<Interval> expected_range = f.variant(x, eps);
        if (!expected_range.ok() || expected < expected_range->lower) {
          ++var_lo.violations;
        }
        if (!expected_range.ok() || expected > expected_range->upper) {
          ++var_hi.violations;
        }
      }
      tallies.insert(tallies.end(), {ch_lo, ch_hi, var_lo, var_hi});
    }
    for (const SamplingCase& sc : sampling_cases) {
      const auto population = static_cast<std::int64_t>(sc.n + sc.k);
      const auto marked = static_cast<std::int64_t>(
          std::llround(sc.rate * static_cast<double>(population)));
      Tally tally{absl::StrFormat("sampling n=%g k=%g rate=%g eps=%g", sc.n,
                                  sc.k, sc.rate, eps),
                  eps};
      const absl::StatusOr<HypergeometricSampler> sampler =
          HypergeometricSampler::Create(population, marked,
                                        static_cast<std::int64_t>(sc.k));
      if (!sampler.ok()) {
        ++report.checks;
        report.Fail(tally.label + ": " + sampler.status().ToString());
        continue;
      }
      for (int t = 0; t < options.trials; ++t) {
        const std::int64_t in_sample = (*sampler)(rng);
        const double sample_rate = static_cast<double>(in_sample) / sc.k;
        const double population_rate =
            static_cast<double>(marked - in_sample) / sc.n;
        ++tally.trials;
        const absl::StatusOr<double> gamma =
            f.sampling(sc.n, sc.k, sample_rate, eps);
        if (!gamma.ok() || population_rate > sample_rate + *gamma) {
          ++tally.violations;
        }
      }
      tallies.push_back(std::move(tally));
    }
  }
  double worst_ratio = 0.0;
  for (const Tally& t : tallies) {
    CheckTally(t, report);
    if (t.trials > 0) {
      worst_ratio = std::max(
          worst_ratio, static_cast<double>(t.violations) / t.trials / t.eps);
    }
  }
  report.summary = absl::StrFormat(
      "%d one-sided bounds, %d trials each, worst frequency/eps %.3f",
      report.checks, options.trials, worst_ratio);
  return report;
}

SuiteReport RunDecoySuite(const DecoySuiteOptions& options) {
  SuiteReport report;
  report.name = "decoy";
  std::mt19937_64 rng(options.seed);
  // Relative slack for comparing two independently computed exact values.
  constexpr double kRoundoff = 1e-9;
  auto at_most = [&](double bound, double truth) {
    return bound <= truth * (1.0 + kRoundoff) + 1e-15;
  };

  SecurityParams sec;
  sec.total_rounds = options.total_rounds;
  sec.eps_sec = options.finite_eps * BoundBudget::kTotalTerms;
  sec.eps_cor = options.finite_eps;
  Tally s0z{"finite s0z lower", options.finite_eps};
  Tally s1z{"finite s1z lower", options.finite_eps};
  Tally s1pm{"finite s1pm lower", options.finite_eps};
  Tally t1pm{"finite t1pm upper", options.finite_eps};
  Tally e1ph{"finite e1ph upper", options.finite_eps};
  int undefined_phase = 0;

  for (int c = 0; c < options.configs; ++c) {
    const SourceParams src = RandomSource(rng);
    const ChannelParams ch = RandomChannel(rng, options.max_length_km);
    const SinglePhotonTruth truth = TrueSinglePhoton(src, ch);
    const ExpectedYields yields = ComputeExpectedYields(src, ch);

    const absl::StatusOr<DecoyYields> z = YieldBounds(yields, src, Basis::kZ);
    const absl::StatusOr<DecoyYields> x = YieldBounds(yields, src, Basis::kX);
    report.checks += 6;
    if (!z.ok() || !x.ok()) {
      report.Fail(absl::StrFormat("config %d: yield bounds failed", c));
      continue;
    }
    const std::pair<double, double> pairs[] = {
        {z->y10, truth.y10_z}, {z->y01, truth.y01_z}, {z->y1, truth.y1_z},
        {x->y10, truth.y10_x}, {x->y01, truth.y01_x}, {x->y1, truth.y1_x}};
    const char* names[] = {"Y10^z", "Y01^z", "Y1^z", "Y10^x", "Y01^x", "Y1^x"};
    for (int i = 0; i < 6; ++i) {
      if (!at_most(pairs[i].first, pairs[i].second)) {
        report.Fail(absl::StrFormat("config %d %s: bound %.9g > true %.9g", c,
                                    names[i], pairs[i].first,
                                    pairs[i].second));
      }
    }
    const absl::StatusOr<PhaseErrorEstimate> phase =
        PhaseErrorBound(yields, src);
    if (phase.ok()) {
      ++report.checks;
      if (!at_most(truth.e1_pm, phase->value)) {
        report.Fail(absl::StrFormat("config %d e1ph: bound %.9g < true %.9g",
                                    c, phase->value, truth.e1_pm));
      }
    }

    if (options.finite_trials <= 0) continue;
    const absl::StatusOr<TaggedModel> model = TaggedModel::Create(src, ch);
    if (!model.ok()) {
      ++report.checks;
      report.Fail(absl::StrFormat("config %d: %s", c,
                                  model.status().ToString()));
      continue;
    }
    for (int t = 0; t < options.finite_trials; ++t) {
      const absl::StatusOr<TaggedCounts> run =
          model->Sample(sec, options.seed * 7919 + c * 1000 + t);
      if (!run.ok()) {
        ++report.checks;
        report.Fail(run.status().ToString());
        continue;
      }
      const ObservedCounts& counts = run->counts;
      BoundUseCounter bounds;
      const auto vac = EstimateVacuumZ(counts, src, sec, bounds);
      const auto single_z = EstimateSingleZ(counts, src, sec, bounds);
      const auto single_pm =
          EstimateSinglePhaseMatched(counts, src, sec, bounds);
      const auto errors = EstimateSinglePhotonErrors(counts, src, sec, bounds);
      if (vac.ok()) {
        ++s0z.trials;
        if (vac->observed_low > run->s0z) ++s0z.violations;
      }
      if (single_z.ok()) {
        ++s1z.trials;
        if (single_z->observed_low > run->s1z) ++s1z.violations;
      }
      if (single_pm.ok()) {
        ++s1pm.trials;
        if (single_pm->observed_low > run->s1pm) ++s1pm.violations;
      }
      if (errors.ok()) {
        ++t1pm.trials;
        if (errors->t1_observed_up < run->t1pm) ++t1pm.violations;
      }
      if (!single_z.ok() || !single_pm.ok() || !errors.ok() || run->s1z <= 0) {
        ++undefined_phase;
        continue;
      }
      const absl::StatusOr<double> rate = PhaseErrorRateBound(
          single_z->observed_low, single_pm->observed_low,
          errors->t1_observed_up, sec, bounds);
      if (!rate.ok()) {
        ++undefined_phase;
        continue;
      }
      ++e1ph.trials;
      if (*rate < run->phase_errors_z / run->s1z) ++e1ph.violations;
    }
  }
  for (const Tally& t : {s0z, s1z, s1pm, t1pm, e1ph}) CheckTally(t, report);
  report.summary = absl::StrFormat(
      "%d configs; finite failures s0z %d/%d, s1z %d/%d, s1pm %d/%d, "
      "t1pm %d/%d, e1ph %d/%d (undefined %d) at eps %g per bound",
      options.configs, s0z.violations, s0z.trials, s1z.violations, s1z.trials,
      s1pm.violations, s1pm.trials, t1pm.violations, t1pm.trials,
      e1ph.violations, e1ph.trials, undefined_phase, options.finite_eps);
  return report;
}

}  // namespace qcka::validation
