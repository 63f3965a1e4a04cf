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


// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed below.
//
// Usage: qcka_acceptance [--only=AC1,AC5,...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "qcka/asymptotic.h"
#include "qcka/channel.h"
#include "qcka/cli/config.h"
#include "qcka/core.h"
#include "qcka/finite_key.h"
#include "qcka/optimizer.h"
#include "qcka/stat_bounds.h"
#include "qcka/validation/suites.h"

namespace qcka {
namespace {

// AC1
constexpr int kConstraintDraws = 1000;
constexpr double kConstraintTol = 1e-12;
constexpr double kConstraintSeconds = 1.0;
// AC5
constexpr double kConvergenceRounds = 1e18;
constexpr double kConvergenceSlack = 0.05;
constexpr double kFiniteAboveAsymptoticRel = 1e-6;
constexpr int kFiniteVsAsymptoticConfigs = 200;
// AC6
constexpr double kScanSeconds = 1800.0;
// AC7
constexpr double kRatioDifferenceKm = 100.0;
constexpr double kMinRatio = 10.0;
constexpr int kMinRatioPoints = 2;
constexpr double kMinReachGapKm = 150.0;
constexpr double kReachResolutionKm = 0.5;
// AC8
constexpr int kAuditConfigs = 500;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

Outcome FromSuite(const validation::SuiteReport& r) {
  std::string detail = r.summary;
  if (!r.passed && !r.failures.empty()) {
    absl::StrAppend(&detail, "; first failure: ", r.failures.front());
  }
  return {r.passed, detail};
}

cli::RunConfig TableOneConfig() {
  absl::StatusOr<cli::RunConfig> c =
      cli::LoadConfig(QCKA_CONFIG_DIR "/table1.json");
  if (!c.ok()) {
    std::fprintf(stderr, "cannot load table1.json: %s\n",
                 std::string(c.status().message()).c_str());
    std::exit(2);
  }
  return *c;
}

Outcome ConstraintIdentity() {
  const auto t0 = std::chrono::steady_clock::now();
  validation::ConstraintOptions o;
  o.draws = kConstraintDraws;
  o.tolerance = kConstraintTol;
  const validation::SuiteReport r = validation::RunConstraintSuite(o);
  const double s = Seconds(t0);
  Outcome out = FromSuite(r);
  absl::StrAppend(&out.detail, absl::StrFormat("; %.3f s (limit %.0f s)", s,
                                               kConstraintSeconds));
  out.passed = out.passed && s < kConstraintSeconds;
  return out;
}

Outcome ChannelAgreement() {
  return FromSuite(validation::RunChannelSuite({}));
}

Outcome BoundCoverage() {
  return FromSuite(validation::RunCoverageSuite({}));
}

Outcome DecoySoundness() { return FromSuite(validation::RunDecoySuite({})); }

Outcome Convergence() {
  // Short-distance point, each regime optimized on its own objective.
  const ChannelParams ch = DefaultFiberChannel(0.0, 50.0);
  SecurityParams sec;
  sec.total_rounds = kConvergenceRounds;
  OptimizationSpec spec;
  spec.objective = Objective::kFinite;
  const absl::StatusOr<OptimizationResult> finite = Optimize(spec, ch, sec);
  spec.objective = Objective::kAsymptotic;
  const absl::StatusOr<OptimizationResult> asym = Optimize(spec, ch, sec);
  if (!finite.ok() || !asym.ok()) {
    return {false, "optimization failed"};
  }
  const double ratio = finite->value / asym->value;
  bool passed = asym->value > 0.0 && ratio >= 1.0 - kConvergenceSlack &&
                ratio <= 1.0 + kFiniteAboveAsymptoticRel;

  // l/N <= R on random configurations and round counts.
  std::mt19937_64 rng(5);
  int checked = 0;
  int violations = 0;
  double worst = 0.0;
  for (int c = 0; c < kFiniteVsAsymptoticConfigs; ++c) {
    const SourceParams src = validation::RandomSource(rng);
    const ChannelParams rc = validation::RandomChannel(rng, 150.0);
    const absl::StatusOr<AsymptoticResult> r = AsymptoticRate(src, rc);
    if (!r.ok()) continue;
    for (double n = 1e6; n <= 1e18; n *= 100) {
      SecurityParams s;
      s.total_rounds = n;
      const absl::StatusOr<FiniteKeyResult> f = ExpectedKeyLength(src, rc, s);
      if (!f.ok()) continue;
      ++checked;
      const double excess = f->key_length / n - r->rate;
      if (excess > kFiniteAboveAsymptoticRel * r->rate) {
        ++violations;
        worst = std::max(worst, excess / std::max(r->rate, 1e-300));
      }
    }
  }
  passed = passed && violations == 0 && checked > 0;
  return {passed,
          absl::StrFormat("0/50 km, N=%g: l/N=%.6g, R=%.6g, ratio %.4f "
                          "(need >= %.2f); l/N <= R(1+%g) on %d points, "
                          "%d violations (worst rel excess %.3g)",
                          kConvergenceRounds, finite->value, asym->value,
                          ratio, 1.0 - kConvergenceSlack,
                          kFiniteAboveAsymptoticRel, checked, violations,
                          worst)};
}

struct ProtocolScans {
  std::vector<ScanRow> asymmetric;
  std::vector<ScanRow> symmetric;
};

absl::StatusOr<ProtocolScans> ScanBoth(const cli::RunConfig& config,
                                       const std::vector<double>& totals,
                                       double length_difference_km) {
  OptimizationSpec spec = config.optimization;
  spec.objective = Objective::kFinite;
  ProtocolScans out;
  spec.symmetric = false;
  absl::StatusOr<std::vector<ScanRow>> a =
      Scan(spec, config.channel, totals, length_difference_km,
           config.security);
  if (!a.ok()) return a.status();
  spec.symmetric = true;
  absl::StatusOr<std::vector<ScanRow>> s =
      Scan(spec, config.channel, totals, length_difference_km,
           config.security);
  if (!s.ok()) return s.status();
  out.asymmetric = *std::move(a);
  out.symmetric = *std::move(s);
  return out;
}

Outcome FigureOrdering() {
  const cli::RunConfig config = TableOneConfig();
  const auto t0 = std::chrono::steady_clock::now();
  const absl::StatusOr<ProtocolScans> scans =
      ScanBoth(config, config.grid.totals_km,
               config.grid.length_difference_km);
  const double s = Seconds(t0);
  if (!scans.ok()) return {false, std::string(scans.status().message())};
  int compared = 0;
  std::string violations;
  double last_asym = 0.0;
  double last_sym = 0.0;
  for (std::size_t i = 0; i < scans->asymmetric.size(); ++i) {
    const double a = scans->asymmetric[i].result.value;
    const double b = scans->symmetric[i].result.value;
    if (a > 0.0) last_asym = scans->asymmetric[i].total_km;
    if (b > 0.0) last_sym = scans->symmetric[i].total_km;
    if (a <= 0.0 && b <= 0.0) continue;
    ++compared;
    if (a < b) {
      absl::StrAppend(&violations, absl::StrFormat(" L=%g (%.4g < %.4g)",
                                                   scans->asymmetric[i].total_km,
                                                   a, b));
    }
  }
  const bool passed = violations.empty() && compared > 0 && s < kScanSeconds;
  return {passed,
          absl::StrFormat("%d grid points, %d compared, "
                          "asymmetric >= symmetric %s; last positive total "
                          "%g km vs %g km; %.1f s (limit %.0f s)",
                          static_cast<int>(config.grid.totals_km.size()),
                          compared,
                          violations.empty() ? "everywhere"
                                             : "violated at" + violations,
                          last_asym, last_sym, s, kScanSeconds)};
}

// Largest total distance with a positive optimized rate, located on the grid
// and refined by bisection between the last positive and first zero point.
double Reach(const std::vector<ScanRow>& rows, const cli::RunConfig& config,
             bool symmetric, double length_difference_km) {
  int last = -1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].result.value > 0.0) last = static_cast<int>(i);
  }
  if (last < 0) return 0.0;
  if (last + 1 == static_cast<int>(rows.size())) return rows[last].total_km;
  OptimizationSpec spec = config.optimization;
  spec.objective = Objective::kFinite;
  spec.symmetric = symmetric;
  double lo = rows[last].total_km;
  double hi = rows[last + 1].total_km;
  SourceParams warm = rows[last].result.best;
  while (hi - lo > kReachResolutionKm) {
    const double mid = 0.5 * (lo + hi);
    ChannelParams ch = config.channel;
    ch.length_a_km = (mid - length_difference_km) / 2.0;
    ch.length_b_km = (mid + length_difference_km) / 2.0;
    const absl::StatusOr<OptimizationResult> r =
        Optimize(spec, ch, config.security, warm);
    if (r.ok() && r->value > 0.0) {
      lo = mid;
      warm = r->best;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Outcome RatioClaim() {
  const cli::RunConfig config = TableOneConfig();
  std::vector<double> totals;
  for (double l = kRatioDifferenceKm; l <= 800.0; l += 25.0) {
    totals.push_back(l);
  }
  const absl::StatusOr<ProtocolScans> scans =
      ScanBoth(config, totals, kRatioDifferenceKm);
  if (!scans.ok()) return {false, std::string(scans.status().message())};

  // Longest run of consecutive grid points where both rates are positive
  // and the ratio reaches kMinRatio.
  int run = 0;
  int best_run = 0;
  double run_start = 0.0;
  double best_from = 0.0;
  double best_to = 0.0;
  double min_ratio_in_best = 0.0;
  double min_ratio = 0.0;
  for (std::size_t i = 0; i < totals.size(); ++i) {
    const double a = scans->asymmetric[i].result.value;
    const double b = scans->symmetric[i].result.value;
    if (a > 0.0 && b > 0.0 && a / b >= kMinRatio) {
      if (run == 0) {
        run_start = totals[i];
        min_ratio = a / b;
      }
      ++run;
      min_ratio = std::min(min_ratio, a / b);
      if (run > best_run) {
        best_run = run;
        best_from = run_start;
        best_to = totals[i];
        min_ratio_in_best = min_ratio;
      }
    } else {
      run = 0;
    }
  }
  const double reach_asym =
      Reach(scans->asymmetric, config, false, kRatioDifferenceKm);
  const double reach_sym =
      Reach(scans->symmetric, config, true, kRatioDifferenceKm);
  const double gap = reach_asym - reach_sym;
  const bool passed = best_run >= kMinRatioPoints && gap >= kMinReachGapKm;
  return {passed,
          absl::StrFormat("ratio >= %g on %d consecutive points "
                          "(%g-%g km, min %.1f; need >= %d points); reach "
                          "%.1f km vs %.1f km, gap %.1f km (need >= %g)",
                          kMinRatio, best_run, best_from,
                          best_to, min_ratio_in_best, kMinRatioPoints,
                          reach_asym, reach_sym, gap, kMinReachGapKm)};
}

Outcome BudgetAudit() {
  std::mt19937_64 rng(8);
  int calls = 0;
  int wrong = 0;
  for (int c = 0; c < kAuditConfigs; ++c) {
    const SourceParams src = validation::RandomSource(rng);
    const ChannelParams ch = validation::RandomChannel(rng, 200.0);
    SecurityParams sec;
    sec.total_rounds = std::pow(10.0, 8 + c % 11);
    std::vector<absl::StatusOr<FiniteKeyResult>> results;
    results.push_back(ExpectedKeyLength(src, ch, sec));
    absl::StatusOr<ObservedCounts> counts = SampleCounts(src, ch, sec, c);
    if (counts.ok()) {
      results.push_back(KeyLength(*counts, src, sec, ch.ec_efficiency));
    }
    for (const absl::StatusOr<FiniteKeyResult>& r : results) {
      ++calls;
      if (!r.ok() || r->variant_uses != BoundBudget::kVariantUses ||
          r->chernoff_uses != BoundBudget::kChernoffUses ||
          r->sampling_uses != BoundBudget::kSamplingUses) {
        ++wrong;
      }
    }
  }
  // The runtime audit must reject a tally that is off by one.
  BoundUseCounter extra;
  for (int i = 0; i < BoundBudget::kVariantUses + 1; ++i) {
    (void)extra.VariantLower(100.0, 1e-3);
  }
  for (int i = 0; i < BoundBudget::kChernoffUses; ++i) {
    (void)extra.ChernoffLower(100.0, 1e-3);
  }
  (void)extra.Sampling(100.0, 100.0, 0.1, 1e-3);
  const bool rejects = !extra.Audit().ok();
  return {wrong == 0 && rejects,
          absl::StrFormat("%d key-length calls, %d with a tally other than "
                          "%d/%d/%d; off-by-one tally %s",
                          calls, wrong, BoundBudget::kVariantUses,
                          BoundBudget::kChernoffUses, BoundBudget::kSamplingUses,
                          rejects ? "rejected" : "accepted")};
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome Reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qcka_acceptance_ac9";
  fs::remove_all(dir);
  fs::create_directories(dir);

  // A reduced config so the validate run stays short.
  nlohmann::ordered_json config;
  {
    std::ifstream in(QCKA_CONFIG_DIR "/table1.json");
    config = nlohmann::ordered_json::parse(in, nullptr, false);
  }
  if (config.is_discarded()) return {false, "cannot parse table1.json"};
  config["optimization"]["multistart"] = 2;
  config["grid"] = {{"totals_km", {100, 200, 300}},
                    {"length_difference_km", 50}};
  config["validation"] = {
      {"constraint", {{"draws", 100}}},
      {"channel", {{"configs", 2}, {"trials_per_config", 200000}}},
      {"coverage", {{"trials", 5000}}},
      {"decoy", {{"configs", 5}, {"finite_trials", 2}}}};
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << config.dump(2);

  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"simulate", {"out.json", "out.json.counts.json"}},
      {"scan", {"out.csv", "out.csv.optima.json"}},
      {"validate", {"out.json"}},
  };
  std::vector<std::string> notes;
  bool passed = true;
  for (const auto& [command, files] : runs) {
    std::string detail;
    std::vector<std::string> first;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / absl::StrCat(command, rep);
      fs::create_directories(out);
      const std::string cmd = absl::StrCat(
          "'", QCKA_TOOL, "' ", command, " --config '", cfg.string(),
          "' --seed 42 --out '", (out / files.front()).string(),
          "' 2>/dev/null");
      const int status = std::system(cmd.c_str());
      if (status != 0) {
        passed = false;
        absl::StrAppend(&detail, command, " exited with status ", status,
                        "; ");
      }
      for (std::size_t f = 0; f < files.size(); ++f) {
        const std::string contents = ReadFile(out / files[f]);
        if (rep == 0) {
          first.push_back(contents);
          if (contents.empty()) {
            passed = false;
            absl::StrAppend(&detail, command, " wrote no ", files[f], "; ");
          }
        } else if (contents != first[f]) {
          passed = false;
          absl::StrAppend(&detail, command, " ", files[f], " differs; ");
        }
      }
    }
    if (detail.empty()) {
      detail = absl::StrCat(command, ": ", files.size(), " file(s) identical");
    }
    notes.push_back(detail);
  }
  fs::remove_all(dir);
  return {passed, absl::StrCat("seed 42, two runs each; ",
                               absl::StrJoin(notes, "; "))};
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace qcka

int main(int argc, char** argv) {
  using qcka::Criterion;
  const std::vector<Criterion> criteria = {
      {"AC1", "constraint identity", qcka::ConstraintIdentity},
      {"AC2", "channel oracle agreement", qcka::ChannelAgreement},
      {"AC3", "bound coverage", qcka::BoundCoverage},
      {"AC4", "decoy soundness", qcka::DecoySoundness},
      {"AC5", "finite-to-asymptotic convergence", qcka::Convergence},
      {"AC6", "rate ordering, dL=50 km", qcka::FigureOrdering},
      {"AC7", "ratio and reach, dL=100 km", qcka::RatioClaim},
      {"AC8", "failure-budget audit", qcka::BudgetAudit},
      {"AC9", "reproducibility", qcka::Reproducibility},
  };
  std::vector<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (absl::StartsWith(arg, "--only=")) {
      only = absl::StrSplit(arg.substr(7), ',', absl::SkipEmpty());
    } else {
      std::fprintf(stderr, "usage: %s [--only=AC1,AC2,...]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), c.id) == only.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const qcka::Outcome o = c.run();
    std::printf("%s %s %s: %s [%.1f s]\n", c.id, o.passed ? "PASS" : "FAIL",
                c.title, o.detail.c_str(), qcka::Seconds(t0));
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
