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


#include "qcka/cli/commands.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <iterator>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "qcka/asymptotic.h"
#include "qcka/channel.h"
#include "qcka/finite_key.h"
#include "qcka/optimizer.h"
#include "qcka/status_macros.h"

namespace qcka::cli {
namespace {

using Json = nlohmann::ordered_json;

CommandOutput Failure(int code, std::string message) {
  CommandOutput out;
  out.exit_code = code;
  out.log.push_back(std::move(message));
  return out;
}

CommandOutput ConfigFailure(absl::string_view what) {
  return Failure(kExitConfigError, absl::StrCat("config error: ", what));
}

CommandOutput NumericFailure(const absl::Status& status) {
  return Failure(kExitNumericError,
                 absl::StrCat("numerical domain failure: ", status.message()));
}

std::string Dump(const Json& json) { return json.dump(2) + "\n"; }

const char* IntensityKey(Intensity k) {
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

Json TableJson(const PairTable<double>& t) {
  Json out = Json::object();
  for (Intensity a : kAllIntensities) {
    for (Intensity b : kAllIntensities) {
      out[IntensityKey(a)][IntensityKey(b)] = t(a, b);
    }
  }
  return out;
}

Json SourceJson(const SourceParams& s) {
  return {{"mu_a", s.mu_a},   {"mu_b", s.mu_b},   {"nu_a", s.nu_a},
          {"nu_b", s.nu_b},   {"t_a", s.t_a},     {"t_b", s.t_b},
          {"p_za", s.p_za},   {"p_zb", s.p_zb},   {"p_0a", s.p_0a},
          {"p_0b", s.p_0b},   {"p_nua", s.p_nua}, {"p_nub", s.p_nub},
          {"delta", s.delta}, {"q_z", s.q_z}};
}

Json ChannelJson(const ChannelParams& c) {
  return {{"length_a_km", c.length_a_km},
          {"length_b_km", c.length_b_km},
          {"attenuation_db_per_km", c.attenuation_db_per_km},
          {"detector_efficiency", c.detector_efficiency},
          {"dark_count_prob", c.dark_count_prob},
          {"misalignment_x", c.misalignment_x},
          {"ec_efficiency", c.ec_efficiency},
          {"phase_offset", c.phase_offset}};
}

Json SecurityJson(const SecurityParams& s) {
  return {{"total_rounds", s.total_rounds},
          {"eps_sec", s.eps_sec},
          {"eps_cor", s.eps_cor}};
}

Json YieldsJson(const DecoyYields& y) {
  return {{"y0", y.y0},   {"y10", y.y10},         {"y01", y.y01},
          {"y1", y.y1},   {"y10_raw", y.y10_raw}, {"y01_raw", y.y01_raw}};
}

Json AsymptoticJson(const AsymptoticResult& r) {
  return {{"rate", r.rate},
          {"rate_raw", r.rate_raw},
          {"z", YieldsJson(r.z)},
          {"x", YieldsJson(r.x)},
          {"e1ph", r.e1ph},
          {"e1ph_raw", r.e1ph_raw},
          {"phase_bound_defined", r.phase_bound_defined},
          {"q_z", r.q_z},
          {"e_z", r.e_z},
          {"xi_ec", r.xi_ec},
          {"vacuum_rate", r.vacuum_rate},
          {"single_rate", r.single_rate}};
}

Json SingleJson(const SinglePhotonEstimate& s) {
  return {{"s10_expected_low", s.s10_expected_low},
          {"s01_expected_low", s.s01_expected_low},
          {"expected_low", s.expected_low},
          {"observed_low", s.observed_low}};
}

Json FiniteJson(const FiniteKeyResult& r, double total_rounds) {
  return {{"key_length", r.key_length},
          {"key_length_raw", r.key_length_raw},
          {"rate", r.key_length / total_rounds},
          {"s0z",
           {{"expected_low", r.s0z.expected_low},
            {"observed_low", r.s0z.observed_low}}},
          {"s1z", SingleJson(r.s1z)},
          {"s1pm", SingleJson(r.s1pm)},
          {"t_pm",
           {{"t0_expected_low", r.t_pm.t0_expected_low},
            {"t0_observed_low", r.t_pm.t0_observed_low},
            {"t1_observed_up", r.t_pm.t1_observed_up}}},
          {"e1ph_up", r.e1ph_up},
          {"phase_bound_defined", r.phase_bound_defined},
          {"lambda_ec", r.lambda_ec},
          {"p_pm", r.p_pm},
          {"bound_uses",
           {{"variant", r.variant_uses},
            {"chernoff", r.chernoff_uses},
            {"sampling", r.sampling_uses}}}};
}

Json CountsJson(const ObservedCounts& c) {
  return {{"announced", TableJson(c.announced)},
          {"z_clicks", TableJson(c.z_clicks)},
          {"x_clicks", TableJson(c.x_clicks)},
          {"z_block", c.z_block},
          {"z_error_rate", c.z_error_rate},
          {"pm_clicks", c.pm_clicks},
          {"pm_errors", c.pm_errors}};
}

Json SummaryJson(const PointSummary& s) {
  return {{"rate", s.rate},
          {"key_length", s.key_length},
          {"e1ph", s.e1ph},
          {"s1z", s.s1z},
          {"s0z", s.s0z}};
}

PointSummary FromAsymptotic(const AsymptoticResult& r, double total_rounds) {
  return {r.rate, total_rounds * r.rate, r.e1ph,
          total_rounds * r.single_rate, total_rounds * r.vacuum_rate};
}

PointSummary FromFinite(const FiniteKeyResult& r, double total_rounds) {
  return {r.key_length / total_rounds, r.key_length, r.e1ph_up,
          r.s1z.observed_low, r.s0z.observed_low};
}

Protocol ProtocolOf(const RunConfig& config) {
  return config.protocol.value_or(Protocol::kAsymmetric);
}

absl::StatusOr<SourceParams> ResolveSource(const RunConfig& config) {
  if (!config.source) {
    return absl::InvalidArgumentError("the config has no source section");
  }
  if (ProtocolOf(config) == Protocol::kSymmetric) {
    return Symmetrized(*config.source);
  }
  return *config.source;
}

Json ReportHeader(absl::string_view command, const RunConfig& config,
                  const SourceParams& src) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"protocol", ProtocolName(ProtocolOf(config))},
          {"regime", RegimeName(config.regime)},
          {"source", SourceJson(src)},
          {"channel", ChannelJson(config.channel)},
          {"security", SecurityJson(config.security)}};
}

void AppendCsvRow(std::string& csv, const ScanRow& row, Protocol protocol,
                  Regime regime, const PointSummary& s) {
  absl::StrAppend(&csv, FormatDouble(row.total_km), ",",
                  FormatDouble(row.length_a_km), ",",
                  FormatDouble(row.length_b_km), ",", ProtocolName(protocol),
                  ",", RegimeName(regime), ",", FormatDouble(s.rate), ",",
                  FormatDouble(s.key_length), ",", FormatDouble(s.e1ph), ",",
                  FormatDouble(s.s1z), ",", FormatDouble(s.s0z), "\n");
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

}  // namespace

absl::Status ApplyOverrides(const Overrides& overrides, RunConfig& config) {
  if (overrides.output) config.output = *overrides.output;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.protocol) config.protocol = *overrides.protocol;
  if (overrides.regime) config.regime = *overrides.regime;
  if (overrides.suites) {
    for (const std::string& name : *overrides.suites) {
      if (std::find(std::begin(kSuiteNames), std::end(kSuiteNames), name) ==
          std::end(kSuiteNames)) {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown suite '", name, "'"));
      }
    }
    config.validation.suites = *overrides.suites;
  }
  return absl::OkStatus();
}

std::string FormatDouble(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

ChannelParams GridChannel(const ChannelParams& base, double total_km,
                          double length_difference_km) {
  ChannelParams ch = base;
  ch.length_a_km = (total_km - length_difference_km) / 2.0;
  ch.length_b_km = (total_km + length_difference_km) / 2.0;
  return ch;
}

absl::StatusOr<PointSummary> SummarizePoint(Regime regime,
                                            const SourceParams& src,
                                            const ChannelParams& ch,
                                            const SecurityParams& sec) {
  if (EmitsVacuumOnly(src)) return PointSummary{};
  if (regime == Regime::kAsymptotic) {
    QCKA_ASSIGN_OR_RETURN(const AsymptoticResult r, AsymptoticRate(src, ch));
    return FromAsymptotic(r, sec.total_rounds);
  }
  QCKA_ASSIGN_OR_RETURN(const FiniteKeyResult r,
                        ExpectedKeyLength(src, ch, sec));
  return FromFinite(r, sec.total_rounds);
}

CommandOutput RunRate(const RunConfig& config) {
  absl::StatusOr<SourceParams> src = ResolveSource(config);
  if (!src.ok()) return ConfigFailure(src.status().message());
  if (config.regime == Regime::kFinite && config.security.total_rounds < 1.0) {
    return ConfigFailure("the finite regime needs security.total_rounds >= 1");
  }

  Json report = ReportHeader("rate", config, *src);
  PointSummary summary;
  if (EmitsVacuumOnly(*src)) {
    report["note"] = "the source emits vacuum only; no key";
  } else if (config.regime == Regime::kAsymptotic) {
    absl::StatusOr<AsymptoticResult> r = AsymptoticRate(*src, config.channel);
    if (!r.ok()) return NumericFailure(r.status());
    summary = FromAsymptotic(*r, config.security.total_rounds);
    report["asymptotic"] = AsymptoticJson(*r);
  } else {
    absl::StatusOr<FiniteKeyResult> r =
        ExpectedKeyLength(*src, config.channel, config.security);
    if (!r.ok()) return NumericFailure(r.status());
    summary = FromFinite(*r, config.security.total_rounds);
    report["finite"] = FiniteJson(*r, config.security.total_rounds);
  }
  report["result"] = SummaryJson(summary);

  CommandOutput out;
  out.artifacts.push_back({config.output, Dump(report)});
  return out;
}

CommandOutput RunScan(const RunConfig& config) {
  if (config.regime == Regime::kFinite && config.security.total_rounds < 1.0) {
    return ConfigFailure("the finite regime needs security.total_rounds >= 1");
  }
  std::vector<Protocol> protocols = {Protocol::kAsymmetric,
                                     Protocol::kSymmetric};
  if (config.protocol) protocols = {*config.protocol};

  OptimizationSpec spec = config.optimization;
  spec.objective = config.regime == Regime::kAsymptotic ? Objective::kAsymptotic
                                                        : Objective::kFinite;
  const GridSpec& grid = config.grid;
  CommandOutput out;

  std::vector<std::vector<ScanRow>> scans;
  for (Protocol protocol : protocols) {
    spec.symmetric = protocol == Protocol::kSymmetric;
    const auto start = std::chrono::steady_clock::now();
    absl::StatusOr<std::vector<ScanRow>> rows =
        Scan(spec, config.channel, grid.totals_km, grid.length_difference_km,
             config.security);
    if (!rows.ok()) return NumericFailure(rows.status());
    out.log.push_back(absl::StrFormat("%s: %d grid points in %.1f s",
                                      ProtocolName(protocol), rows->size(),
                                      Seconds(start)));
    for (const ScanRow& row : *rows) {
      if (row.rate_increased) {
        out.log.push_back(absl::StrFormat(
            "note: %s rate rises at L=%g km (dark-count tail or optimizer "
            "miss)",
            ProtocolName(protocol), row.total_km));
      }
    }
    scans.push_back(*std::move(rows));
  }

  std::string csv = absl::StrCat(kScanHeader, "\n");
  Json optima = {{"schema_version", kSchemaVersion},
                 {"regime", RegimeName(config.regime)},
                 {"length_difference_km", grid.length_difference_km},
                 {"channel", ChannelJson(config.channel)},
                 {"security", SecurityJson(config.security)},
                 {"rows", Json::array()}};
  for (std::size_t i = 0; i < grid.totals_km.size(); ++i) {
    for (std::size_t p = 0; p < protocols.size(); ++p) {
      const ScanRow& row = scans[p][i];
      PointSummary summary;
      if (row.result.feasible) {
        absl::StatusOr<PointSummary> s = SummarizePoint(
            config.regime, row.result.best,
            GridChannel(config.channel, row.total_km,
                        grid.length_difference_km),
            config.security);
        if (!s.ok()) return NumericFailure(s.status());
        summary = *s;
      }
      AppendCsvRow(csv, row, protocols[p], config.regime, summary);
      Json entry = {{"L_total_km", row.total_km},
                    {"protocol", ProtocolName(protocols[p])},
                    {"feasible", row.result.feasible}};
      if (row.result.feasible) entry["source"] = SourceJson(row.result.best);
      optima["rows"].push_back(std::move(entry));
    }
  }

  out.artifacts.push_back({config.output, csv});
  if (!config.output.empty()) {
    out.artifacts.push_back(
        {absl::StrCat(config.output, ".optima.json"), Dump(optima)});
  }
  return out;
}

CommandOutput RunSimulate(const RunConfig& config) {
  absl::StatusOr<SourceParams> src = ResolveSource(config);
  if (!src.ok()) return ConfigFailure(src.status().message());
  const std::uint64_t seed = config.seed.value_or(1);
  const SecurityParams& sec = config.security;

  Json report = ReportHeader("simulate", config, *src);
  report["regime"] = "finite";
  report["seed"] = seed;
  ObservedCounts counts;
  if (sec.total_rounds == 0.0 || EmitsVacuumOnly(*src)) {
    // Nothing is sent or nothing can be detected from the senders: no key.
    if (sec.total_rounds > 0.0) {
      counts = ExpectedCounts(*src, config.channel, sec);
    }
    report["note"] = "no rounds or vacuum-only source; no key";
    report["result"] = SummaryJson(PointSummary{});
  } else {
    absl::StatusOr<ObservedCounts> sampled =
        SampleCounts(*src, config.channel, sec, seed);
    if (!sampled.ok()) return NumericFailure(sampled.status());
    counts = *sampled;
    absl::StatusOr<FiniteKeyResult> key =
        KeyLength(counts, *src, sec, config.channel.ec_efficiency);
    if (!key.ok()) return NumericFailure(key.status());
    absl::StatusOr<FiniteKeyResult> expected =
        ExpectedKeyLength(*src, config.channel, sec);
    if (!expected.ok()) return NumericFailure(expected.status());
    report["result"] = SummaryJson(FromFinite(*key, sec.total_rounds));
    report["sampled"] = FiniteJson(*key, sec.total_rounds);
    report["expected"] = FiniteJson(*expected, sec.total_rounds);
  }
  Json counts_json = {{"schema_version", kSchemaVersion},
                      {"seed", seed},
                      {"total_rounds", sec.total_rounds},
                      {"counts", CountsJson(counts)}};
  report["counts"] = counts_json["counts"];

  CommandOutput out;
  out.artifacts.push_back({config.output, Dump(report)});
  if (!config.output.empty()) {
    out.artifacts.push_back(
        {absl::StrCat(config.output, ".counts.json"), Dump(counts_json)});
  }
  return out;
}

CommandOutput RunValidate(const RunConfig& config,
                          const validation::BoundFunctions& bounds) {
  ValidationSpec v = config.validation;
  v.coverage.bounds = bounds;
  if (config.seed) {
    v.constraint.seed = *config.seed;
    v.channel.seed = *config.seed + 1;
    v.coverage.seed = *config.seed + 2;
    v.decoy.seed = *config.seed + 3;
  }

  CommandOutput out;
  Json report = {{"schema_version", kSchemaVersion},
                 {"command", "validate"},
                 {"suites", Json::array()}};
  if (v.suites.empty()) {
    out.log.push_back("warning: no suites selected; nothing to check");
  }
  bool passed = true;
  std::string first_failure;
  for (const std::string& name : v.suites) {
    const auto start = std::chrono::steady_clock::now();
    validation::SuiteReport r;
    if (name == "constraint") {
      r = validation::RunConstraintSuite(v.constraint);
    } else if (name == "channel") {
      r = validation::RunChannelSuite(v.channel);
    } else if (name == "coverage") {
      r = validation::RunCoverageSuite(v.coverage);
    } else if (name == "decoy") {
      r = validation::RunDecoySuite(v.decoy);
    } else {
      return ConfigFailure(absl::StrCat("unknown suite '", name, "'"));
    }
    out.log.push_back(absl::StrFormat("%s: %s, %d checks, %s (%.1f s)", name,
                                      r.passed ? "pass" : "FAIL", r.checks,
                                      r.summary, Seconds(start)));
    for (const std::string& f : r.failures) {
      out.log.push_back(absl::StrCat("  ", f));
    }
    if (!r.passed && passed) {
      passed = false;
      first_failure = absl::StrCat(
          name, ": ", r.failures.empty() ? r.summary : r.failures.front());
    }
    report["suites"].push_back({{"name", name},
                                {"passed", r.passed},
                                {"checks", r.checks},
                                {"failure_count", r.failure_count},
                                {"failures", r.failures},
                                {"summary", r.summary}});
  }
  report["passed"] = passed;
  out.artifacts.push_back({config.output, Dump(report)});
  if (!passed) {
    out.exit_code = kExitValidationFailed;
    out.log.push_back(absl::StrCat("validation failed: ", first_failure));
  }
  return out;
}

}  // namespace qcka::cli
