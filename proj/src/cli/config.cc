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


#include "qcka/cli/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <numbers>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "qcka/status_macros.h"

namespace qcka::cli {
namespace {

using Json = nlohmann::json;

absl::Status ConfigError(absl::string_view path, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(path, ": ", what));
}

// Typed access to one JSON object; remembers its key path for messages.
class Section {
 public:
  Section(const Json& json, std::string path)
      : json_(json), path_(std::move(path)) {}

  absl::Status RequireObject() const {
    if (!json_.is_object()) return ConfigError(path_, "expected an object");
    return absl::OkStatus();
  }

  absl::Status AllowOnly(std::initializer_list<absl::string_view> keys) const {
    for (const auto& [key, value] : json_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        return ConfigError(Path(key), "unknown key");
      }
    }
    return absl::OkStatus();
  }

  bool Has(absl::string_view key) const { return json_.contains(key); }

  std::string Path(absl::string_view key) const {
    return path_.empty() ? std::string(key) : absl::StrCat(path_, ".", key);
  }

  absl::Status Number(absl::string_view key, double& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = json_.at(key);
    if (!v.is_number()) return ConfigError(Path(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) return ConfigError(Path(key), "not finite");
    return absl::OkStatus();
  }

  absl::Status RequiredNumber(absl::string_view key, double& out) const {
    if (!Has(key)) return ConfigError(Path(key), "missing");
    return Number(key, out);
  }

  absl::Status Int(absl::string_view key, int min_value, int& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = json_.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < min_value ||
        v.get<std::int64_t>() > 2'000'000'000) {
      return ConfigError(Path(key),
                         absl::StrCat("expected an integer >= ", min_value));
    }
    out = v.get<int>();
    return absl::OkStatus();
  }

  absl::Status Int64(absl::string_view key, std::int64_t min_value,
                     std::int64_t& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = json_.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < min_value) {
      return ConfigError(Path(key),
                         absl::StrCat("expected an integer >= ", min_value));
    }
    out = v.get<std::int64_t>();
    return absl::OkStatus();
  }

  absl::Status Seed(absl::string_view key, std::uint64_t& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = json_.at(key);
    if (!v.is_number_unsigned()) {
      return ConfigError(Path(key), "expected a non-negative integer");
    }
    out = v.get<std::uint64_t>();
    return absl::OkStatus();
  }

  absl::Status String(absl::string_view key, std::string& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = json_.at(key);
    if (!v.is_string()) return ConfigError(Path(key), "expected a string");
    out = v.get<std::string>();
    return absl::OkStatus();
  }

  absl::Status Numbers(absl::string_view key, std::vector<double>& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = json_.at(key);
    if (!v.is_array()) return ConfigError(Path(key), "expected an array");
    out.clear();
    for (const Json& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        return ConfigError(Path(key), "expected finite numbers");
      }
      out.push_back(x.get<double>());
    }
    return absl::OkStatus();
  }

  absl::Status Strings(absl::string_view key,
                       std::vector<std::string>& out) const {
    if (!Has(key)) return absl::OkStatus();
    const Json& v = json_.at(key);
    if (!v.is_array()) return ConfigError(Path(key), "expected an array");
    out.clear();
    for (const Json& x : v) {
      if (!x.is_string()) return ConfigError(Path(key), "expected strings");
      out.push_back(x.get<std::string>());
    }
    return absl::OkStatus();
  }

  absl::Status Box(absl::string_view key, qcka::Box& out) const {
    std::vector<double> pair = {out.lower, out.upper};
    QCKA_RETURN_IF_ERROR(Numbers(key, pair));
    if (pair.size() != 2 || !(pair[0] < pair[1])) {
      return ConfigError(Path(key), "expected [lower, upper] with lower < upper");
    }
    out = {pair[0], pair[1]};
    return absl::OkStatus();
  }

  absl::StatusOr<std::optional<Section>> Child(absl::string_view key) const {
    if (!Has(key)) return std::optional<Section>();
    Section child(json_.at(key), Path(key));
    QCKA_RETURN_IF_ERROR(child.RequireObject());
    return std::optional<Section>(child);
  }

 private:
  const Json& json_;
  std::string path_;
};

absl::Status Wrap(absl::string_view path, const absl::Status& s) {
  if (s.ok()) return s;
  return ConfigError(path, s.message());
}

absl::Status ReadSource(const Section& s, RunConfig& config) {
  QCKA_RETURN_IF_ERROR(s.AllowOnly(
      {"mu_a", "mu_b", "nu_a", "nu_b", "t_a", "t_b", "p_za", "p_zb", "p_0a",
       "p_0b", "p_nua", "p_nub", "delta", "q_z"}));
  SourceParams src;
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("mu_a", src.mu_a));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("mu_b", src.mu_b));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("nu_a", src.nu_a));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("nu_b", src.nu_b));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("t_a", src.t_a));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("p_za", src.p_za));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("p_zb", src.p_zb));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("p_0a", src.p_0a));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("p_0b", src.p_0b));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("p_nua", src.p_nua));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("p_nub", src.p_nub));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("delta", src.delta));
  QCKA_RETURN_IF_ERROR(s.RequiredNumber("q_z", src.q_z));

  if (EmitsVacuumOnly(src)) {
    // Only the probabilities and geometry are meaningful; check them with
    // placeholder intensities.
    src.t_b = src.t_a;
    QCKA_RETURN_IF_ERROR(s.Number("t_b", src.t_b));
    SourceParams probe = src;
    probe.mu_a = probe.mu_b = 1.0;
    probe.nu_a = probe.nu_b = 0.5;
    QCKA_RETURN_IF_ERROR(Wrap("source", ValidateSourceRanges(probe)));
    config.source = src;
    return absl::OkStatus();
  }
  if (s.Has("t_b")) {
    QCKA_RETURN_IF_ERROR(s.Number("t_b", src.t_b));
  } else {
    absl::StatusOr<SourceParams> derived = WithConstrainedBobSending(src);
    if (!derived.ok()) return Wrap("source", derived.status());
    src = *derived;
  }
  QCKA_RETURN_IF_ERROR(Wrap("source", ValidateSourceParams(src)));
  config.source = src;
  return absl::OkStatus();
}

absl::Status ReadChannel(const Section& s, ChannelParams& ch) {
  QCKA_RETURN_IF_ERROR(s.AllowOnly(
      {"length_a_km", "length_b_km", "attenuation_db_per_km",
       "detector_efficiency", "dark_count_prob", "misalignment_x",
       "ec_efficiency", "phase_offset"}));
  QCKA_RETURN_IF_ERROR(s.Number("length_a_km", ch.length_a_km));
  QCKA_RETURN_IF_ERROR(s.Number("length_b_km", ch.length_b_km));
  QCKA_RETURN_IF_ERROR(
      s.Number("attenuation_db_per_km", ch.attenuation_db_per_km));
  QCKA_RETURN_IF_ERROR(s.Number("detector_efficiency", ch.detector_efficiency));
  QCKA_RETURN_IF_ERROR(s.Number("dark_count_prob", ch.dark_count_prob));
  QCKA_RETURN_IF_ERROR(s.Number("misalignment_x", ch.misalignment_x));
  QCKA_RETURN_IF_ERROR(s.Number("ec_efficiency", ch.ec_efficiency));
  QCKA_RETURN_IF_ERROR(s.Number("phase_offset", ch.phase_offset));
  return Wrap("channel", ValidateChannelParams(ch));
}

absl::Status ReadSecurity(const Section& s, SecurityParams& sec) {
  QCKA_RETURN_IF_ERROR(s.AllowOnly({"total_rounds", "eps_sec", "eps_cor"}));
  QCKA_RETURN_IF_ERROR(s.Number("total_rounds", sec.total_rounds));
  QCKA_RETURN_IF_ERROR(s.Number("eps_sec", sec.eps_sec));
  QCKA_RETURN_IF_ERROR(s.Number("eps_cor", sec.eps_cor));
  if (sec.total_rounds == 0.0) {
    SecurityParams probe = sec;
    probe.total_rounds = 1.0;
    return Wrap("security", ValidateSecurityParams(probe));
  }
  return Wrap("security", ValidateSecurityParams(sec));
}

absl::Status ReadOptimization(const Section& s, OptimizationSpec& spec) {
  QCKA_RETURN_IF_ERROR(s.AllowOnly({"multistart", "max_evals", "seed",
                                    "intensity_box", "probability_box",
                                    "delta_box"}));
  QCKA_RETURN_IF_ERROR(s.Int("multistart", 1, spec.multistart));
  QCKA_RETURN_IF_ERROR(s.Int("max_evals", 1, spec.max_evals));
  QCKA_RETURN_IF_ERROR(s.Seed("seed", spec.seed));
  QCKA_RETURN_IF_ERROR(s.Box("intensity_box", spec.boxes.intensity));
  QCKA_RETURN_IF_ERROR(s.Box("probability_box", spec.boxes.probability));
  QCKA_RETURN_IF_ERROR(s.Box("delta_box", spec.boxes.delta));
  const ParameterBoxes& b = spec.boxes;
  if (!(b.intensity.lower > 0.0) || !(b.probability.lower > 0.0) ||
      !(b.probability.upper < 1.0) || !(b.delta.lower > 0.0) ||
      !(b.delta.upper <= std::numbers::pi / 2)) {
    return ConfigError("optimization",
                       "boxes must keep intensities positive, probabilities "
                       "inside (0, 1) and delta inside (0, pi/2]");
  }
  return absl::OkStatus();
}

absl::Status ReadGrid(const Section& s, GridSpec& grid) {
  QCKA_RETURN_IF_ERROR(s.AllowOnly({"totals_km", "start_km", "stop_km",
                                    "points", "length_difference_km"}));
  QCKA_RETURN_IF_ERROR(
      s.Number("length_difference_km", grid.length_difference_km));
  const bool range = s.Has("start_km") || s.Has("stop_km") || s.Has("points");
  if (range && s.Has("totals_km")) {
    return ConfigError("grid", "give either totals_km or start/stop/points");
  }
  if (range) {
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
    QCKA_RETURN_IF_ERROR(s.RequiredNumber("start_km", start));
    QCKA_RETURN_IF_ERROR(s.RequiredNumber("stop_km", stop));
    if (!s.Has("points")) return ConfigError("grid.points", "missing");
    QCKA_RETURN_IF_ERROR(s.Int("points", 0, points));
    grid.totals_km.clear();
    for (int i = 0; i < points; ++i) {
      grid.totals_km.push_back(
          points == 1 ? start : start + (stop - start) * i / (points - 1));
    }
  } else {
    QCKA_RETURN_IF_ERROR(s.Numbers("totals_km", grid.totals_km));
  }
  for (double total : grid.totals_km) {
    if (total < std::abs(grid.length_difference_km)) {
      return ConfigError(
          "grid", absl::StrCat("total distance ", total,
                               " km is shorter than the length difference"));
    }
  }
  return absl::OkStatus();
}

absl::Status ReadValidation(const Section& s, ValidationSpec& v) {
  QCKA_RETURN_IF_ERROR(
      s.AllowOnly({"suites", "constraint", "channel", "coverage", "decoy"}));
  QCKA_RETURN_IF_ERROR(s.Strings("suites", v.suites));
  for (const std::string& name : v.suites) {
    if (std::find(std::begin(kSuiteNames), std::end(kSuiteNames), name) ==
        std::end(kSuiteNames)) {
      return ConfigError("validation.suites",
                         absl::StrCat("unknown suite '", name, "'"));
    }
  }
  QCKA_ASSIGN_OR_RETURN(auto constraint, s.Child("constraint"));
  if (constraint) {
    QCKA_RETURN_IF_ERROR(constraint->AllowOnly({"draws", "seed", "tolerance"}));
    QCKA_RETURN_IF_ERROR(constraint->Int("draws", 0, v.constraint.draws));
    QCKA_RETURN_IF_ERROR(constraint->Seed("seed", v.constraint.seed));
    QCKA_RETURN_IF_ERROR(
        constraint->Number("tolerance", v.constraint.tolerance));
  }
  QCKA_ASSIGN_OR_RETURN(auto channel, s.Child("channel"));
  if (channel) {
    QCKA_RETURN_IF_ERROR(
        channel->AllowOnly({"configs", "trials_per_config", "max_z_score",
                            "max_length_km", "seed"}));
    QCKA_RETURN_IF_ERROR(channel->Int("configs", 0, v.channel.configs));
    QCKA_RETURN_IF_ERROR(
        channel->Int64("trials_per_config", 10, v.channel.trials_per_config));
    QCKA_RETURN_IF_ERROR(channel->Number("max_z_score", v.channel.max_z_score));
    QCKA_RETURN_IF_ERROR(
        channel->Number("max_length_km", v.channel.max_length_km));
    QCKA_RETURN_IF_ERROR(channel->Seed("seed", v.channel.seed));
  }
  QCKA_ASSIGN_OR_RETURN(auto coverage, s.Child("coverage"));
  if (coverage) {
    QCKA_RETURN_IF_ERROR(coverage->AllowOnly({"eps", "trials", "seed"}));
    QCKA_RETURN_IF_ERROR(coverage->Numbers("eps", v.coverage.eps));
    QCKA_RETURN_IF_ERROR(coverage->Int("trials", 1, v.coverage.trials));
    QCKA_RETURN_IF_ERROR(coverage->Seed("seed", v.coverage.seed));
    for (double e : v.coverage.eps) {
      if (!(e > 0.0 && e < 1.0)) {
        return ConfigError("validation.coverage.eps", "values must be in (0, 1)");
      }
    }
  }
  QCKA_ASSIGN_OR_RETURN(auto decoy, s.Child("decoy"));
  if (decoy) {
    QCKA_RETURN_IF_ERROR(
        decoy->AllowOnly({"configs", "finite_trials", "finite_eps",
                          "total_rounds", "max_length_km", "seed"}));
    QCKA_RETURN_IF_ERROR(decoy->Int("configs", 0, v.decoy.configs));
    QCKA_RETURN_IF_ERROR(decoy->Int("finite_trials", 0, v.decoy.finite_trials));
    QCKA_RETURN_IF_ERROR(decoy->Number("finite_eps", v.decoy.finite_eps));
    QCKA_RETURN_IF_ERROR(decoy->Number("total_rounds", v.decoy.total_rounds));
    QCKA_RETURN_IF_ERROR(
        decoy->Number("max_length_km", v.decoy.max_length_km));
    QCKA_RETURN_IF_ERROR(decoy->Seed("seed", v.decoy.seed));
    if (!(v.decoy.finite_eps > 0.0 && v.decoy.finite_eps < 1.0 / 26.0)) {
      return ConfigError("validation.decoy.finite_eps",
                         "must be in (0, 1/26)");
    }
  }
  return absl::OkStatus();
}

absl::Status ReadRun(const Section& s, RunConfig& config) {
  QCKA_RETURN_IF_ERROR(s.AllowOnly({"protocol", "regime", "seed", "output"}));
  std::string name;
  if (s.Has("protocol")) {
    QCKA_RETURN_IF_ERROR(s.String("protocol", name));
    absl::StatusOr<Protocol> p = ParseProtocol(name);
    if (!p.ok()) return Wrap("run.protocol", p.status());
    config.protocol = *p;
  }
  if (s.Has("regime")) {
    QCKA_RETURN_IF_ERROR(s.String("regime", name));
    absl::StatusOr<Regime> r = ParseRegime(name);
    if (!r.ok()) return Wrap("run.regime", r.status());
    config.regime = *r;
  }
  if (s.Has("seed")) {
    std::uint64_t seed = 0;
    QCKA_RETURN_IF_ERROR(s.Seed("seed", seed));
    config.seed = seed;
  }
  return s.String("output", config.output);
}

}  // namespace

absl::StatusOr<Protocol> ParseProtocol(absl::string_view name) {
  if (name == "asymmetric") return Protocol::kAsymmetric;
  if (name == "symmetric") return Protocol::kSymmetric;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown protocol '", name, "'"));
}

absl::StatusOr<Regime> ParseRegime(absl::string_view name) {
  if (name == "asymptotic") return Regime::kAsymptotic;
  if (name == "finite") return Regime::kFinite;
  return absl::InvalidArgumentError(absl::StrCat("unknown regime '", name, "'"));
}

absl::string_view ProtocolName(Protocol p) {
  return p == Protocol::kSymmetric ? "symmetric" : "asymmetric";
}

absl::string_view RegimeName(Regime r) {
  return r == Regime::kAsymptotic ? "asymptotic" : "finite";
}

bool EmitsVacuumOnly(const SourceParams& src) {
  return src.mu_a == 0.0 && src.mu_b == 0.0 && src.nu_a == 0.0 &&
         src.nu_b == 0.0;
}

absl::StatusOr<SourceParams> Symmetrized(const SourceParams& src) {
  SourceParams out = src;
  out.mu_b = src.mu_a;
  out.nu_b = src.nu_a;
  out.p_zb = src.p_za;
  out.p_0b = src.p_0a;
  out.p_nub = src.p_nua;
  if (EmitsVacuumOnly(out)) {
    out.t_b = out.t_a;
    return out;
  }
  return WithConstrainedBobSending(out);
}

absl::StatusOr<RunConfig> ParseConfig(absl::string_view text) {
  Json json = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError("config is not valid JSON");
  }
  Section root(json, "");
  QCKA_RETURN_IF_ERROR(root.RequireObject());
  QCKA_RETURN_IF_ERROR(
      root.AllowOnly({"schema_version", "source", "channel", "security",
                      "optimization", "grid", "validation", "run"}));
  if (!json.contains("schema_version") ||
      !json["schema_version"].is_number_integer() ||
      json["schema_version"].get<int>() != kSchemaVersion) {
    return ConfigError("schema_version",
                       absl::StrCat("must be ", kSchemaVersion));
  }

  RunConfig config;
  QCKA_ASSIGN_OR_RETURN(auto source, root.Child("source"));
  if (source) QCKA_RETURN_IF_ERROR(ReadSource(*source, config));
  QCKA_ASSIGN_OR_RETURN(auto channel, root.Child("channel"));
  if (channel) QCKA_RETURN_IF_ERROR(ReadChannel(*channel, config.channel));
  QCKA_ASSIGN_OR_RETURN(auto security, root.Child("security"));
  if (security) QCKA_RETURN_IF_ERROR(ReadSecurity(*security, config.security));
  QCKA_ASSIGN_OR_RETURN(auto optimization, root.Child("optimization"));
  if (optimization) {
    QCKA_RETURN_IF_ERROR(ReadOptimization(*optimization, config.optimization));
  }
  QCKA_ASSIGN_OR_RETURN(auto grid, root.Child("grid"));
  if (grid) QCKA_RETURN_IF_ERROR(ReadGrid(*grid, config.grid));
  QCKA_ASSIGN_OR_RETURN(auto validation, root.Child("validation"));
  if (validation) {
    QCKA_RETURN_IF_ERROR(ReadValidation(*validation, config.validation));
  }
  QCKA_ASSIGN_OR_RETURN(auto run, root.Child("run"));
  if (run) QCKA_RETURN_IF_ERROR(ReadRun(*run, config));
  return config;
}

absl::StatusOr<RunConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::InvalidArgumentError(absl::StrCat("cannot read ", path));
  std::ostringstream text;
  text << in.rdbuf();
  absl::StatusOr<RunConfig> config = ParseConfig(text.str());
  if (!config.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

}  // namespace qcka::cli
