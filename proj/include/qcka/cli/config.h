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


// Run configuration for the command-line tool. A config is one JSON object
// with "schema_version": 1 and optional sections "source", "channel",
// "security", "optimization", "grid", "validation" and "run". Unknown keys
// are rejected at every level. See README.md for the full schema.

#ifndef QCKA_CLI_CONFIG_H_
#define QCKA_CLI_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "qcka/core.h"
#include "qcka/optimizer.h"
#include "qcka/validation/suites.h"

namespace qcka::cli {

inline constexpr int kSchemaVersion = 1;

enum class Protocol { kAsymmetric, kSymmetric };
enum class Regime { kAsymptotic, kFinite };

absl::StatusOr<Protocol> ParseProtocol(absl::string_view name);
absl::StatusOr<Regime> ParseRegime(absl::string_view name);
absl::string_view ProtocolName(Protocol p);
absl::string_view RegimeName(Regime r);

// Total distances to scan; L_b - L_a is fixed.
struct GridSpec {
  std::vector<double> totals_km;
  double length_difference_km = 50.0;
};

inline constexpr absl::string_view kSuiteNames[] = {"constraint", "channel",
                                                   "coverage", "decoy"};

struct ValidationSpec {
  std::vector<std::string> suites = {"constraint", "channel", "coverage",
                                     "decoy"};
  validation::ConstraintOptions constraint;
  validation::ChannelSuiteOptions channel;
  validation::CoverageOptions coverage;
  validation::DecoySuiteOptions decoy;
};

struct RunConfig {
  // Absent when the config has no "source" section. t_b is filled from the
  // intensity-ratio constraint when the config omits it.
  std::optional<SourceParams> source;
  ChannelParams channel;
  // total_rounds may be 0 here; commands that need data reject it.
  SecurityParams security;
  OptimizationSpec optimization;
  GridSpec grid;
  ValidationSpec validation;
  // Unset: rate and simulate use the asymmetric protocol, scan runs both.
  std::optional<Protocol> protocol;
  Regime regime = Regime::kFinite;
  // Unset: simulate uses 1 and validate keeps each suite's own seed.
  std::optional<std::uint64_t> seed;
  std::string output;  // empty: standard output
};

// All four intensities zero. Such a source is accepted and yields no key.
bool EmitsVacuumOnly(const SourceParams& src);

// Bob's settings copied from Alice's, t_b re-derived.
absl::StatusOr<SourceParams> Symmetrized(const SourceParams& src);

// Parses and validates a config. Every failure is InvalidArgument with the
// offending key path in the message.
absl::StatusOr<RunConfig> ParseConfig(absl::string_view text);
absl::StatusOr<RunConfig> LoadConfig(const std::string& path);

}  // namespace qcka::cli

#endif  // QCKA_CLI_CONFIG_H_
