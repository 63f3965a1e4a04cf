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


// The four commands of the `qcka` tool. Commands never touch the file
// system; they return the text of every file they produce and the caller
// writes it out.

#ifndef QCKA_CLI_COMMANDS_H_
#define QCKA_CLI_COMMANDS_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "qcka/cli/config.h"
#include "qcka/core.h"
#include "qcka/validation/suites.h"

namespace qcka::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitConfigError = 2,
  kExitNumericError = 3,
};

struct Artifact {
  std::string path;  // empty: standard output
  std::string contents;
};

struct CommandOutput {
  int exit_code = kExitOk;
  std::vector<Artifact> artifacts;
  // Progress notes, warnings and the error message on failure; for stderr.
  std::vector<std::string> log;
};

// Command-line values that take precedence over the config.
struct Overrides {
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<Protocol> protocol;
  std::optional<Regime> regime;
  std::optional<std::vector<std::string>> suites;
};

// Applies `overrides`; fails with InvalidArgument on an unknown suite name.
absl::Status ApplyOverrides(const Overrides& overrides, RunConfig& config);

// Shortest decimal string that parses back to the same double.
std::string FormatDouble(double x);

inline constexpr char kScanHeader[] =
    "L_total_km,L_a_km,L_b_km,protocol,regime,rate,key_length,e1ph,s1z,s0z";

// Headline numbers of one parameter point. In the finite regime these come
// from the key-length pipeline on expected counts (rate = l / N). In the
// asymptotic regime key_length is N R and s0z, s1z are N times the vacuum
// and single-photon key-event rates.
struct PointSummary {
  double rate = 0.0;
  double key_length = 0.0;
  double e1ph = 0.5;
  double s1z = 0.0;
  double s0z = 0.0;
};

absl::StatusOr<PointSummary> SummarizePoint(Regime regime,
                                            const SourceParams& src,
                                            const ChannelParams& ch,
                                            const SecurityParams& sec);

// Channel of one scan grid point: arms split so that L_b - L_a equals the
// configured difference.
ChannelParams GridChannel(const ChannelParams& base, double total_km,
                          double length_difference_km);

// Key rate and every intermediate quantity at the configured point.
CommandOutput RunRate(const RunConfig& config);

// Optimized rates over the distance grid as CSV, plus a JSON file with the
// optimum of every row next to it ("<out>.optima.json") when writing to a
// file.
CommandOutput RunScan(const RunConfig& config);

// One sampled data set through the finite-key pipeline. The report embeds
// the raw counts; with an output path they also go to "<out>.counts.json".
CommandOutput RunSimulate(const RunConfig& config);

// Runs the selected property suites. `bounds` replaces the bound functions
// checked by the coverage suite.
CommandOutput RunValidate(const RunConfig& config,
                          const validation::BoundFunctions& bounds = {});

}  // namespace qcka::cli

#endif  // QCKA_CLI_COMMANDS_H_
