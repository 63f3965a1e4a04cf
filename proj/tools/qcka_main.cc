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


// qcka: conference key rates for the tripartite sending-or-not-sending
// protocol over asymmetric channels.
//
//   qcka rate|scan|simulate|validate --config <path> [--out <path>]
//        [--seed <u64>] [--protocol asymmetric|symmetric]
//        [--regime asymptotic|finite]
//   qcka validate [--suites constraint,channel,coverage,decoy]
//
// Exit codes: 0 ok, 1 validation failed, 2 bad config or arguments,
// 3 numerical-domain failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_split.h"
#include "qcka/cli/commands.h"
#include "qcka/cli/config.h"

namespace {

using qcka::cli::CommandOutput;

struct Arguments {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  std::string protocol;
  std::string regime;
  std::string suites;
};

void AddCommonOptions(CLI::App& cmd, Arguments& args, bool config_required) {
  CLI::Option* config =
      cmd.add_option("--config", args.config_path, "JSON run config");
  if (config_required) config->required();
  cmd.add_option("--out", args.out, "output file (default: stdout)");
  cmd.add_option("--seed", args.seed, "random seed");
  cmd.add_option("--protocol", args.protocol, "asymmetric or symmetric")
      ->check(CLI::IsMember({"asymmetric", "symmetric"}));
  cmd.add_option("--regime", args.regime, "asymptotic or finite")
      ->check(CLI::IsMember({"asymptotic", "finite"}));
}

bool WriteArtifacts(const CommandOutput& out) {
  bool ok = true;
  for (const qcka::cli::Artifact& a : out.artifacts) {
    if (a.path.empty()) {
      std::cout << a.contents;
      continue;
    }
    std::ofstream file(a.path, std::ios::binary | std::ios::trunc);
    file << a.contents;
    if (!file) {
      std::cerr << "cannot write " << a.path << "\n";
      ok = false;
    }
  }
  std::cout.flush();
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conference key rates over asymmetric channels"};
  app.require_subcommand(1);
  Arguments args;
  CLI::App* rate = app.add_subcommand("rate", "key rate at one point");
  CLI::App* scan = app.add_subcommand("scan", "optimized rate vs distance");
  CLI::App* simulate =
      app.add_subcommand("simulate", "sampled data through the finite pipeline");
  CLI::App* validate = app.add_subcommand("validate", "property suites");
  AddCommonOptions(*rate, args, true);
  AddCommonOptions(*scan, args, true);
  AddCommonOptions(*simulate, args, true);
  AddCommonOptions(*validate, args, false);
  validate->add_option("--suites", args.suites,
                       "comma-separated subset of "
                       "constraint,channel,coverage,decoy; empty for none");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcka::cli::kExitConfigError;
  }

  qcka::cli::RunConfig config;
  if (!args.config_path.empty()) {
    absl::StatusOr<qcka::cli::RunConfig> loaded =
        qcka::cli::LoadConfig(args.config_path);
    if (!loaded.ok()) {
      std::cerr << "config error: " << loaded.status().message() << "\n";
      return qcka::cli::kExitConfigError;
    }
    config = *std::move(loaded);
  }

  qcka::cli::Overrides overrides;
  CLI::App* cmd = app.get_subcommands().front();
  if (cmd->count("--out") > 0) overrides.output = args.out;
  if (cmd->count("--seed") > 0) overrides.seed = args.seed;
  if (!args.protocol.empty()) {
    overrides.protocol = *qcka::cli::ParseProtocol(args.protocol);
  }
  if (!args.regime.empty()) {
    overrides.regime = *qcka::cli::ParseRegime(args.regime);
  }
  if (cmd == validate && cmd->count("--suites") > 0) {
    std::vector<std::string> names =
        absl::StrSplit(args.suites, ',', absl::SkipWhitespace());
    overrides.suites = names;
  }
  if (absl::Status s = qcka::cli::ApplyOverrides(overrides, config); !s.ok()) {
    std::cerr << "config error: " << s.message() << "\n";
    return qcka::cli::kExitConfigError;
  }

  CommandOutput out;
  if (cmd == rate) {
    out = qcka::cli::RunRate(config);
  } else if (cmd == scan) {
    out = qcka::cli::RunScan(config);
  } else if (cmd == simulate) {
    out = qcka::cli::RunSimulate(config);
  } else {
    out = qcka::cli::RunValidate(config);
  }
  for (const std::string& line : out.log) std::cerr << line << "\n";
  if (!WriteArtifacts(out) && out.exit_code == 0) return 1;
  return out.exit_code;
}
