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

#ifndef QCKA_OPTIMIZER_H_
#define QCKA_OPTIMIZER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "qcka/channel.h"
#include "qcka/core.h"

namespace qcka {

enum class Objective { kAsymptotic, kFinite };

struct Box {
  double lower = 0.0;
  double upper = 1.0;
};

struct ParameterBoxes {
  Box intensity{1e-4, 1.0};
  Box probability{1e-4, 1.0 - 1e-4};
  Box delta{1e-3, 1.5707963267948966};
};

struct OptimizationSpec {
  Objective objective = Objective::kFinite;
  // Ties every Bob-side setting to Alice's (the original protocol).
  bool symmetric = false;
  int multistart = 8;
  int max_evals = 2000;  // per start
  std::uint64_t seed = 1;
  ParameterBoxes boxes;
};

// Objective value at one point: the finite key rate l/N or the asymptotic
// rate R. `raw` is the unfloored value; it is -inf for infeasible points.
// `score` ranks candidates during the search: equal to `raw` when that is
// positive, otherwise `raw` divided by the all-Z gain, so that dimming the
// source does not look like progress towards zero.
struct Evaluation {
  double value = 0.0;
  double raw = 0.0;
  double score = 0.0;
  bool feasible = false;
};

Evaluation EvaluateObjective(Objective objective, const SourceParams& src,
                             const ChannelParams& ch,
                             const SecurityParams& sec);

struct TracePoint {
  int start = 0;
  double value = 0.0;
};

struct OptimizationResult {
  SourceParams best;
  double value = 0.0;  // floored objective at `best`
  double raw = 0.0;
  bool feasible = false;  // false when no start produced a valid point
  std::vector<TracePoint> trace;
};

// Number of free parameters searched: 13, or 8 in symmetric mode.
int FreeParameterCount(bool symmetric);

// Maps a point of the unit cube to source settings (t_b derived from the
// intensity-ratio constraint). Intensities use a log scale inside their box.
absl::StatusOr<SourceParams> DecodeParameters(const OptimizationSpec& spec,
                                              std::span<const double> unit);

// Inverse of DecodeParameters (t_b is dropped), clamped to the unit cube.
std::vector<double> EncodeParameters(const OptimizationSpec& spec,
                                     const SourceParams& src);

// Box-projected Nelder-Mead maximization on the unit cube with restarts
// until `max_evals` evaluations are spent. Exposed for testing.
struct SimplexResult {
  std::vector<double> best;
  double best_value = 0.0;
  int evaluations = 0;
};
SimplexResult MaximizeNelderMead(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> start, int max_evals);

// Multistart maximization. Start 0 uses `warm_start` when given, the rest
// are uniform feasible draws from the boxes. Deterministic in spec.seed.
absl::StatusOr<OptimizationResult> Optimize(
    const OptimizationSpec& spec, const ChannelParams& ch,
    const SecurityParams& sec,
    const std::optional<SourceParams>& warm_start = std::nullopt);

struct ScanRow {
  double total_km = 0.0;
  double length_a_km = 0.0;
  double length_b_km = 0.0;
  OptimizationResult result;
  // Running minimum of the optimized values along the grid. Diagnostics only.
  double monotone_value = 0.0;
  bool rate_increased = false;
};

// Optimizes each total distance L with L_b - L_a = length_difference_km,
// warm-starting from the previous grid point.
absl::StatusOr<std::vector<ScanRow>> Scan(const OptimizationSpec& spec,
                                          const ChannelParams& base,
                                          std::span<const double> totals_km,
                                          double length_difference_km,
                                          const SecurityParams& sec);

}  // namespace qcka

#endif  // QCKA_OPTIMIZER_H_
