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

#include "qcka/optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "absl/strings/str_format.h"
#include "qcka/asymptotic.h"
#include "qcka/channel.h"
#include "qcka/finite_key.h"

namespace qcka {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Random feasible points screened per multistart start.
constexpr int kStartCandidates = 32;

enum class Scale { kLog, kLinear };
enum class BoxKind { kIntensity, kProbability, kDelta };

// One searched coordinate; `tied` is set in symmetric mode for the Bob-side
// twin of an Alice-side field.
struct Field {
  double SourceParams::*primary;
  double SourceParams::*tied;
  BoxKind kind;
};

constexpr Field kAsymmetricFields[] = {
    {&SourceParams::p_za, nullptr, BoxKind::kProbability},
    {&SourceParams::p_zb, nullptr, BoxKind::kProbability},
    {&SourceParams::nu_a, nullptr, BoxKind::kIntensity},
    {&SourceParams::nu_b, nullptr, BoxKind::kIntensity},
    {&SourceParams::mu_a, nullptr, BoxKind::kIntensity},
    {&SourceParams::mu_b, nullptr, BoxKind::kIntensity},
    {&SourceParams::t_a, nullptr, BoxKind::kProbability},
    {&SourceParams::p_0a, nullptr, BoxKind::kProbability},
    {&SourceParams::p_0b, nullptr, BoxKind::kProbability},
    {&SourceParams::p_nua, nullptr, BoxKind::kProbability},
    {&SourceParams::p_nub, nullptr, BoxKind::kProbability},
    {&SourceParams::q_z, nullptr, BoxKind::kProbability},
    {&SourceParams::delta, nullptr, BoxKind::kDelta},
};

constexpr Field kSymmetricFields[] = {
    {&SourceParams::p_za, &SourceParams::p_zb, BoxKind::kProbability},
    {&SourceParams::nu_a, &SourceParams::nu_b, BoxKind::kIntensity},
    {&SourceParams::mu_a, &SourceParams::mu_b, BoxKind::kIntensity},
    {&SourceParams::t_a, nullptr, BoxKind::kProbability},
    {&SourceParams::p_0a, &SourceParams::p_0b, BoxKind::kProbability},
    {&SourceParams::p_nua, &SourceParams::p_nub, BoxKind::kProbability},
    {&SourceParams::q_z, nullptr, BoxKind::kProbability},
    {&SourceParams::delta, nullptr, BoxKind::kDelta},
};

std::span<const Field> Fields(bool symmetric) {
  if (symmetric) return kSymmetricFields;
  return kAsymmetricFields;
}

Box BoxFor(const ParameterBoxes& boxes, BoxKind kind) {
  switch (kind) {
    case BoxKind::kIntensity:
      return boxes.intensity;
    case BoxKind::kProbability:
      return boxes.probability;
    case BoxKind::kDelta:
      return boxes.delta;
  }
  return boxes.probability;
}

Scale ScaleFor(BoxKind kind) {
  return kind == BoxKind::kIntensity ? Scale::kLog : Scale::kLinear;
}

double FromUnit(double u, Box box, Scale scale) {
  u = std::clamp(u, 0.0, 1.0);
  if (scale == Scale::kLog) {
    const double lo = std::log(box.lower);
    const double hi = std::log(box.upper);
    return std::exp(lo + u * (hi - lo));
  }
  return box.lower + u * (box.upper - box.lower);
}

double ToUnit(double x, Box box, Scale scale) {
  double u = 0.0;
  if (scale == Scale::kLog) {
    const double lo = std::log(box.lower);
    const double hi = std::log(box.upper);
    u = (std::log(x) - lo) / (hi - lo);
  } else {
    u = (x - box.lower) / (box.upper - box.lower);
  }
  return std::isfinite(u) ? std::clamp(u, 0.0, 1.0) : 0.5;
}

// Adaptive Nelder-Mead coefficients for dimension n.
struct Coefficients {
  double reflect;
  double expand;
  double contract;
  double shrink;
};

Coefficients AdaptiveCoefficients(std::size_t n) {
  const double d = static_cast<double>(n);
  return {1.0, 1.0 + 2.0 / d, 0.75 - 1.0 / (2.0 * d), 1.0 - 1.0 / d};
}

}  // namespace

int FreeParameterCount(bool symmetric) {
  return static_cast<int>(Fields(symmetric).size());
}

absl::StatusOr<SourceParams> DecodeParameters(const OptimizationSpec& spec,
                                              std::span<const double> unit) {
  const auto fields = Fields(spec.symmetric);
  if (unit.size() != fields.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected %d coordinates, got %d", fields.size(),
                        unit.size()));
  }
  SourceParams src;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const Field& f = fields[i];
    const double x =
        FromUnit(unit[i], BoxFor(spec.boxes, f.kind), ScaleFor(f.kind));
    src.*f.primary = x;
    if (f.tied != nullptr) src.*f.tied = x;
  }
  absl::StatusOr<SourceParams> constrained = WithConstrainedBobSending(src);
  if (!constrained.ok()) return constrained.status();
  if (absl::Status s = ValidateSourceParams(*constrained); !s.ok()) return s;
  return constrained;
}

std::vector<double> EncodeParameters(const OptimizationSpec& spec,
                                     const SourceParams& src) {
  const auto fields = Fields(spec.symmetric);
  std::vector<double> unit(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const Field& f = fields[i];
    unit[i] = ToUnit(src.*f.primary, BoxFor(spec.boxes, f.kind),
                     ScaleFor(f.kind));
  }
  return unit;
}

Evaluation EvaluateObjective(Objective objective, const SourceParams& src,
                             const ChannelParams& ch,
                             const SecurityParams& sec) {
  Evaluation out;
  out.raw = kNegInf;
  out.score = kNegInf;
  double z_gain = 0.0;
  if (objective == Objective::kAsymptotic) {
    absl::StatusOr<AsymptoticResult> r = AsymptoticRate(src, ch);
    if (!r.ok()) return out;
    out.value = r->rate;
    out.raw = r->rate_raw;
    z_gain = r->q_z;
  } else {
    absl::StatusOr<FiniteKeyResult> r = ExpectedKeyLength(src, ch, sec);
    if (!r.ok()) return out;
    out.value = r->key_length / sec.total_rounds;
    out.raw = r->key_length_raw / sec.total_rounds;
    z_gain = src.p_za * src.p_zb * ExpectedZGainError(src, ch).gain;
  }
  out.feasible = std::isfinite(out.raw);
  if (!out.feasible) {
    out.value = 0.0;
    out.raw = kNegInf;
    return out;
  }
  out.score = out.raw;
  if (out.raw < 0.0) out.score = z_gain > 0.0 ? out.raw / z_gain : kNegInf;
  return out;
}

SimplexResult MaximizeNelderMead(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> start, int max_evals) {
  const std::size_t n = start.size();
  const Coefficients c = AdaptiveCoefficients(std::max<std::size_t>(n, 2));
  SimplexResult out;
  out.best = start;
  out.best_value = kNegInf;

  auto evaluate = [&](std::vector<double>& x) {
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);
    if (out.evaluations >= max_evals) return kNegInf;
    ++out.evaluations;
    double v = f(x);
    if (std::isnan(v)) v = kNegInf;
    if (v > out.best_value) {
      out.best_value = v;
      out.best = x;
    }
    return v;
  };

  if (max_evals <= 0 || n == 0) return out;
  evaluate(start);

  const double steps[] = {0.1, 0.05, 0.2, 0.025};
  int restart = 0;
  while (out.evaluations < max_evals) {
    const double step = steps[restart++ % std::size(steps)];
    std::vector<std::vector<double>> simplex(n + 1, out.best);
    std::vector<double> values(n + 1, out.best_value);
    for (std::size_t i = 0; i < n && out.evaluations < max_evals; ++i) {
      simplex[i + 1][i] += simplex[i + 1][i] + step <= 1.0 ? step : -step;
      values[i + 1] = evaluate(simplex[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    double best_at_restart = out.best_value;
    int stale = 0;
    while (out.evaluations < max_evals) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return values[a] > values[b];
      });
      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t second_worst = order[n - 1];

      double diameter = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          diameter =
              std::max(diameter, std::abs(simplex[i][k] - simplex[best][k]));
        }
      }
      if (diameter < 1e-7) break;
      if (out.best_value > best_at_restart) {
        best_at_restart = out.best_value;
        stale = 0;
      } else if (++stale > static_cast<int>(40 * n)) {
        break;
      }

      std::vector<double> centroid(n, 0.0);
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == worst) continue;
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;
      }
      auto along = [&](double t) {
        std::vector<double> x(n);
        for (std::size_t k = 0; k < n; ++k) {
          x[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
        }
        return x;
      };

      std::vector<double> reflected = along(-c.reflect);
      const double fr = evaluate(reflected);
      if (fr > values[best]) {
        std::vector<double> expanded = along(-c.reflect * c.expand);
        const double fe = evaluate(expanded);
        if (fe > fr) {
          simplex[worst] = std::move(expanded);
          values[worst] = fe;
        } else {
          simplex[worst] = std::move(reflected);
          values[worst] = fr;
        }
        continue;
      }
      if (fr > values[second_worst]) {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
        continue;
      }
      const bool outside = fr > values[worst];
      std::vector<double> contracted =
          along(outside ? -c.reflect * c.contract : c.contract);
      const double fc = evaluate(contracted);
      const double threshold = outside ? fr : values[worst];
      if (fc > kNegInf && fc >= threshold) {
        simplex[worst] = std::move(contracted);
        values[worst] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= n && out.evaluations < max_evals; ++i) {
        if (i == best) continue;
        for (std::size_t k = 0; k < n; ++k) {
          simplex[i][k] =
              simplex[best][k] + c.shrink * (simplex[i][k] - simplex[best][k]);
        }
        values[i] = evaluate(simplex[i]);
      }
    }
  }
  return out;
}

absl::StatusOr<OptimizationResult> Optimize(
    const OptimizationSpec& spec, const ChannelParams& ch,
    const SecurityParams& sec, const std::optional<SourceParams>& warm_start) {
  if (absl::Status s = ValidateChannelParams(ch); !s.ok()) return s;
  if (spec.objective == Objective::kFinite) {
    if (absl::Status s = ValidateSecurityParams(sec); !s.ok()) return s;
  }
  if (spec.multistart < 1 || spec.max_evals < 1) {
    return absl::InvalidArgumentError("multistart and max_evals must be >= 1");
  }
  const std::size_t dim = Fields(spec.symmetric).size();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  OptimizationResult result;
  result.raw = kNegInf;
  std::vector<double> best_unit;

  for (int start = 0; start < spec.multistart; ++start) {
    std::vector<double> x0;
    if (start == 0 && warm_start.has_value()) {
      x0 = EncodeParameters(spec, *warm_start);
    } else {
      // Best of a few random feasible points, ranked by score.
      double x0_score = kNegInf;
      int drawn = 0;
      for (int attempt = 0; attempt < 10000 && drawn < kStartCandidates;
           ++attempt) {
        std::vector<double> u(dim);
        for (double& v : u) v = uniform(rng);
        absl::StatusOr<SourceParams> src = DecodeParameters(spec, u);
        if (!src.ok()) continue;
        ++drawn;
        const double score =
            EvaluateObjective(spec.objective, *src, ch, sec).score;
        if (x0.empty() || score > x0_score) {
          x0 = std::move(u);
          x0_score = score;
        }
      }
      if (x0.empty()) {
        return absl::InternalError("could not draw a feasible start");
      }
    }

    auto objective = [&](std::span<const double> u) {
      absl::StatusOr<SourceParams> src = DecodeParameters(spec, u);
      Evaluation e;
      e.raw = kNegInf;
      e.score = kNegInf;
      if (src.ok()) e = EvaluateObjective(spec.objective, *src, ch, sec);
      result.trace.push_back({start, e.value});
      return e.score;
    };
    SimplexResult local = MaximizeNelderMead(objective, x0, spec.max_evals);
    if (local.best_value > result.raw) {
      result.raw = local.best_value;
      best_unit = local.best;
    }
  }

  if (best_unit.empty()) {
    // No start produced a finite objective; keep the last start's point.
    result.feasible = false;
    result.value = 0.0;
    result.raw = 0.0;
    return result;
  }
  absl::StatusOr<SourceParams> best = DecodeParameters(spec, best_unit);
  if (!best.ok()) return best.status();
  result.best = *best;
  const Evaluation e = EvaluateObjective(spec.objective, *best, ch, sec);
  result.value = e.value;
  result.raw = e.raw;
  result.feasible = e.feasible;
  return result;
}

absl::StatusOr<std::vector<ScanRow>> Scan(const OptimizationSpec& spec,
                                          const ChannelParams& base,
                                          std::span<const double> totals_km,
                                          double length_difference_km,
                                          const SecurityParams& sec) {
  std::vector<ScanRow> rows;
  rows.reserve(totals_km.size());
  std::optional<SourceParams> warm;
  for (double total : totals_km) {
    ScanRow row;
    row.total_km = total;
    row.length_a_km = (total - length_difference_km) / 2.0;
    row.length_b_km = (total + length_difference_km) / 2.0;
    if (row.length_a_km < 0.0 || row.length_b_km < 0.0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "total distance %g km is shorter than the arm difference %g km",
          total, length_difference_km));
    }
    ChannelParams ch = base;
    ch.length_a_km = row.length_a_km;
    ch.length_b_km = row.length_b_km;
    absl::StatusOr<OptimizationResult> r = Optimize(spec, ch, sec, warm);
    if (!r.ok()) return r.status();
    row.result = *std::move(r);
    if (row.result.feasible) warm = row.result.best;
    if (rows.empty()) {
      row.monotone_value = row.result.value;
    } else {
      row.monotone_value = std::min(rows.back().monotone_value, row.result.value);
      row.rate_increased = row.result.value > rows.back().result.value;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qcka
