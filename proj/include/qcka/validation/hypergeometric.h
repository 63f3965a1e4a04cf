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

#ifndef QCKA_VALIDATION_HYPERGEOMETRIC_H_
#define QCKA_VALIDATION_HYPERGEOMETRIC_H_

#include <cstdint>
#include <random>
#include <vector>

#include "absl/status/statusor.h"

namespace qcka::validation {

// Number of marked items in a uniformly random subset of `draws` items taken
// without replacement from `population` items of which `marked` are marked.
// Exact inverse-CDF sampling from a precomputed table.
class HypergeometricSampler {
 public:
  static absl::StatusOr<HypergeometricSampler> Create(std::int64_t population,
                                                      std::int64_t marked,
                                                      std::int64_t draws);

  std::int64_t operator()(std::mt19937_64& rng) const;

  std::int64_t min_value() const { return min_; }
  std::int64_t max_value() const { return min_ + std::int64_t(cdf_.size()) - 1; }
  double Mean() const;

 private:
  HypergeometricSampler() = default;

  std::int64_t min_ = 0;
  std::vector<double> cdf_;
};

}  // namespace qcka::validation

#endif  // QCKA_VALIDATION_HYPERGEOMETRIC_H_
