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

#include "qcka/validation/hypergeometric.h"

#include <algorithm>

#include "absl/status/status.h"
#include "boost/math/distributions/hypergeometric.hpp"

namespace qcka::validation {

// Table sizes above this would make the sampler a memory hog.
constexpr std::int64_t kMaxSupport = 10'000'000;

absl::StatusOr<HypergeometricSampler> HypergeometricSampler::Create(
    std::int64_t population, std::int64_t marked, std::int64_t draws) {
  if (population < 0 || marked < 0 || draws < 0 || marked > population ||
      draws > population) {
    return absl::InvalidArgumentError("inconsistent hypergeometric sizes");
  }
  const std::int64_t lo = std::max<std::int64_t>(0, draws + marked - population);
  const std::int64_t hi = std::min(draws, marked);
  if (hi - lo + 1 > kMaxSupport) {
    return absl::InvalidArgumentError("hypergeometric support too large");
  }
  const boost::math::hypergeometric_distribution<double> dist(
      static_cast<unsigned>(marked), static_cast<unsigned>(draws),
      static_cast<unsigned>(population));
  HypergeometricSampler s;
  s.min_ = lo;
  s.cdf_.reserve(hi - lo + 1);
  double total = 0.0;
  for (std::int64_t x = lo; x <= hi; ++x) {
    total += boost::math::pdf(dist, static_cast<unsigned>(x));
    s.cdf_.push_back(total);
  }
  for (double& v : s.cdf_) v /= total;
  s.cdf_.back() = 1.0;
  return s;
}

std::int64_t HypergeometricSampler::operator()(std::mt19937_64& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return min_ + std::min<std::int64_t>(it - cdf_.begin(),
                                       std::int64_t(cdf_.size()) - 1);
}

double HypergeometricSampler::Mean() const {
  double mean = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < cdf_.size(); ++i) {
    mean += static_cast<double>(min_ + std::int64_t(i)) * (cdf_[i] - prev);
    prev = cdf_[i];
  }
  return mean;
}

}  // namespace qcka::validation
