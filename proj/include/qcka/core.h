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

#ifndef QCKA_CORE_H_
#define QCKA_CORE_H_

#include <array>
#include <cstddef>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace qcka {

enum class Side { kAlice, kBob };

// Intensity settings available to each sender. kSignal is mu, kDecoy is nu.
enum class Intensity { kSignal = 0, kDecoy = 1, kVacuum = 2 };

inline constexpr std::array<Intensity, 3> kAllIntensities = {
    Intensity::kSignal, Intensity::kDecoy, Intensity::kVacuum};

// Dense table indexed by (Alice intensity, Bob intensity).
template <typename T>
class PairTable {
 public:
  PairTable() : cells_{} {}
  explicit PairTable(T fill) { Fill(fill); }

  T& operator()(Intensity a, Intensity b) {
    return cells_[Index(a)][Index(b)];
  }
  const T& operator()(Intensity a, Intensity b) const {
    return cells_[Index(a)][Index(b)];
  }
  void Fill(T value) {
    for (auto& row : cells_) row.fill(value);
  }
  bool operator==(const PairTable&) const = default;

 private:
  static constexpr std::size_t Index(Intensity k) {
    return static_cast<std::size_t>(k);
  }
  std::array<std::array<T, 3>, 3> cells_;
};

// Sender-side source settings. The signal-intensity probability in the X
// basis is 1 - p_0 - p_nu and is never stored.
struct SourceParams {
  double mu_a = 0.0;  // signal intensities
  double mu_b = 0.0;
  double nu_a = 0.0;  // decoy intensities
  double nu_b = 0.0;
  double t_a = 0.0;  // probability of sending in the Z basis
  double t_b = 0.0;
  double p_za = 0.0;  // probability of choosing the Z basis
  double p_zb = 0.0;
  double p_0a = 0.0;  // vacuum probability given the X basis
  double p_0b = 0.0;
  double p_nua = 0.0;  // decoy probability given the X basis
  double p_nub = 0.0;
  double delta = 0.0;  // phase-slice half width, radians
  double q_z = 0.0;    // fraction of each arm routed to the Z detectors

  double p_mua() const { return 1.0 - p_0a - p_nua; }
  double p_mub() const { return 1.0 - p_0b - p_nub; }

  // Mean photon number for a sender's intensity setting.
  double IntensityOf(Side side, Intensity k) const;

  // Probability that the sender picks intensity `k` given the X basis.
  double XIntensityProbability(Side side, Intensity k) const;

  bool operator==(const SourceParams&) const = default;
};

struct ChannelParams {
  double length_a_km = 0.0;
  double length_b_km = 0.0;
  double attenuation_db_per_km = 0.167;
  double detector_efficiency = 0.56;
  double dark_count_prob = 1e-8;
  double misalignment_x = 0.035;
  double ec_efficiency = 1.1;
  // Residual reference-frame phase left after compensation, radians.
  double phase_offset = 0.0;

  bool operator==(const ChannelParams&) const = default;
};

// Channel with the fiber and detector values used throughout the rate
// comparisons, for the given arm lengths.
ChannelParams DefaultFiberChannel(double length_a_km, double length_b_km);

struct SecurityParams {
  // Total number of rounds. Stored as a double so that 1e18-scale runs keep
  // the estimator arithmetic in floating point; must be integral.
  double total_rounds = 1e14;
  double eps_sec = 1e-10;
  double eps_cor = 1e-10;

  bool operator==(const SecurityParams&) const = default;
};

// Diagonal weights of the joint single-photon state over |10> and |01>.
struct SingleExcitationState {
  double w10 = 0.0;
  double w01 = 0.0;
};

struct SingleExcitationPair {
  SingleExcitationState z;
  SingleExcitationState x;
};

// Relative tolerance for the source-parameter constraint.
inline constexpr double kConstraintTolerance = 1e-12;

// Checks every SourceParams invariant except the intensity-ratio constraint.
absl::Status ValidateSourceRanges(const SourceParams& src);

// Checks ranges plus the intensity-ratio constraint tying nu_a/nu_b to the
// sending probabilities and signal intensities.
absl::Status ValidateSourceParams(const SourceParams& src);

absl::Status ValidateChannelParams(const ChannelParams& ch);
absl::Status ValidateSecurityParams(const SecurityParams& sec);

// Relative deviation of nu_a/nu_b from the ratio implied by the sending
// probabilities; zero when the constraint holds exactly.
double ConstraintResidual(const SourceParams& src);

// Returns the Bob sending probability that makes the single-excitation Z and
// X states coincide:
//   t_b = A / (A + K B),  A = t_a mu_a e^-mu_a,  B = (1 - t_a) mu_b e^-mu_b,
//   K = nu_a / nu_b.
absl::StatusOr<double> SolveBobSendingProbability(double mu_a, double mu_b,
                                                  double t_a, double nu_a,
                                                  double nu_b);

// Copy of `src` with t_b replaced by the constrained value.
absl::StatusOr<SourceParams> WithConstrainedBobSending(SourceParams src);

// Binary Shannon entropy in bits, with h(0) = h(1) = 0.
absl::StatusOr<double> BinaryEntropy(double x);

// Same as BinaryEntropy for inputs already known to be in [0, 1]; clamps.
double BinaryEntropyClamped(double x);

absl::StatusOr<SingleExcitationPair> SingleExcitationStates(
    const SourceParams& src);

}  // namespace qcka

#endif  // QCKA_CORE_H_
