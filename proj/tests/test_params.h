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


// Parameter points shared by the tests.

#ifndef QCKA_TESTS_TEST_PARAMS_H_
#define QCKA_TESTS_TEST_PARAMS_H_

#include "qcka/core.h"

namespace qcka::testing {

// Source settings shipped in configs/table1.json, t_b from the constraint.
inline SourceParams TableOneSource() {
  SourceParams s;
  s.mu_a = 0.2629;
  s.mu_b = 0.6625;
  s.nu_a = 0.004415;
  s.nu_b = 0.02877;
  s.t_a = 0.01694;
  s.p_za = 0.9697;
  s.p_zb = 0.9683;
  s.p_0a = 0.006429;
  s.p_0b = 0.1603;
  s.p_nua = 0.9904;
  s.p_nub = 0.4364;
  s.delta = 0.1183;
  s.q_z = 0.9709;
  return *WithConstrainedBobSending(s);
}

// A plain mid-range point, not tuned for any channel.
inline SourceParams GenericSource() {
  SourceParams s;
  s.mu_a = 0.4;
  s.mu_b = 0.5;
  s.nu_a = 0.1;
  s.nu_b = 0.08;
  s.t_a = 0.3;
  s.p_za = 0.6;
  s.p_zb = 0.55;
  s.p_0a = 0.2;
  s.p_0b = 0.25;
  s.p_nua = 0.4;
  s.p_nub = 0.35;
  s.delta = 0.3;
  s.q_z = 0.5;
  return *WithConstrainedBobSending(s);
}

}  // namespace qcka::testing

#endif  // QCKA_TESTS_TEST_PARAMS_H_
