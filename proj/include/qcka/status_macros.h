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

#ifndef QCKA_STATUS_MACROS_H_
#define QCKA_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define QCKA_STATUS_CONCAT_INNER(x, y) x##y
#define QCKA_STATUS_CONCAT(x, y) QCKA_STATUS_CONCAT_INNER(x, y)

#define QCKA_RETURN_IF_ERROR(expr)              \
  do {                                          \
    if (absl::Status _st = (expr); !_st.ok()) { \
      return _st;                               \
    }                                           \
  } while (0)

#define QCKA_ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                               \
  if (!tmp.ok()) return tmp.status();              \
  lhs = *std::move(tmp)

#define QCKA_ASSIGN_OR_RETURN(lhs, expr) \
  QCKA_ASSIGN_OR_RETURN_IMPL(            \
      QCKA_STATUS_CONCAT(_statusor_, __LINE__), lhs, expr)

#endif  // QCKA_STATUS_MACROS_H_
