/*
 * Copyright 2026 The RTABE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RTABE_STATUS_MACROS_H_
#define RTABE_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define RTABE_STATUS_CONCAT_INNER_(x, y) x##y
#define RTABE_STATUS_CONCAT_(x, y) RTABE_STATUS_CONCAT_INNER_(x, y)

// Evaluates `expr`, which must return absl::Status, and returns it from the
// enclosing function if it is not OK.
#define RTABE_RETURN_IF_ERROR(expr)            \
  do {                                         \
    const absl::Status _rtabe_status = (expr); \
    if (!_rtabe_status.ok()) {                 \
      return _rtabe_status;                    \
    }                                          \
  } while (0)

// Evaluates `rexpr`, which must return absl::StatusOr<T>. On error returns the
// status from the enclosing function, otherwise moves the value into `lhs`.
#define RTABE_ASSIGN_OR_RETURN(lhs, rexpr) \
  RTABE_ASSIGN_OR_RETURN_IMPL_(            \
      RTABE_STATUS_CONCAT_(_rtabe_statusor_, __LINE__), lhs, rexpr)

#define RTABE_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                 \
  if (!statusor.ok()) {                                    \
    return std::move(statusor).status();                   \
  }                                                        \
  lhs = std::move(statusor).value()

#endif  // RTABE_STATUS_MACROS_H_
