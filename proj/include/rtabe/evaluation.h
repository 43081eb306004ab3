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

// Measurement harnesses behind the bench and noise-report commands.

#ifndef RTABE_EVALUATION_H_
#define RTABE_EVALUATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "rtabe/params.h"

namespace rtabe {

struct FailureRateRow {
  SchemeMode mode;
  size_t trials = 0;
  size_t failures = 0;

  double rate() const {
    return trials == 0
               ? 0.0
               : static_cast<double>(failures) / static_cast<double>(trials);
  }
};

// For each of the four modes, runs `trials` independent
// Setup/KeyGen/Encrypt/Decrypt rounds on `base` (its mode is ignored) with a
// uniformly random message under and(att1, or(att2, att3)) and a key for
// {1, 2}. A trial fails when the decrypted message differs from M.
absl::StatusOr<std::vector<FailureRateRow>> MeasureFailureRates(
    const Params& base, size_t trials, uint64_t seed);

std::string FormatFailureRates(const std::vector<FailureRateRow>& rows);

struct LatencyStats {
  std::string algorithm;
  size_t samples = 0;
  double median_us = 0.0;
  double p95_us = 0.0;
};

// Nearest-rank percentile, 0 < fraction <= 1. `values` must be non-empty.
double Percentile(std::vector<double> values, double fraction);

// Times Setup, KeyGen, Encrypt and Decrypt over `trials` rounds, each with
// a fresh setup and the same policy shape as MeasureFailureRates.
absl::StatusOr<std::vector<LatencyStats>> RunBenchmark(const Params& params,
                                                       size_t trials,
                                                       uint64_t seed);

std::string FormatLatencies(const std::vector<LatencyStats>& stats);

}  // namespace rtabe

#endif  // RTABE_EVALUATION_H_
