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

#include "rtabe/evaluation.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rtabe/policy.h"
#include "rtabe/prng.h"
#include "rtabe/scheme.h"
#include "rtabe/status_macros.h"

namespace rtabe {
namespace {

constexpr uint32_t kAttributes = 4;

AccessTree ProbeTree() {
  return *AccessTree::And(
      {AccessTree::Leaf(1),
       *AccessTree::Or({AccessTree::Leaf(2), AccessTree::Leaf(3)})});
}

absl::StatusOr<RingElement> RandomMessage(const Params& params, Prng& prng) {
  RTABE_ASSIGN_OR_RETURN(auto context, RingContext::ForParams(params));
  std::vector<uint64_t> coeffs(params.n);
  for (auto& c : coeffs) c = prng.Uniform(params.p);
  return RingElement::Create(std::move(context), std::move(coeffs));
}

using Clock = std::chrono::steady_clock;

double MicrosSince(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start)
      .count();
}

}  // namespace

absl::StatusOr<std::vector<FailureRateRow>> MeasureFailureRates(
    const Params& base, size_t trials, uint64_t seed) {
  const AccessTree tree = ProbeTree();
  const Prng root(seed);
  std::vector<FailureRateRow> rows;
  for (InverseConvention inverse :
       {InverseConvention::kPaperLiteral, InverseConvention::kExactInverse}) {
    for (NoiseMode noise : {NoiseMode::kNoiseOff, NoiseMode::kNoiseOn}) {
      Params params = base;
      params.mode = SchemeMode{.inverse = inverse, .noise = noise};
      RTABE_RETURN_IF_ERROR(params.Validate());
      FailureRateRow row{.mode = params.mode, .trials = trials, .failures = 0};
      Prng prng = root.Fork(params.mode.ToByte());
      for (size_t t = 0; t < trials; ++t) {
        RTABE_ASSIGN_OR_RETURN(SetupResult setup,
                               Setup(params, kAttributes, prng));
        KeyRegistry registry;
        RTABE_ASSIGN_OR_RETURN(
            UserSecretKey usk,
            KeyGen(setup.msk, "probe", AttributeSet{1, 2}, registry, prng));
        RTABE_ASSIGN_OR_RETURN(RingElement m, RandomMessage(params, prng));
        RTABE_ASSIGN_OR_RETURN(Ciphertext ct, Encrypt(setup.pk, m, tree, prng));
        RTABE_ASSIGN_OR_RETURN(RingElement out, Decrypt(ct, usk, setup.pk));
        if (!(out == m)) ++row.failures;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string FormatFailureRates(const std::vector<FailureRateRow>& rows) {
  std::string out = absl::StrFormat("%-24s %8s %9s %8s\n", "mode", "trials",
                                    "failures", "rate");
  for (const FailureRateRow& row : rows) {
    absl::StrAppendFormat(&out, "%-24s %8d %9d %8.4f\n", row.mode.DebugString(),
                          row.trials, row.failures, row.rate());
  }
  return out;
}

double Percentile(std::vector<double> values, double fraction) {
  std::sort(values.begin(), values.end());
  const size_t rank = static_cast<size_t>(
      std::ceil(fraction * static_cast<double>(values.size())));
  return values[std::clamp<size_t>(rank, 1, values.size()) - 1];
}

absl::StatusOr<std::vector<LatencyStats>> RunBenchmark(const Params& params,
                                                       size_t trials,
                                                       uint64_t seed) {
  if (trials == 0) {
    return absl::InvalidArgumentError("Benchmark needs at least one trial.");
  }
  RTABE_RETURN_IF_ERROR(params.Validate());
  const AccessTree tree = ProbeTree();
  Prng prng(seed);
  std::vector<double> setup_us, keygen_us, encrypt_us, decrypt_us;
  for (size_t t = 0; t < trials; ++t) {
    auto start = Clock::now();
    RTABE_ASSIGN_OR_RETURN(SetupResult setup, Setup(params, kAttributes, prng));
    setup_us.push_back(MicrosSince(start));

    KeyRegistry registry;
    start = Clock::now();
    RTABE_ASSIGN_OR_RETURN(
        UserSecretKey usk,
        KeyGen(setup.msk, "bench", AttributeSet{1, 2}, registry, prng));
    keygen_us.push_back(MicrosSince(start));

    RTABE_ASSIGN_OR_RETURN(RingElement m, RandomMessage(params, prng));
    start = Clock::now();
    RTABE_ASSIGN_OR_RETURN(Ciphertext ct, Encrypt(setup.pk, m, tree, prng));
    encrypt_us.push_back(MicrosSince(start));

    start = Clock::now();
    RTABE_ASSIGN_OR_RETURN(RingElement out, Decrypt(ct, usk, setup.pk));
    decrypt_us.push_back(MicrosSince(start));
    (void)out;
  }
  std::vector<LatencyStats> stats;
  for (auto& [name, samples] :
       {std::pair<const char*, std::vector<double>*>{"setup", &setup_us},
        {"keygen", &keygen_us},
        {"encrypt", &encrypt_us},
        {"decrypt", &decrypt_us}}) {
    stats.push_back(LatencyStats{.algorithm = name,
                                 .samples = samples->size(),
                                 .median_us = Percentile(*samples, 0.5),
                                 .p95_us = Percentile(*samples, 0.95)});
  }
  return stats;
}

std::string FormatLatencies(const std::vector<LatencyStats>& stats) {
  std::string out = absl::StrFormat("%-10s %8s %12s %12s\n", "algorithm",
                                    "samples", "median_us", "p95_us");
  for (const LatencyStats& s : stats) {
    absl::StrAppendFormat(&out, "%-10s %8d %12.1f %12.1f\n", s.algorithm,
                          s.samples, s.median_us, s.p95_us);
  }
  return out;
}

}  // namespace rtabe
