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

#include "rtabe/params.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "rtabe/modular.h"

namespace rtabe {

absl::StatusOr<SchemeMode> SchemeMode::FromByte(uint8_t byte) {
  if (byte > 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("Unknown scheme mode byte ", byte, "."));
  }
  SchemeMode mode;
  mode.inverse = static_cast<InverseConvention>(byte / 2);
  mode.noise = static_cast<NoiseMode>(byte % 2);
  return mode;
}

std::string SchemeMode::DebugString() const {
  return absl::StrCat(
      inverse == InverseConvention::kExactInverse ? "ExactInverse"
                                                  : "PaperLiteral",
      "+", noise == NoiseMode::kNoiseOn ? "NoiseOn" : "NoiseOff");
}

absl::Status Params::Validate() const {
  if (n < 4 || n > kMaxRingDegree || (n & (n - 1)) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("Ring degree n = ", n, " must be a power of two in [4, ",
                     kMaxRingDegree, "]."));
  }
  if (q >= kMaxModulus || !IsPrime(q)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Modulus q = ", q, " must be a prime below 2^62."));
  }
  if ((q - 1) % (2 * uint64_t{n}) != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Modulus q = ", q, " must satisfy q = 1 (mod 2n) for n = ", n, "."));
  }
  if (p <= 2 || p >= q || !IsPrime(p)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Plaintext modulus p = ", p, " must be a prime with 2 < p < q."));
  }
  if (!std::isfinite(sigma) || sigma <= 0.0 || sigma > kMaxSigma) {
    return absl::InvalidArgumentError(
        absl::StrCat("Gaussian width sigma = ", sigma, " must lie in (0, ",
                     kMaxSigma, "]."));
  }
  return absl::OkStatus();
}

int64_t Params::TailBound() const {
  return static_cast<int64_t>(std::ceil(10.0 * sigma));
}

std::string Params::DebugString() const {
  return absl::StrCat("n=", n, " q=", q, " p=", p, " sigma=", sigma,
                      " mode=", mode.DebugString());
}

Params Params::Toy(SchemeMode mode) {
  return Params{.n = 16, .q = 7681, .p = 3, .sigma = 3.2, .mode = mode};
}

Params Params::Desk(SchemeMode mode) {
  return Params{.n = 256, .q = 7681, .p = 3, .sigma = 3.2, .mode = mode};
}

absl::StatusOr<Params> Params::Named(const std::string& name, SchemeMode mode) {
  if (name == "toy") return Toy(mode);
  if (name == "desk") return Desk(mode);
  return absl::InvalidArgumentError(
      absl::StrCat("Unknown parameter set '", name, "'; expected toy|desk."));
}

}  // namespace rtabe
