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

#ifndef RTABE_PARAMS_H_
#define RTABE_PARAMS_H_

#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace rtabe {

// How the per-attribute key inverts a_i.
//   kPaperLiteral: inverse of a_i modulo (x^n + 1, p), lifted into R_q.
//   kExactInverse: the true inverse of a_i in R_q.
enum class InverseConvention : uint8_t {
  kPaperLiteral = 0,
  kExactInverse = 1,
};

// kNoiseOff replaces every Gaussian error draw by zero; uniform draws are
// unaffected.
enum class NoiseMode : uint8_t {
  kNoiseOff = 0,
  kNoiseOn = 1,
};

struct SchemeMode {
  InverseConvention inverse = InverseConvention::kExactInverse;
  NoiseMode noise = NoiseMode::kNoiseOff;

  // Wire encoding: inverse * 2 + noise.
  uint8_t ToByte() const {
    return static_cast<uint8_t>(static_cast<uint8_t>(inverse) * 2 +
                                static_cast<uint8_t>(noise));
  }
  static absl::StatusOr<SchemeMode> FromByte(uint8_t byte);

  std::string DebugString() const;

  friend bool operator==(const SchemeMode&, const SchemeMode&) = default;
};

inline constexpr uint32_t kMaxRingDegree = uint32_t{1} << 15;
inline constexpr double kMaxSigma = 1 << 16;

// Ring degree n, ciphertext modulus q, plaintext modulus p, Gaussian width
// sigma (standard deviation of the continuous envelope) and scheme variant.
struct Params {
  uint32_t n = 0;
  uint64_t q = 0;
  uint64_t p = 0;
  double sigma = 0.0;
  SchemeMode mode;

  // n = 2^k with k >= 2; q prime, q = 1 (mod 2n), q < 2^62; p prime with
  // 2 < p < q; sigma finite and positive.
  absl::Status Validate() const;

  // Largest magnitude a Gaussian draw may take: ceil(10 * sigma).
  int64_t TailBound() const;

  bool SameRing(const Params& other) const {
    return n == other.n && q == other.q;
  }

  std::string DebugString() const;

  friend bool operator==(const Params&, const Params&) = default;

  // n = 16, q = 7681, p = 3, sigma = 3.2.
  static Params Toy(SchemeMode mode = {});
  // n = 256, q = 7681, p = 3, sigma = 3.2.
  static Params Desk(SchemeMode mode = {});
  // "toy" or "desk".
  static absl::StatusOr<Params> Named(const std::string& name,
                                      SchemeMode mode = {});
};

}  // namespace rtabe

#endif  // RTABE_PARAMS_H_
