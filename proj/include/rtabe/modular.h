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

// Scalar arithmetic modulo a word-sized modulus. Moduli up to 2^62 are
// supported so that the sum of two residues never overflows.

#ifndef RTABE_MODULAR_H_
#define RTABE_MODULAR_H_

#include <cstdint>
#include <optional>

namespace rtabe {

inline constexpr uint64_t kMaxModulus = uint64_t{1} << 62;

inline uint64_t AddMod(uint64_t a, uint64_t b, uint64_t m) {
  uint64_t s = a + b;
  return s >= m ? s - m : s;
}

inline uint64_t SubMod(uint64_t a, uint64_t b, uint64_t m) {
  return a >= b ? a - b : a + m - b;
}

inline uint64_t NegMod(uint64_t a, uint64_t m) { return a == 0 ? 0 : m - a; }

inline uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m) {
  if (m <= UINT32_MAX) return (a * b) % m;
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t m);

// Inverse of `a` modulo prime `m`; nullopt when a == 0 (mod m).
std::optional<uint64_t> InvModPrime(uint64_t a, uint64_t m);

// Deterministic Miller-Rabin for all 64-bit inputs.
bool IsPrime(uint64_t n);

// Reduces a signed integer into [0, m).
inline uint64_t ReduceSigned(int64_t v, uint64_t m) {
  int64_t r = v % static_cast<int64_t>(m);
  return static_cast<uint64_t>(r < 0 ? r + static_cast<int64_t>(m) : r);
}

// Representative of `a` in (-m/2, m/2].
inline int64_t CenterMod(uint64_t a, uint64_t m) {
  return a > m / 2 ? static_cast<int64_t>(a) - static_cast<int64_t>(m)
                   : static_cast<int64_t>(a);
}

}  // namespace rtabe

#endif  // RTABE_MODULAR_H_
