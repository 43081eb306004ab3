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

#ifndef RTABE_PRNG_H_
#define RTABE_PRNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace rtabe {

// ChaCha20 keystream generator. A given seed always yields the same stream,
// which is what makes every randomized algorithm in this library replayable.
// Move-only: copying a generator would silently repeat its output.
class Prng {
 public:
  using result_type = uint64_t;

  explicit Prng(uint64_t seed);

  // Keyed from the operating system's entropy source.
  static Prng FromEntropy();

  Prng(Prng&&) = default;
  Prng& operator=(Prng&&) = default;
  Prng(const Prng&) = delete;
  Prng& operator=(const Prng&) = delete;

  // Independent child stream; the parent is not advanced.
  Prng Fork(uint64_t stream_id) const;

  uint64_t NextU64();

  // Uniform in [0, bound), by rejection. bound must be nonzero.
  uint64_t Uniform(uint64_t bound);

  // Uniform in [0, 1) with 53 bits of precision.
  double UniformDouble();

  bool Bit() { return (NextU64() & 1) != 0; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<uint64_t>::max();
  }
  result_type operator()() { return NextU64(); }

 private:
  using Key = std::array<uint8_t, 32>;
  explicit Prng(const Key& key) : key_(key) {}

  void Refill();

  static constexpr size_t kBufferBytes = 512;

  Key key_{};
  uint64_t block_counter_ = 0;
  std::array<uint8_t, kBufferBytes> buffer_{};
  size_t pos_ = kBufferBytes;
};

}  // namespace rtabe

#endif  // RTABE_PRNG_H_
