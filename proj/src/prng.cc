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

#include "rtabe/prng.h"

#include <sodium.h>

#include <cstdlib>
#include <cstring>

namespace rtabe {
namespace {

void EnsureSodium() {
  static const bool initialized = [] {
    if (sodium_init() < 0) std::abort();
    return true;
  }();
  (void)initialized;
}

void StoreLe64(uint64_t v, uint8_t* out) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(v >> (8 * i));
}

constexpr char kSeedDomain[] = "rtabe.prng.seed";
constexpr char kForkDomain[] = "rtabe.prng.fork";

}  // namespace

Prng::Prng(uint64_t seed) {
  EnsureSodium();
  uint8_t input[sizeof(kSeedDomain) + 8];
  std::memcpy(input, kSeedDomain, sizeof(kSeedDomain));
  StoreLe64(seed, input + sizeof(kSeedDomain));
  crypto_generichash(key_.data(), key_.size(), input, sizeof(input), nullptr,
                     0);
}

Prng Prng::FromEntropy() {
  EnsureSodium();
  Key key;
  randombytes_buf(key.data(), key.size());
  return Prng(key);
}

Prng Prng::Fork(uint64_t stream_id) const {
  uint8_t input[sizeof(kForkDomain) + 8];
  std::memcpy(input, kForkDomain, sizeof(kForkDomain));
  StoreLe64(stream_id, input + sizeof(kForkDomain));
  Key child;
  crypto_generichash(child.data(), child.size(), input, sizeof(input),
                     key_.data(), key_.size());
  return Prng(child);
}

void Prng::Refill() {
  static constexpr uint8_t kNonce[crypto_stream_chacha20_NONCEBYTES] = {};
  std::memset(buffer_.data(), 0, buffer_.size());
  crypto_stream_chacha20_xor_ic(buffer_.data(), buffer_.data(), buffer_.size(),
                                kNonce, block_counter_, key_.data());
  block_counter_ += kBufferBytes / 64;
  pos_ = 0;
}

uint64_t Prng::NextU64() {
  if (pos_ + 8 > kBufferBytes) Refill();
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t{buffer_[pos_ + i]} << (8 * i);
  pos_ += 8;
  return v;
}

uint64_t Prng::Uniform(uint64_t bound) {
  // Reject the top partial copy of [0, bound) in the 64-bit range.
  const uint64_t limit = max() - max() % bound;
  uint64_t v;
  do {
    v = NextU64();
  } while (v >= limit);
  return v % bound;
}

double Prng::UniformDouble() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

}  // namespace rtabe
