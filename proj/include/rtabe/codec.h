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

// Binary envelopes for parameters, keys and ciphertexts.
//
// Every envelope starts with
//
//   magic   6 bytes  "RTABE1"
//   kind    1 byte   EnvelopeKind
//   mode    1 byte   inverse convention * 2 + noise flag
//   n       u32
//   q       u64
//   p       u64
//   sigma   u64      IEEE-754 binary64 bit pattern
//
// followed by a kind-specific body. All integers are little-endian. A ring
// element is n coefficients of w bytes each, where w is the smallest of
// 2, 4, 8 that holds q - 1. Counts are u32.
//
// Access trees are written in preorder: a leaf as tag 0 then its attribute
// (u32), a gate as tag 1, threshold (u32), child count (u32), then children.
//
// Bodies:
//   Params          (empty)
//   PublicKey       a', count = n_attrs + 1, PK_0 .. PK_n
//   MasterSecretKey s, a, count = n_attrs, a_1 .. a_n
//   UserSecretKey   identity (u32 length + bytes), SK_u, count,
//                   count x (attribute u32, SK_i), attributes ascending
//   Ciphertext      tree, count, count x (leaf id u32, C_i) in leaf order,
//                   C', C
//   IdentityRecord  identity, u, SK_u, count, count x attribute u32
//   Container       count, count x Ciphertext envelope, original length u64
//
// Decoding rejects bad magic, unknown kinds, out-of-range coefficients,
// structurally invalid objects and trailing bytes, naming the byte offset.

#ifndef RTABE_CODEC_H_
#define RTABE_CODEC_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "rtabe/params.h"
#include "rtabe/policy.h"
#include "rtabe/ring.h"
#include "rtabe/scheme.h"

namespace rtabe {

inline constexpr std::array<uint8_t, 6> kEnvelopeMagic = {'R', 'T', 'A',
                                                          'B', 'E', '1'};

enum class EnvelopeKind : uint8_t {
  kParams = 1,
  kPublicKey = 2,
  kMasterSecretKey = 3,
  kUserSecretKey = 4,
  kCiphertext = 5,
  kIdentityRecord = 6,
  kContainer = 7,
};

// The key authority's persisted state for one identity.
struct IdentityRecord {
  Params params;
  std::string identity;
  RingElement u;
  RingElement sk_u;
  AttributeSet issued;

  friend bool operator==(const IdentityRecord&,
                         const IdentityRecord&) = default;
};

// A payload split into message-space blocks, all under one policy.
struct CiphertextContainer {
  Params params;
  std::vector<Ciphertext> blocks;
  uint64_t original_length = 0;

  friend bool operator==(const CiphertextContainer&,
                         const CiphertextContainer&) = default;
};

// Width in bytes of one serialized coefficient for modulus q.
size_t CoefficientWidth(uint64_t q);

std::vector<uint8_t> EncodeParams(const Params& params);
std::vector<uint8_t> EncodePublicKey(const PublicKey& pk);
std::vector<uint8_t> EncodeMasterSecretKey(const MasterSecretKey& msk);
std::vector<uint8_t> EncodeUserSecretKey(const UserSecretKey& usk);
std::vector<uint8_t> EncodeCiphertext(const Ciphertext& ct);
std::vector<uint8_t> EncodeIdentityRecord(const IdentityRecord& record);
std::vector<uint8_t> EncodeContainer(const CiphertextContainer& container);

absl::StatusOr<Params> DecodeParams(std::span<const uint8_t> bytes);
absl::StatusOr<PublicKey> DecodePublicKey(std::span<const uint8_t> bytes);
absl::StatusOr<MasterSecretKey> DecodeMasterSecretKey(
    std::span<const uint8_t> bytes);
absl::StatusOr<UserSecretKey> DecodeUserSecretKey(
    std::span<const uint8_t> bytes);
absl::StatusOr<Ciphertext> DecodeCiphertext(std::span<const uint8_t> bytes);
absl::StatusOr<IdentityRecord> DecodeIdentityRecord(
    std::span<const uint8_t> bytes);
absl::StatusOr<CiphertextContainer> DecodeContainer(
    std::span<const uint8_t> bytes);

// Reads only the magic and kind byte.
absl::StatusOr<EnvelopeKind> PeekEnvelopeKind(std::span<const uint8_t> bytes);

}  // namespace rtabe

#endif  // RTABE_CODEC_H_
