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

// Ciphertext-policy ABE over R_q.
//
//   Setup:   PK_0 = a*s + p*e,  PK_i = a_i*s + p*e_i,  public a'.
//   KeyGen:  SK_u = u*s + p*e',  SK_{i,u} = inv(a_i)*u + p*e'_i.
//   Encrypt: r uniform, {r_i} = Share(T, r),
//            C_i = r_i*PK_i + p*e''_i,  C' = r*a' + p*e'',
//            C = r*PK_0 + p*e''' + M.
//   Decrypt: R = Combine(T, {C_i * SK_{i,u}}),
//            R' = R - a'^{-1} (SK_u - PK_0) C',
//            M = center(C - R') mod p.
//
// inv(a_i) is selected by Params::mode.inverse. With kExactInverse and
// kNoiseOff the pipeline is exactly correct; other modes are measured.

#ifndef RTABE_SCHEME_H_
#define RTABE_SCHEME_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "rtabe/params.h"
#include "rtabe/policy.h"
#include "rtabe/prng.h"
#include "rtabe/ring.h"
#include "rtabe/sharing.h"

namespace rtabe {

inline constexpr int kMaxInvertibleResamples = 100;

struct PublicKey {
  Params params;
  RingElement a_prime;
  // pk[0] = PK_0, pk[i] = PK_i for attribute i.
  std::vector<RingElement> pk;

  uint32_t n_attrs() const { return static_cast<uint32_t>(pk.size()) - 1; }

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct MasterSecretKey {
  Params params;
  RingElement s;
  RingElement a;
  // attr_a[i - 1] = a_i.
  std::vector<RingElement> attr_a;

  uint32_t n_attrs() const { return static_cast<uint32_t>(attr_a.size()); }

  friend bool operator==(const MasterSecretKey&,
                         const MasterSecretKey&) = default;
};

// What the user holds. The randomizer u stays in the authority's registry.
struct UserSecretKey {
  Params params;
  std::string identity;
  RingElement sk_u;
  std::map<AttributeId, RingElement> per_attr;

  AttributeSet attributes() const;

  friend bool operator==(const UserSecretKey&, const UserSecretKey&) = default;
};

struct Ciphertext {
  Params params;
  AccessTree tree;
  // Keyed by leaf NodeId; key set equals tree.Leaves().
  std::map<NodeId, RingElement> c_leaves;
  RingElement c_prime;
  RingElement c_body;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

// Per-identity state held by the key authority. Every key issued to one
// identity binds the same u. Issuance for an identity is serialized.
class KeyRegistry {
 public:
  struct Record {
    RingElement u;
    RingElement sk_u;
    AttributeSet issued;
  };

  KeyRegistry() = default;
  KeyRegistry(const KeyRegistry&) = delete;
  KeyRegistry& operator=(const KeyRegistry&) = delete;

  std::optional<Record> Lookup(std::string_view identity) const;
  std::map<std::string, Record> Snapshot() const;
  // Overwrites any existing record; used when loading persisted state.
  void Restore(std::string identity, Record record);
  size_t size() const;

 private:
  friend absl::StatusOr<UserSecretKey> KeyGen(const MasterSecretKey&,
                                              std::string_view,
                                              const AttributeSet&, KeyRegistry&,
                                              Prng&);

  mutable std::mutex mu_;
  std::map<std::string, Record, std::less<>> records_;
};

struct SetupResult {
  PublicKey pk;
  MasterSecretKey msk;
};

// Samples a, a' (invertible in R_q) and a_1..a_n (invertible under the
// active inverse convention), resampling up to kMaxInvertibleResamples times.
absl::StatusOr<SetupResult> Setup(const Params& params, uint32_t n_attrs,
                                  Prng& prng);

// Issues SK_{i,u} for every i in `att`. The first request for an identity
// samples u and SK_u and stores them in `registry`; later requests reuse them.
absl::StatusOr<UserSecretKey> KeyGen(const MasterSecretKey& msk,
                                     std::string_view identity,
                                     const AttributeSet& att,
                                     KeyRegistry& registry, Prng& prng);

// The encryption randomness, captured for tests and noise analysis.
struct EncryptionTrace {
  std::optional<RingElement> r;
  ShareMap r_shares;
  std::map<NodeId, RingElement> e_leaves;  // e''_i
  std::optional<RingElement> e_prime;      // e''
  std::optional<RingElement> e_body;       // e'''
};

// `message` must have every coefficient below p.
absl::StatusOr<Ciphertext> Encrypt(const PublicKey& pk,
                                   const RingElement& message,
                                   const AccessTree& tree, Prng& prng,
                                   EncryptionTrace* trace = nullptr);

struct DecryptOptions {
  // When set, a result different from this message is reported as
  // DecryptionFailed instead of being returned.
  std::optional<RingElement> expected_message;
};

// Returns NotAuthorized (PermissionDenied) when the key's attributes do not
// satisfy the ciphertext's tree.
absl::StatusOr<RingElement> Decrypt(const Ciphertext& ct,
                                    const UserSecretKey& usk,
                                    const PublicKey& pk,
                                    const DecryptOptions& options = {});

// Decryption without the authorization check, over an arbitrary pool of
// attribute keys and one SK_u. Used to exercise collusion.
absl::StatusOr<RingElement> DecryptWithKeyPool(
    const Ciphertext& ct, const RingElement& sk_u,
    const std::map<AttributeId, RingElement>& per_attr, const PublicKey& pk);

// inv(a_i) under params.mode.inverse.
absl::StatusOr<RingElement> AttributeInverse(const RingElement& a_i,
                                             const Params& params);

absl::Status NotAuthorizedError(std::string_view message);
bool IsNotAuthorized(const absl::Status& status);
absl::Status DecryptionFailedError(std::string_view message);
bool IsDecryptionFailed(const absl::Status& status);

}  // namespace rtabe

#endif  // RTABE_SCHEME_H_
