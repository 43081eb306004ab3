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

// Structurally valid objects with random contents, for codec round trips.

#ifndef RTABE_TESTING_RANDOM_OBJECTS_H_
#define RTABE_TESTING_RANDOM_OBJECTS_H_

#include <string>

#include "rtabe/codec.h"
#include "rtabe/params.h"
#include "rtabe/prng.h"
#include "rtabe/sampler.h"
#include "rtabe/scheme.h"
#include "testing/oracles.h"

namespace rtabe::testing {

// One parameter set per coefficient width: 2, 4 and 8 bytes.
inline Params RandomParams(Prng& prng) {
  const SchemeMode mode =
      *SchemeMode::FromByte(static_cast<uint8_t>(prng.Uniform(4)));
  switch (prng.Uniform(4)) {
    case 0:
      return Params::Toy(mode);
    case 1:
      return Params::Desk(mode);
    case 2:
      return Params{.n = 16, .q = 786433, .p = 5, .sigma = 2.5, .mode = mode};
    default:
      return Params{
          .n = 8, .q = 1099511627873, .p = 65537, .sigma = 8.0, .mode = mode};
  }
}

inline RingElement RandomElement(const Params& params, Prng& prng) {
  return SampleUniform(*RingContext::ForParams(params), prng);
}

inline std::string RandomIdentity(Prng& prng) {
  std::string out(prng.Uniform(12), '\0');
  for (char& c : out) c = static_cast<char>(prng.Uniform(256));
  return out;
}

inline PublicKey RandomPublicKey(const Params& params, Prng& prng) {
  PublicKey pk{
      .params = params, .a_prime = RandomElement(params, prng), .pk = {}};
  const size_t n_attrs = 1 + prng.Uniform(6);
  for (size_t i = 0; i <= n_attrs; ++i) {
    pk.pk.push_back(RandomElement(params, prng));
  }
  return pk;
}

inline MasterSecretKey RandomMasterSecretKey(const Params& params, Prng& prng) {
  MasterSecretKey msk{.params = params,
                      .s = RandomElement(params, prng),
                      .a = RandomElement(params, prng),
                      .attr_a = {}};
  const size_t n_attrs = 1 + prng.Uniform(6);
  for (size_t i = 0; i < n_attrs; ++i) {
    msk.attr_a.push_back(RandomElement(params, prng));
  }
  return msk;
}

inline UserSecretKey RandomUserSecretKey(const Params& params, Prng& prng) {
  UserSecretKey usk{.params = params,
                    .identity = RandomIdentity(prng),
                    .sk_u = RandomElement(params, prng),
                    .per_attr = {}};
  const size_t count = prng.Uniform(6);
  for (size_t i = 0; i < count; ++i) {
    usk.per_attr.emplace(static_cast<AttributeId>(1 + prng.Uniform(20)),
                         RandomElement(params, prng));
  }
  return usk;
}

inline Ciphertext RandomCiphertext(const Params& params, Prng& prng) {
  Ciphertext ct{.params = params,
                .tree = RandomTree(prng, TreeShape{}),
                .c_leaves = {},
                .c_prime = RandomElement(params, prng),
                .c_body = RandomElement(params, prng)};
  for (NodeId leaf : ct.tree.Leaves()) {
    ct.c_leaves.emplace(leaf, RandomElement(params, prng));
  }
  return ct;
}

inline IdentityRecord RandomIdentityRecord(const Params& params, Prng& prng) {
  IdentityRecord record{.params = params,
                        .identity = RandomIdentity(prng),
                        .u = RandomElement(params, prng),
                        .sk_u = RandomElement(params, prng),
                        .issued = {}};
  const size_t count = prng.Uniform(6);
  for (size_t i = 0; i < count; ++i) {
    record.issued.Insert(static_cast<AttributeId>(1 + prng.Uniform(20)));
  }
  return record;
}

inline CiphertextContainer RandomContainer(const Params& params, Prng& prng) {
  CiphertextContainer container{
      .params = params, .blocks = {}, .original_length = prng.NextU64()};
  const size_t count = prng.Uniform(3);
  for (size_t i = 0; i < count; ++i) {
    container.blocks.push_back(RandomCiphertext(params, prng));
  }
  return container;
}

}  // namespace rtabe::testing

#endif  // RTABE_TESTING_RANDOM_OBJECTS_H_
