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

// Secret sharing of a ring element along an access tree.
//
// Every gate v with threshold k_v holds a polynomial q_v(y) of degree k_v - 1
// whose coefficients are ring elements. The root polynomial has constant term
// equal to the secret; the i-th child (1-based, declaration order) of v gets a
// fresh polynomial with constant term q_v(i). Leaves end up holding their
// q_v(0). Reconstruction runs bottom-up with Lagrange weights at zero.

#ifndef RTABE_SHARING_H_
#define RTABE_SHARING_H_

#include <cstdint>
#include <map>
#include <span>

#include "absl/status/statusor.h"
#include "rtabe/policy.h"
#include "rtabe/prng.h"
#include "rtabe/ring.h"

namespace rtabe {

// Leaf NodeId -> that leaf's share.
using ShareMap = std::map<NodeId, RingElement>;

// Key set of the result is exactly tree.Leaves(). Fails if some gate has q or
// more children.
absl::StatusOr<ShareMap> Share(const AccessTree& tree,
                               const RingElement& secret, Prng& prng);

// prod_{t != which} (0 - i_t) / (i_which - i_t) mod q.
// Indices must be distinct modulo q.
absl::StatusOr<uint64_t> LagrangeAtZero(std::span<const uint64_t> indices,
                                        size_t which, uint64_t q);

// Recovers the root value from leaf values. At each gate the first k_v
// children (by index) that recover a value are combined. Returns Aborted when
// the supplied leaves do not satisfy the tree.
absl::StatusOr<RingElement> Combine(const AccessTree& tree,
                                    const ShareMap& shares);

}  // namespace rtabe

#endif  // RTABE_SHARING_H_
