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

// Independent reference implementations used to check the library. Nothing
// here calls into the code under test except for constructing inputs.

#ifndef RTABE_TESTING_ORACLES_H_
#define RTABE_TESTING_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "rtabe/params.h"
#include "rtabe/policy.h"
#include "rtabe/prng.h"
#include "rtabe/ring.h"

namespace rtabe::testing {

// Product in Z_q[x]/(x^n + 1): the full length-2n convolution over the
// integers, then x^(n+k) folded onto -x^k.
inline std::vector<uint64_t> NegacyclicProduct(const std::vector<uint64_t>& a,
                                               const std::vector<uint64_t>& b,
                                               uint64_t q) {
  const size_t n = a.size();
  std::vector<unsigned __int128> full(2 * n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      full[i + j] += static_cast<unsigned __int128>(a[i]) * b[j] % q;
    }
  }
  std::vector<uint64_t> out(n);
  for (size_t k = 0; k < n; ++k) {
    const uint64_t lo = static_cast<uint64_t>(full[k] % q);
    const uint64_t hi = static_cast<uint64_t>(full[k + n] % q);
    out[k] = (lo + q - hi) % q;
  }
  return out;
}

// Same convolution for small signed coefficients, no reduction at all.
inline std::vector<__int128> IntegerNegacyclicProduct(
    const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
  const size_t n = a.size();
  std::vector<__int128> out(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const __int128 term = static_cast<__int128>(a[i]) * b[j];
      if (i + j < n) {
        out[i + j] += term;
      } else {
        out[i + j - n] -= term;
      }
    }
  }
  return out;
}

// F_T by direct recursion on the node table.
inline bool SatisfiesOracle(const AccessTree& tree,
                            const std::set<AttributeId>& att, NodeId node = 0) {
  const PolicyNode& v = tree.node(node);
  if (v.is_leaf()) return att.count(v.attribute) > 0;
  uint32_t satisfied = 0;
  for (NodeId child : v.children) {
    if (SatisfiesOracle(tree, att, child)) ++satisfied;
  }
  return satisfied >= v.threshold;
}

inline int64_t ExtendedGcdInverse(int64_t a, int64_t m) {
  int64_t old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    const int64_t quot = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - quot * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - quot * s);
  }
  return ((old_s % m) + m) % m;
}

// Lagrange weight at zero as an exact rational, reduced mod q only at the
// end. Only valid for small index sets whose products fit in 128 bits.
inline uint64_t LagrangeOracle(const std::vector<uint64_t>& indices,
                               size_t which, uint64_t q) {
  __int128 num = 1;
  __int128 den = 1;
  const __int128 xj = static_cast<__int128>(indices[which]);
  for (size_t t = 0; t < indices.size(); ++t) {
    if (t == which) continue;
    const __int128 xt = static_cast<__int128>(indices[t]);
    num *= -xt;
    den *= xj - xt;
  }
  const __int128 mq = static_cast<__int128>(q);
  const int64_t n_mod = static_cast<int64_t>(((num % mq) + mq) % mq);
  const int64_t d_mod = static_cast<int64_t>(((den % mq) + mq) % mq);
  const int64_t inv = ExtendedGcdInverse(d_mod, static_cast<int64_t>(q));
  return static_cast<uint64_t>(static_cast<__int128>(n_mod) * inv % mq);
}

struct TreeShape {
  uint32_t max_leaves = 16;
  uint32_t max_depth = 4;
  uint32_t n_attrs = 8;
  uint32_t max_arity = 4;
};

namespace internal {

inline AccessTree RandomSubtree(Prng& prng, const TreeShape& shape,
                                uint32_t depth_left, uint32_t budget) {
  const bool make_leaf = depth_left <= 1 || budget < 2 || prng.Uniform(4) == 0;
  if (make_leaf) {
    return AccessTree::Leaf(
        static_cast<AttributeId>(1 + prng.Uniform(shape.n_attrs)));
  }
  const uint32_t max_arity = std::min(shape.max_arity, budget);
  const uint32_t arity = 2 + static_cast<uint32_t>(prng.Uniform(max_arity - 1));
  std::vector<AccessTree> children;
  uint32_t remaining = budget;
  for (uint32_t c = 0; c < arity; ++c) {
    const uint32_t still_needed = arity - c - 1;
    const uint32_t child_budget =
        c + 1 == arity
            ? remaining
            : std::max<uint32_t>(1, (remaining - still_needed) / (arity - c));
    children.push_back(
        RandomSubtree(prng, shape, depth_left - 1, child_budget));
    remaining -= static_cast<uint32_t>(children.back().Leaves().size());
  }
  const uint32_t threshold = 1 + static_cast<uint32_t>(prng.Uniform(arity));
  return *AccessTree::Gate(threshold, std::move(children));
}

}  // namespace internal

// A random threshold tree within `shape`. Leaves may repeat attributes.
inline AccessTree RandomTree(Prng& prng, const TreeShape& shape) {
  const uint32_t budget =
      1 + static_cast<uint32_t>(prng.Uniform(shape.max_leaves));
  return internal::RandomSubtree(prng, shape, shape.max_depth, budget);
}

// The distinct attributes appearing at the leaves.
inline std::vector<AttributeId> LeafAttributes(const AccessTree& tree) {
  std::set<AttributeId> ids;
  for (NodeId leaf : tree.Leaves()) ids.insert(tree.node(leaf).attribute);
  return {ids.begin(), ids.end()};
}

inline std::set<AttributeId> SubsetFromMask(
    const std::vector<AttributeId>& attrs, uint64_t mask) {
  std::set<AttributeId> out;
  for (size_t i = 0; i < attrs.size(); ++i) {
    if ((mask >> i) & 1) out.insert(attrs[i]);
  }
  return out;
}

inline RingElement RandomElementBelow(
    const std::shared_ptr<const RingContext>& context, uint64_t bound,
    Prng& prng) {
  std::vector<uint64_t> coeffs(context->n());
  for (auto& c : coeffs) c = prng.Uniform(bound);
  return *RingElement::Create(context, std::move(coeffs));
}

inline RingElement RandomMessage(const Params& params, Prng& prng) {
  return RandomElementBelow(*RingContext::ForParams(params), params.p, prng);
}

}  // namespace rtabe::testing

#endif  // RTABE_TESTING_ORACLES_H_
