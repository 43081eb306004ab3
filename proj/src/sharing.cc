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

#include "rtabe/sharing.h"

#include <algorithm>
#include <optional>
#include <vector>

#include "absl/strings/str_cat.h"
#include "rtabe/modular.h"
#include "rtabe/sampler.h"
#include "rtabe/status_macros.h"

namespace rtabe {
namespace {

// Horner evaluation of sum_j coeffs[j] * y^j at the scalar y.
RingElement EvaluateAt(const std::vector<RingElement>& coeffs, uint64_t y) {
  RingElement acc = coeffs.back();
  for (size_t j = coeffs.size() - 1; j-- > 0;) {
    acc = *acc.ScalarMul(y).Add(coeffs[j]);
  }
  return acc;
}

void ShareNode(const AccessTree& tree, NodeId id, const RingElement& value,
               Prng& prng, ShareMap& out) {
  const PolicyNode& node = tree.node(id);
  if (node.is_leaf()) {
    out.emplace(id, value);
    return;
  }
  std::vector<RingElement> poly;
  poly.reserve(node.threshold);
  poly.push_back(value);
  for (uint32_t j = 1; j < node.threshold; ++j) {
    poly.push_back(SampleUniform(value.context(), prng));
  }
  for (size_t i = 0; i < node.children.size(); ++i) {
    ShareNode(tree, node.children[i], EvaluateAt(poly, i + 1), prng, out);
  }
}

absl::StatusOr<std::optional<RingElement>> RecoverNode(const AccessTree& tree,
                                                       NodeId id,
                                                       const ShareMap& shares) {
  const PolicyNode& node = tree.node(id);
  if (node.is_leaf()) {
    auto it = shares.find(id);
    if (it == shares.end()) return std::optional<RingElement>();
    return std::optional<RingElement>(it->second);
  }
  std::vector<uint64_t> indices;
  std::vector<RingElement> values;
  for (size_t i = 0; i < node.children.size(); ++i) {
    if (indices.size() == node.threshold) break;
    RTABE_ASSIGN_OR_RETURN(std::optional<RingElement> child,
                           RecoverNode(tree, node.children[i], shares));
    if (child.has_value()) {
      indices.push_back(i + 1);
      values.push_back(*std::move(child));
    }
  }
  if (indices.size() < node.threshold) return std::optional<RingElement>();

  const uint64_t q = values.front().q();
  RingElement acc = RingElement::Zero(values.front().context());
  for (size_t j = 0; j < values.size(); ++j) {
    RTABE_ASSIGN_OR_RETURN(uint64_t weight, LagrangeAtZero(indices, j, q));
    RTABE_ASSIGN_OR_RETURN(acc, acc.Add(values[j].ScalarMul(weight)));
  }
  return std::optional<RingElement>(std::move(acc));
}

}  // namespace

absl::StatusOr<ShareMap> Share(const AccessTree& tree,
                               const RingElement& secret, Prng& prng) {
  for (const PolicyNode& node : tree.nodes()) {
    if (node.children.size() >= secret.q()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Gate arity ", node.children.size(),
                       " must be below q = ", secret.q(), "."));
    }
  }
  ShareMap shares;
  ShareNode(tree, tree.root(), secret, prng, shares);
  return shares;
}

absl::StatusOr<uint64_t> LagrangeAtZero(std::span<const uint64_t> indices,
                                        size_t which, uint64_t q) {
  if (which >= indices.size()) {
    return absl::InvalidArgumentError(absl::StrCat("Position ", which,
                                                   " outside ", indices.size(),
                                                   " interpolation points."));
  }
  std::vector<uint64_t> reduced;
  for (uint64_t x : indices) reduced.push_back(x % q);
  std::sort(reduced.begin(), reduced.end());
  if (auto dup = std::adjacent_find(reduced.begin(), reduced.end());
      dup != reduced.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Interpolation points coincide modulo q at ", *dup, "."));
  }
  const uint64_t xj = indices[which] % q;
  uint64_t numerator = 1;
  uint64_t denominator = 1;
  for (size_t t = 0; t < indices.size(); ++t) {
    if (t == which) continue;
    const uint64_t xt = indices[t] % q;
    numerator = MulMod(numerator, NegMod(xt, q), q);
    denominator = MulMod(denominator, SubMod(xj, xt, q), q);
  }
  return MulMod(numerator, *InvModPrime(denominator, q), q);
}

absl::StatusOr<RingElement> Combine(const AccessTree& tree,
                                    const ShareMap& shares) {
  RTABE_ASSIGN_OR_RETURN(std::optional<RingElement> root,
                         RecoverNode(tree, tree.root(), shares));
  if (!root.has_value()) {
    return absl::AbortedError(
        "Supplied leaves do not satisfy the access tree.");
  }
  return *std::move(root);
}

}  // namespace rtabe
