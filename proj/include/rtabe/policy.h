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

// Threshold access trees over numeric attributes.
//
// Policy text grammar:
//
//   policy := expr
//   expr   := leaf | "and(" list ")" | "or(" list ")"
//           | "thresh(" INT "," list ")"
//   list   := expr ("," expr)*
//   leaf   := "att" INT
//
// Whitespace is insignificant. and(...) is a gate with threshold equal to its
// arity, or(...) a gate with threshold 1.

#ifndef RTABE_POLICY_H_
#define RTABE_POLICY_H_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace rtabe {

using AttributeId = uint32_t;
// Preorder position of a node; the root is 0. Leaf identifiers are the
// NodeIds of leaves.
using NodeId = uint32_t;

inline constexpr uint32_t kMaxPolicyDepth = 64;

struct PolicyNode {
  enum class Kind : uint8_t { kLeaf = 0, kGate = 1 };

  Kind kind = Kind::kLeaf;
  AttributeId attribute = 0;  // leaves only
  uint32_t threshold = 1;     // 1 for leaves
  std::vector<NodeId> children;

  bool is_leaf() const { return kind == Kind::kLeaf; }

  friend bool operator==(const PolicyNode&, const PolicyNode&) = default;
};

class AccessTree {
 public:
  static AccessTree Leaf(AttributeId attribute);
  // Requires 1 <= threshold <= children.size() and attributes >= 1.
  static absl::StatusOr<AccessTree> Gate(uint32_t threshold,
                                         std::vector<AccessTree> children);
  static absl::StatusOr<AccessTree> And(std::vector<AccessTree> children);
  static absl::StatusOr<AccessTree> Or(std::vector<AccessTree> children);

  // Accepts a node table in preorder: node 0 is the root and every node's
  // children are the consecutive subtrees that follow it.
  static absl::StatusOr<AccessTree> FromNodes(std::vector<PolicyNode> nodes);

  const std::vector<PolicyNode>& nodes() const { return nodes_; }
  const PolicyNode& node(NodeId id) const { return nodes_[id]; }
  NodeId root() const { return 0; }
  size_t size() const { return nodes_.size(); }

  // L_T in preorder.
  std::vector<NodeId> Leaves() const;
  // A single leaf has depth 1.
  uint32_t Depth() const;
  AttributeId MaxAttribute() const;

  // Attributes within [1, n_attrs] and every gate arity below q.
  absl::Status ValidateFor(uint64_t q, uint32_t n_attrs) const;

  friend bool operator==(const AccessTree&, const AccessTree&) = default;

 private:
  explicit AccessTree(std::vector<PolicyNode> nodes)
      : nodes_(std::move(nodes)) {}

  std::vector<PolicyNode> nodes_;
};

// A finite set of attribute ids.
class AttributeSet {
 public:
  AttributeSet() = default;
  AttributeSet(std::initializer_list<AttributeId> ids) : ids_(ids) {}
  explicit AttributeSet(std::set<AttributeId> ids) : ids_(std::move(ids)) {}

  // Rejects duplicates, zero, and ids above n_attrs.
  static absl::StatusOr<AttributeSet> Create(std::span<const AttributeId> ids,
                                             uint32_t n_attrs);

  bool Contains(AttributeId id) const { return ids_.contains(id); }
  void Insert(AttributeId id) { ids_.insert(id); }
  size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::set<AttributeId>& ids() const { return ids_; }

  friend bool operator==(const AttributeSet&, const AttributeSet&) = default;

 private:
  std::set<AttributeId> ids_;
};

// Parses policy text. With `n_attrs` set, attributes above it are rejected.
// Errors carry "line L, column C" of the offending character.
absl::StatusOr<AccessTree> ParsePolicy(
    std::string_view text, std::optional<uint32_t> n_attrs = std::nullopt);

// Canonical text; ParsePolicy(FormatPolicy(t)) == t.
std::string FormatPolicy(const AccessTree& tree);

// F_T(att).
bool Evaluate(const AccessTree& tree, const AttributeSet& att);

// A sorted set of leaves that satisfies the tree, keeping exactly k_v
// satisfied children (lowest child index first) at every gate it descends
// into. nullopt when `att` does not satisfy the tree.
std::optional<std::vector<NodeId>> SelectSatisfyingSubset(
    const AccessTree& tree, const AttributeSet& att);

}  // namespace rtabe

#endif  // RTABE_POLICY_H_
