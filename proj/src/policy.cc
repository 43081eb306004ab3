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

#include "rtabe/policy.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace rtabe {
namespace {

// Walks the subtree at `id`, which must sit at preorder position `expected`.
// Returns the preorder position after the subtree.
absl::StatusOr<NodeId> CheckPreorder(const std::vector<PolicyNode>& nodes,
                                     NodeId id, NodeId expected,
                                     uint32_t depth) {
  if (depth > kMaxPolicyDepth) {
    return absl::InvalidArgumentError(
        absl::StrCat("Access tree deeper than ", kMaxPolicyDepth, "."));
  }
  if (id != expected || id >= nodes.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Node ", id, " is not at preorder position ", expected, "."));
  }
  const PolicyNode& node = nodes[id];
  if (node.is_leaf()) {
    if (node.attribute == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("Leaf ", id, " has attribute 0; ids start at 1."));
    }
    if (node.threshold != 1 || !node.children.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Leaf ", id, " must have threshold 1, no children."));
    }
    return id + 1;
  }
  if (node.attribute != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("Gate ", id, " must not carry an attribute."));
  }
  if (node.children.empty() || node.threshold < 1 ||
      node.threshold > node.children.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Gate ", id, " has threshold ", node.threshold, " with ",
                     node.children.size(), " children."));
  }
  NodeId next = id + 1;
  for (NodeId child : node.children) {
    auto after = CheckPreorder(nodes, child, next, depth + 1);
    if (!after.ok()) return after.status();
    next = *after;
  }
  return next;
}

bool EvaluateNode(const AccessTree& tree, NodeId id, const AttributeSet& att) {
  const PolicyNode& node = tree.node(id);
  if (node.is_leaf()) return att.Contains(node.attribute);
  uint32_t satisfied = 0;
  for (NodeId child : node.children) {
    if (EvaluateNode(tree, child, att) && ++satisfied >= node.threshold) {
      return true;
    }
  }
  return false;
}

void SelectNode(const AccessTree& tree, NodeId id, const AttributeSet& att,
                std::vector<NodeId>& out) {
  const PolicyNode& node = tree.node(id);
  if (node.is_leaf()) {
    out.push_back(id);
    return;
  }
  uint32_t taken = 0;
  for (NodeId child : node.children) {
    if (taken == node.threshold) break;
    if (EvaluateNode(tree, child, att)) {
      SelectNode(tree, child, att, out);
      ++taken;
    }
  }
}

void FormatNode(const AccessTree& tree, NodeId id, std::string& out) {
  const PolicyNode& node = tree.node(id);
  if (node.is_leaf()) {
    absl::StrAppend(&out, "att", node.attribute);
    return;
  }
  const size_t arity = node.children.size();
  if (node.threshold == 1) {
    out += "or(";
  } else if (node.threshold == arity) {
    out += "and(";
  } else {
    absl::StrAppend(&out, "thresh(", node.threshold, ", ");
  }
  for (size_t i = 0; i < arity; ++i) {
    if (i > 0) out += ", ";
    FormatNode(tree, node.children[i], out);
  }
  out += ")";
}

uint32_t DepthOf(const AccessTree& tree, NodeId id) {
  uint32_t deepest = 0;
  for (NodeId child : tree.node(id).children) {
    deepest = std::max(deepest, DepthOf(tree, child));
  }
  return deepest + 1;
}

}  // namespace

AccessTree AccessTree::Leaf(AttributeId attribute) {
  PolicyNode node;
  node.kind = PolicyNode::Kind::kLeaf;
  node.attribute = attribute;
  return AccessTree({node});
}

absl::StatusOr<AccessTree> AccessTree::Gate(uint32_t threshold,
                                            std::vector<AccessTree> children) {
  std::vector<PolicyNode> nodes(1);
  nodes[0].kind = PolicyNode::Kind::kGate;
  nodes[0].threshold = threshold;
  for (const AccessTree& child : children) {
    const NodeId offset = static_cast<NodeId>(nodes.size());
    nodes[0].children.push_back(offset);
    for (PolicyNode node : child.nodes_) {
      for (NodeId& c : node.children) c += offset;
      nodes.push_back(std::move(node));
    }
  }
  return FromNodes(std::move(nodes));
}

absl::StatusOr<AccessTree> AccessTree::And(std::vector<AccessTree> children) {
  const auto arity = static_cast<uint32_t>(children.size());
  return Gate(arity, std::move(children));
}

absl::StatusOr<AccessTree> AccessTree::Or(std::vector<AccessTree> children) {
  return Gate(1, std::move(children));
}

absl::StatusOr<AccessTree> AccessTree::FromNodes(
    std::vector<PolicyNode> nodes) {
  if (nodes.empty()) {
    return absl::InvalidArgumentError("Access tree has no nodes.");
  }
  auto end = CheckPreorder(nodes, 0, 0, 1);
  if (!end.ok()) return end.status();
  if (*end != nodes.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Access tree has ", nodes.size() - *end, " unreachable nodes."));
  }
  return AccessTree(std::move(nodes));
}

std::vector<NodeId> AccessTree::Leaves() const {
  std::vector<NodeId> leaves;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].is_leaf()) leaves.push_back(id);
  }
  return leaves;
}

uint32_t AccessTree::Depth() const { return DepthOf(*this, root()); }

AttributeId AccessTree::MaxAttribute() const {
  AttributeId max_attr = 0;
  for (const PolicyNode& node : nodes_) {
    max_attr = std::max(max_attr, node.attribute);
  }
  return max_attr;
}

absl::Status AccessTree::ValidateFor(uint64_t q, uint32_t n_attrs) const {
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const PolicyNode& node = nodes_[id];
    if (node.is_leaf() && node.attribute > n_attrs) {
      return absl::InvalidArgumentError(
          absl::StrCat("Leaf ", id, " uses attribute ", node.attribute,
                       " outside the universe 1..", n_attrs, "."));
    }
    // Child indices 1..|ch_v| must be distinct and nonzero modulo q.
    if (node.children.size() >= q) {
      return absl::InvalidArgumentError(
          absl::StrCat("Gate ", id, " has ", node.children.size(),
                       " children; must be below q = ", q, "."));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<AttributeSet> AttributeSet::Create(
    std::span<const AttributeId> ids, uint32_t n_attrs) {
  std::set<AttributeId> out;
  for (AttributeId id : ids) {
    if (id == 0 || id > n_attrs) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Attribute ", id, " outside the universe 1..", n_attrs, "."));
    }
    if (!out.insert(id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("Attribute ", id, " listed twice."));
    }
  }
  return AttributeSet(std::move(out));
}

std::string FormatPolicy(const AccessTree& tree) {
  std::string out;
  FormatNode(tree, tree.root(), out);
  return out;
}

bool Evaluate(const AccessTree& tree, const AttributeSet& att) {
  return EvaluateNode(tree, tree.root(), att);
}

std::optional<std::vector<NodeId>> SelectSatisfyingSubset(
    const AccessTree& tree, const AttributeSet& att) {
  if (!Evaluate(tree, att)) return std::nullopt;
  std::vector<NodeId> leaves;
  SelectNode(tree, tree.root(), att, leaves);
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

}  // namespace rtabe
