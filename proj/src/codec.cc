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

#include "rtabe/codec.h"

#include <bit>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "rtabe/status_macros.h"

namespace rtabe {
namespace {

constexpr size_t kHeaderBytes = 6 + 1 + 1 + 4 + 8 + 8 + 8;

class Writer {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U32(uint32_t v) { Uint(v, 4); }
  void U64(uint64_t v) { Uint(v, 8); }
  void Uint(uint64_t v, size_t width) {
    for (size_t i = 0; i < width; ++i) {
      out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
  }
  void Bytes(std::span<const uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }
  void String(const std::string& s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }

  void Header(EnvelopeKind kind, const Params& params) {
    Bytes(kEnvelopeMagic);
    U8(static_cast<uint8_t>(kind));
    U8(params.mode.ToByte());
    U32(params.n);
    U64(params.q);
    U64(params.p);
    U64(std::bit_cast<uint64_t>(params.sigma));
  }

  void Element(const RingElement& e) {
    const size_t width = CoefficientWidth(e.q());
    for (uint64_t c : e.coeffs()) Uint(c, width);
  }

  void Tree(const AccessTree& tree, NodeId id) {
    const PolicyNode& node = tree.node(id);
    if (node.is_leaf()) {
      U8(static_cast<uint8_t>(PolicyNode::Kind::kLeaf));
      U32(node.attribute);
      return;
    }
    U8(static_cast<uint8_t>(PolicyNode::Kind::kGate));
    U32(node.threshold);
    U32(static_cast<uint32_t>(node.children.size()));
    for (NodeId child : node.children) Tree(tree, child);
  }

  std::vector<uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  size_t offset() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

  absl::Status Error(size_t at, absl::string_view what) const {
    return absl::InvalidArgumentError(
        absl::StrCat("Decode error at offset ", at, ": ", what, "."));
  }

  absl::StatusOr<uint64_t> Uint(size_t width) {
    if (remaining() < width) {
      return Error(pos_, absl::StrCat("truncated input, needed ", width,
                                      " bytes, have ", remaining()));
    }
    uint64_t v = 0;
    for (size_t i = 0; i < width; ++i) {
      v |= uint64_t{bytes_[pos_ + i]} << (8 * i);
    }
    pos_ += width;
    return v;
  }
  absl::StatusOr<uint8_t> U8() {
    RTABE_ASSIGN_OR_RETURN(uint64_t v, Uint(1));
    return static_cast<uint8_t>(v);
  }
  absl::StatusOr<uint32_t> U32() {
    RTABE_ASSIGN_OR_RETURN(uint64_t v, Uint(4));
    return static_cast<uint32_t>(v);
  }
  absl::StatusOr<uint64_t> U64() { return Uint(8); }

  // A count whose items each occupy at least `min_item_bytes`.
  absl::StatusOr<uint32_t> Count(size_t min_item_bytes) {
    const size_t at = pos_;
    RTABE_ASSIGN_OR_RETURN(uint32_t count, U32());
    if (min_item_bytes > 0 && count > remaining() / min_item_bytes) {
      return Error(
          at, absl::StrCat("count ", count, " exceeds the remaining input"));
    }
    return count;
  }

  absl::StatusOr<std::string> String() {
    RTABE_ASSIGN_OR_RETURN(uint32_t length, Count(1));
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), length);
    pos_ += length;
    return s;
  }

  // Magic, kind and params. Returns the params.
  absl::StatusOr<Params> Header(EnvelopeKind expected) {
    const size_t start = pos_;
    if (remaining() < kEnvelopeMagic.size() ||
        std::memcmp(bytes_.data() + pos_, kEnvelopeMagic.data(),
                    kEnvelopeMagic.size()) != 0) {
      return Error(start, "bad magic, expected \"RTABE1\"");
    }
    pos_ += kEnvelopeMagic.size();
    const size_t kind_at = pos_;
    RTABE_ASSIGN_OR_RETURN(uint8_t kind, U8());
    if (kind < static_cast<uint8_t>(EnvelopeKind::kParams) ||
        kind > static_cast<uint8_t>(EnvelopeKind::kContainer)) {
      return Error(kind_at, absl::StrCat("unknown envelope kind ", kind));
    }
    if (kind != static_cast<uint8_t>(expected)) {
      return Error(kind_at, absl::StrCat("envelope kind ", kind, ", expected ",
                                         static_cast<int>(expected)));
    }
    const size_t mode_at = pos_;
    RTABE_ASSIGN_OR_RETURN(uint8_t mode_byte, U8());
    auto mode = SchemeMode::FromByte(mode_byte);
    if (!mode.ok()) return Error(mode_at, mode.status().message());
    const size_t params_at = pos_;
    Params params;
    params.mode = *mode;
    RTABE_ASSIGN_OR_RETURN(params.n, U32());
    RTABE_ASSIGN_OR_RETURN(params.q, U64());
    RTABE_ASSIGN_OR_RETURN(params.p, U64());
    RTABE_ASSIGN_OR_RETURN(uint64_t sigma_bits, U64());
    params.sigma = std::bit_cast<double>(sigma_bits);
    if (auto s = params.Validate(); !s.ok()) {
      return Error(params_at, s.message());
    }
    auto context = RingContext::ForParams(params);
    if (!context.ok()) return Error(params_at, context.status().message());
    context_ = *std::move(context);
    return params;
  }

  absl::StatusOr<RingElement> Element() {
    const size_t width = CoefficientWidth(context_->q());
    const size_t start = pos_;
    if (remaining() < width * context_->n()) {
      return Error(start, "truncated ring element");
    }
    std::vector<uint64_t> coeffs(context_->n());
    for (size_t i = 0; i < coeffs.size(); ++i) {
      const size_t at = pos_;
      RTABE_ASSIGN_OR_RETURN(coeffs[i], Uint(width));
      if (coeffs[i] >= context_->q()) {
        return Error(at, absl::StrCat("coefficient ", coeffs[i],
                                      " is not below q = ", context_->q()));
      }
    }
    return *RingElement::Create(context_, std::move(coeffs));
  }

  absl::StatusOr<AccessTree> Tree() {
    const size_t start = pos_;
    std::vector<PolicyNode> nodes;
    RTABE_RETURN_IF_ERROR(TreeNode(nodes, 1));
    auto tree = AccessTree::FromNodes(std::move(nodes));
    if (!tree.ok()) return Error(start, tree.status().message());
    return tree;
  }

  absl::Status Finish() const {
    if (remaining() != 0) {
      return Error(pos_, absl::StrCat(remaining(), " trailing bytes"));
    }
    return absl::OkStatus();
  }

  std::span<const uint8_t> Rest() const { return bytes_.subspan(pos_); }
  void Skip(size_t n) { pos_ += n; }

 private:
  absl::Status TreeNode(std::vector<PolicyNode>& nodes, uint32_t depth) {
    const size_t at = pos_;
    if (depth > kMaxPolicyDepth) return Error(at, "access tree too deep");
    RTABE_ASSIGN_OR_RETURN(uint8_t tag, U8());
    const NodeId id = static_cast<NodeId>(nodes.size());
    nodes.emplace_back();
    if (tag == static_cast<uint8_t>(PolicyNode::Kind::kLeaf)) {
      nodes[id].kind = PolicyNode::Kind::kLeaf;
      RTABE_ASSIGN_OR_RETURN(nodes[id].attribute, U32());
      return absl::OkStatus();
    }
    if (tag != static_cast<uint8_t>(PolicyNode::Kind::kGate)) {
      return Error(at, absl::StrCat("unknown tree node tag ", tag));
    }
    nodes[id].kind = PolicyNode::Kind::kGate;
    RTABE_ASSIGN_OR_RETURN(nodes[id].threshold, U32());
    // Smallest child encoding is a leaf: 5 bytes.
    RTABE_ASSIGN_OR_RETURN(uint32_t arity, Count(5));
    for (uint32_t i = 0; i < arity; ++i) {
      nodes[id].children.push_back(static_cast<NodeId>(nodes.size()));
      RTABE_RETURN_IF_ERROR(TreeNode(nodes, depth + 1));
    }
    return absl::OkStatus();
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
  std::shared_ptr<const RingContext> context_;
};

void WriteCiphertext(Writer& w, const Ciphertext& ct) {
  w.Header(EnvelopeKind::kCiphertext, ct.params);
  w.Tree(ct.tree, ct.tree.root());
  w.U32(static_cast<uint32_t>(ct.c_leaves.size()));
  for (const auto& [leaf, c_i] : ct.c_leaves) {
    w.U32(leaf);
    w.Element(c_i);
  }
  w.Element(ct.c_prime);
  w.Element(ct.c_body);
}

absl::StatusOr<Ciphertext> ReadCiphertext(Reader& r) {
  RTABE_ASSIGN_OR_RETURN(Params params, r.Header(EnvelopeKind::kCiphertext));
  RTABE_ASSIGN_OR_RETURN(AccessTree tree, r.Tree());
  const std::vector<NodeId> leaves = tree.Leaves();
  const size_t count_at = r.offset();
  RTABE_ASSIGN_OR_RETURN(uint32_t count, r.Count(4));
  if (count != leaves.size()) {
    return r.Error(count_at, absl::StrCat(count, " leaf components for ",
                                          leaves.size(), " leaves"));
  }
  std::map<NodeId, RingElement> c_leaves;
  for (uint32_t k = 0; k < count; ++k) {
    const size_t at = r.offset();
    RTABE_ASSIGN_OR_RETURN(uint32_t leaf, r.U32());
    if (leaf != leaves[k]) {
      return r.Error(at,
                     absl::StrCat("leaf id ", leaf, ", expected ", leaves[k]));
    }
    RTABE_ASSIGN_OR_RETURN(RingElement c_i, r.Element());
    c_leaves.emplace(leaf, std::move(c_i));
  }
  RTABE_ASSIGN_OR_RETURN(RingElement c_prime, r.Element());
  RTABE_ASSIGN_OR_RETURN(RingElement c_body, r.Element());
  return Ciphertext{.params = params,
                    .tree = std::move(tree),
                    .c_leaves = std::move(c_leaves),
                    .c_prime = std::move(c_prime),
                    .c_body = std::move(c_body)};
}

}  // namespace

size_t CoefficientWidth(uint64_t q) {
  const uint64_t max = q - 1;
  if (max <= 0xFFFF) return 2;
  if (max <= 0xFFFFFFFF) return 4;
  return 8;
}

std::vector<uint8_t> EncodeParams(const Params& params) {
  Writer w;
  w.Header(EnvelopeKind::kParams, params);
  return w.Take();
}

std::vector<uint8_t> EncodePublicKey(const PublicKey& pk) {
  Writer w;
  w.Header(EnvelopeKind::kPublicKey, pk.params);
  w.Element(pk.a_prime);
  w.U32(static_cast<uint32_t>(pk.pk.size()));
  for (const RingElement& e : pk.pk) w.Element(e);
  return w.Take();
}

std::vector<uint8_t> EncodeMasterSecretKey(const MasterSecretKey& msk) {
  Writer w;
  w.Header(EnvelopeKind::kMasterSecretKey, msk.params);
  w.Element(msk.s);
  w.Element(msk.a);
  w.U32(static_cast<uint32_t>(msk.attr_a.size()));
  for (const RingElement& e : msk.attr_a) w.Element(e);
  return w.Take();
}

std::vector<uint8_t> EncodeUserSecretKey(const UserSecretKey& usk) {
  Writer w;
  w.Header(EnvelopeKind::kUserSecretKey, usk.params);
  w.String(usk.identity);
  w.Element(usk.sk_u);
  w.U32(static_cast<uint32_t>(usk.per_attr.size()));
  for (const auto& [attr, key] : usk.per_attr) {
    w.U32(attr);
    w.Element(key);
  }
  return w.Take();
}

std::vector<uint8_t> EncodeCiphertext(const Ciphertext& ct) {
  Writer w;
  WriteCiphertext(w, ct);
  return w.Take();
}

std::vector<uint8_t> EncodeIdentityRecord(const IdentityRecord& record) {
  Writer w;
  w.Header(EnvelopeKind::kIdentityRecord, record.params);
  w.String(record.identity);
  w.Element(record.u);
  w.Element(record.sk_u);
  w.U32(static_cast<uint32_t>(record.issued.size()));
  for (AttributeId attr : record.issued) w.U32(attr);
  return w.Take();
}

std::vector<uint8_t> EncodeContainer(const CiphertextContainer& container) {
  Writer w;
  w.Header(EnvelopeKind::kContainer, container.params);
  w.U32(static_cast<uint32_t>(container.blocks.size()));
  for (const Ciphertext& block : container.blocks) WriteCiphertext(w, block);
  w.U64(container.original_length);
  return w.Take();
}

absl::StatusOr<Params> DecodeParams(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  RTABE_ASSIGN_OR_RETURN(Params params, r.Header(EnvelopeKind::kParams));
  RTABE_RETURN_IF_ERROR(r.Finish());
  return params;
}

absl::StatusOr<PublicKey> DecodePublicKey(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  RTABE_ASSIGN_OR_RETURN(Params params, r.Header(EnvelopeKind::kPublicKey));
  RTABE_ASSIGN_OR_RETURN(RingElement a_prime, r.Element());
  const size_t count_at = r.offset();
  RTABE_ASSIGN_OR_RETURN(uint32_t count,
                         r.Count(CoefficientWidth(params.q) * params.n));
  if (count < 2) {
    return r.Error(count_at, "public key needs PK_0 and at least one PK_i");
  }
  std::vector<RingElement> pk;
  pk.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    RTABE_ASSIGN_OR_RETURN(RingElement e, r.Element());
    pk.push_back(std::move(e));
  }
  RTABE_RETURN_IF_ERROR(r.Finish());
  return PublicKey{
      .params = params, .a_prime = std::move(a_prime), .pk = std::move(pk)};
}

absl::StatusOr<MasterSecretKey> DecodeMasterSecretKey(
    std::span<const uint8_t> bytes) {
  Reader r(bytes);
  RTABE_ASSIGN_OR_RETURN(Params params,
                         r.Header(EnvelopeKind::kMasterSecretKey));
  RTABE_ASSIGN_OR_RETURN(RingElement s, r.Element());
  RTABE_ASSIGN_OR_RETURN(RingElement a, r.Element());
  const size_t count_at = r.offset();
  RTABE_ASSIGN_OR_RETURN(uint32_t count,
                         r.Count(CoefficientWidth(params.q) * params.n));
  if (count == 0) return r.Error(count_at, "empty attribute universe");
  std::vector<RingElement> attr_a;
  attr_a.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    RTABE_ASSIGN_OR_RETURN(RingElement e, r.Element());
    attr_a.push_back(std::move(e));
  }
  RTABE_RETURN_IF_ERROR(r.Finish());
  return MasterSecretKey{.params = params,
                         .s = std::move(s),
                         .a = std::move(a),
                         .attr_a = std::move(attr_a)};
}

absl::StatusOr<UserSecretKey> DecodeUserSecretKey(
    std::span<const uint8_t> bytes) {
  Reader r(bytes);
  RTABE_ASSIGN_OR_RETURN(Params params, r.Header(EnvelopeKind::kUserSecretKey));
  RTABE_ASSIGN_OR_RETURN(std::string identity, r.String());
  RTABE_ASSIGN_OR_RETURN(RingElement sk_u, r.Element());
  RTABE_ASSIGN_OR_RETURN(uint32_t count,
                         r.Count(4 + CoefficientWidth(params.q) * params.n));
  std::map<AttributeId, RingElement> per_attr;
  AttributeId previous = 0;
  for (uint32_t k = 0; k < count; ++k) {
    const size_t at = r.offset();
    RTABE_ASSIGN_OR_RETURN(uint32_t attr, r.U32());
    if (attr <= previous) {
      return r.Error(
          at, absl::StrCat("attribute ", attr, " out of ascending order"));
    }
    previous = attr;
    RTABE_ASSIGN_OR_RETURN(RingElement key, r.Element());
    per_attr.emplace(attr, std::move(key));
  }
  RTABE_RETURN_IF_ERROR(r.Finish());
  return UserSecretKey{.params = params,
                       .identity = std::move(identity),
                       .sk_u = std::move(sk_u),
                       .per_attr = std::move(per_attr)};
}

absl::StatusOr<Ciphertext> DecodeCiphertext(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  RTABE_ASSIGN_OR_RETURN(Ciphertext ct, ReadCiphertext(r));
  RTABE_RETURN_IF_ERROR(r.Finish());
  return ct;
}

absl::StatusOr<IdentityRecord> DecodeIdentityRecord(
    std::span<const uint8_t> bytes) {
  Reader r(bytes);
  RTABE_ASSIGN_OR_RETURN(Params params,
                         r.Header(EnvelopeKind::kIdentityRecord));
  RTABE_ASSIGN_OR_RETURN(std::string identity, r.String());
  RTABE_ASSIGN_OR_RETURN(RingElement u, r.Element());
  RTABE_ASSIGN_OR_RETURN(RingElement sk_u, r.Element());
  RTABE_ASSIGN_OR_RETURN(uint32_t count, r.Count(4));
  AttributeSet issued;
  AttributeId previous = 0;
  for (uint32_t k = 0; k < count; ++k) {
    const size_t at = r.offset();
    RTABE_ASSIGN_OR_RETURN(uint32_t attr, r.U32());
    if (attr <= previous) {
      return r.Error(
          at, absl::StrCat("attribute ", attr, " out of ascending order"));
    }
    previous = attr;
    issued.Insert(attr);
  }
  RTABE_RETURN_IF_ERROR(r.Finish());
  return IdentityRecord{.params = params,
                        .identity = std::move(identity),
                        .u = std::move(u),
                        .sk_u = std::move(sk_u),
                        .issued = std::move(issued)};
}

absl::StatusOr<CiphertextContainer> DecodeContainer(
    std::span<const uint8_t> bytes) {
  Reader r(bytes);
  RTABE_ASSIGN_OR_RETURN(Params params, r.Header(EnvelopeKind::kContainer));
  RTABE_ASSIGN_OR_RETURN(uint32_t count, r.Count(kHeaderBytes));
  CiphertextContainer container{.params = params, .blocks = {}};
  for (uint32_t k = 0; k < count; ++k) {
    const size_t at = r.offset();
    // Block offsets are reported relative to the whole container.
    Reader block_reader(r.Rest());
    auto block = ReadCiphertext(block_reader);
    if (!block.ok()) {
      return r.Error(at,
                     absl::StrCat("block ", k, ": ", block.status().message()));
    }
    if (!(block->params == params)) {
      return r.Error(at,
                     absl::StrCat("block ", k, " uses different parameters"));
    }
    r.Skip(block_reader.offset());
    container.blocks.push_back(*std::move(block));
  }
  RTABE_ASSIGN_OR_RETURN(container.original_length, r.U64());
  RTABE_RETURN_IF_ERROR(r.Finish());
  return container;
}

absl::StatusOr<EnvelopeKind> PeekEnvelopeKind(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  if (bytes.size() < kEnvelopeMagic.size() ||
      std::memcmp(bytes.data(), kEnvelopeMagic.data(), kEnvelopeMagic.size()) !=
          0) {
    return r.Error(0, "bad magic, expected \"RTABE1\"");
  }
  r.Skip(kEnvelopeMagic.size());
  RTABE_ASSIGN_OR_RETURN(uint8_t kind, r.U8());
  if (kind < static_cast<uint8_t>(EnvelopeKind::kParams) ||
      kind > static_cast<uint8_t>(EnvelopeKind::kContainer)) {
    return r.Error(kEnvelopeMagic.size(),
                   absl::StrCat("unknown envelope kind ", kind));
  }
  return static_cast<EnvelopeKind>(kind);
}

}  // namespace rtabe
