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

#include "rtabe/scheme.h"

#include <functional>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "rtabe/modular.h"
#include "rtabe/sampler.h"
#include "rtabe/status_macros.h"

namespace rtabe {
namespace {

constexpr char kNotAuthorizedPrefix[] = "Not authorized: ";
constexpr char kDecryptionFailedPrefix[] = "Decryption failed: ";

// Draws uniform elements until `invert` succeeds on one.
absl::StatusOr<RingElement> SampleInvertible(
    const std::shared_ptr<const RingContext>& context, Prng& prng,
    const std::function<absl::StatusOr<RingElement>(const RingElement&)>&
        invert,
    absl::string_view what) {
  for (int attempt = 0; attempt < kMaxInvertibleResamples; ++attempt) {
    RingElement candidate = SampleUniform(context, prng);
    auto inverse = invert(candidate);
    if (inverse.ok()) return candidate;
    if (!IsNotInvertible(inverse.status())) return inverse.status();
  }
  return absl::InternalError(absl::StrCat("Setup failed: no invertible ", what,
                                          " after ", kMaxInvertibleResamples,
                                          " draws."));
}

absl::Status CheckSameParams(const Params& a, const Params& b,
                             absl::string_view what) {
  if (!(a == b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Parameter mismatch between ", what, ": ", a.DebugString(),
                     " vs ", b.DebugString(), "."));
  }
  return absl::OkStatus();
}

}  // namespace

AttributeSet UserSecretKey::attributes() const {
  AttributeSet att;
  for (const auto& [id, unused] : per_attr) att.Insert(id);
  return att;
}

std::optional<KeyRegistry::Record> KeyRegistry::Lookup(
    std::string_view identity) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = records_.find(identity);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, KeyRegistry::Record> KeyRegistry::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return {records_.begin(), records_.end()};
}

void KeyRegistry::Restore(std::string identity, Record record) {
  std::lock_guard<std::mutex> lock(mu_);
  records_.insert_or_assign(std::move(identity), std::move(record));
}

size_t KeyRegistry::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.size();
}

absl::StatusOr<RingElement> AttributeInverse(const RingElement& a_i,
                                             const Params& params) {
  if (params.mode.inverse == InverseConvention::kPaperLiteral) {
    return InvModP(a_i, params.p);
  }
  return InvQ(a_i);
}

absl::Status NotAuthorizedError(std::string_view message) {
  return absl::PermissionDeniedError(
      absl::StrCat(kNotAuthorizedPrefix, std::string(message)));
}

bool IsNotAuthorized(const absl::Status& status) {
  return absl::IsPermissionDenied(status) &&
         absl::StartsWith(status.message(), kNotAuthorizedPrefix);
}

absl::Status DecryptionFailedError(std::string_view message) {
  return absl::DataLossError(
      absl::StrCat(kDecryptionFailedPrefix, std::string(message)));
}

bool IsDecryptionFailed(const absl::Status& status) {
  return absl::IsDataLoss(status) &&
         absl::StartsWith(status.message(), kDecryptionFailedPrefix);
}

absl::StatusOr<SetupResult> Setup(const Params& params, uint32_t n_attrs,
                                  Prng& prng) {
  RTABE_RETURN_IF_ERROR(params.Validate());
  if (n_attrs == 0) {
    return absl::InvalidArgumentError("The attribute universe is empty.");
  }
  RTABE_ASSIGN_OR_RETURN(auto context, RingContext::ForParams(params));
  RTABE_ASSIGN_OR_RETURN(NoiseSampler noise, NoiseSampler::Create(params));

  auto exact = [](const RingElement& x) { return InvQ(x); };
  auto per_mode = [&params](const RingElement& x) {
    return AttributeInverse(x, params);
  };

  RingElement s = SampleUniform(context, prng);
  RTABE_ASSIGN_OR_RETURN(RingElement a,
                         SampleInvertible(context, prng, exact, "a"));
  RTABE_ASSIGN_OR_RETURN(RingElement a_prime,
                         SampleInvertible(context, prng, exact, "a'"));

  std::vector<RingElement> pk;
  pk.reserve(n_attrs + 1);
  RTABE_ASSIGN_OR_RETURN(RingElement as, a.Mul(s));
  RTABE_ASSIGN_OR_RETURN(RingElement pk0, as.Add(noise.SampleScaled(prng)));
  pk.push_back(std::move(pk0));

  std::vector<RingElement> attr_a;
  attr_a.reserve(n_attrs);
  for (uint32_t i = 1; i <= n_attrs; ++i) {
    RTABE_ASSIGN_OR_RETURN(
        RingElement a_i,
        SampleInvertible(context, prng, per_mode, absl::StrCat("a_", i)));
    RTABE_ASSIGN_OR_RETURN(RingElement ais, a_i.Mul(s));
    RTABE_ASSIGN_OR_RETURN(RingElement pk_i, ais.Add(noise.SampleScaled(prng)));
    pk.push_back(std::move(pk_i));
    attr_a.push_back(std::move(a_i));
  }

  return SetupResult{
      .pk = PublicKey{.params = params,
                      .a_prime = std::move(a_prime),
                      .pk = std::move(pk)},
      .msk = MasterSecretKey{.params = params,
                             .s = std::move(s),
                             .a = std::move(a),
                             .attr_a = std::move(attr_a)},
  };
}

absl::StatusOr<UserSecretKey> KeyGen(const MasterSecretKey& msk,
                                     std::string_view identity,
                                     const AttributeSet& att,
                                     KeyRegistry& registry, Prng& prng) {
  const Params& params = msk.params;
  for (AttributeId i : att) {
    if (i == 0 || i > msk.n_attrs()) {
      return absl::InvalidArgumentError(absl::StrCat("Unknown attribute ", i,
                                                     "; the universe is 1..",
                                                     msk.n_attrs(), "."));
    }
  }
  RTABE_ASSIGN_OR_RETURN(auto context, RingContext::ForParams(params));
  RTABE_ASSIGN_OR_RETURN(NoiseSampler noise, NoiseSampler::Create(params));

  std::lock_guard<std::mutex> lock(registry.mu_);
  auto it = registry.records_.find(identity);
  if (it == registry.records_.end()) {
    RingElement u = SampleUniform(context, prng);
    RTABE_ASSIGN_OR_RETURN(RingElement us, u.Mul(msk.s));
    RTABE_ASSIGN_OR_RETURN(RingElement sk_u, us.Add(noise.SampleScaled(prng)));
    it = registry.records_
             .emplace(std::string(identity),
                      KeyRegistry::Record{std::move(u), std::move(sk_u), {}})
             .first;
  }
  KeyRegistry::Record& record = it->second;

  UserSecretKey usk{.params = params,
                    .identity = std::string(identity),
                    .sk_u = record.sk_u,
                    .per_attr = {}};
  for (AttributeId i : att) {
    RTABE_ASSIGN_OR_RETURN(RingElement inverse,
                           AttributeInverse(msk.attr_a[i - 1], params));
    RTABE_ASSIGN_OR_RETURN(RingElement base, inverse.Mul(record.u));
    RTABE_ASSIGN_OR_RETURN(RingElement sk_i,
                           base.Add(noise.SampleScaled(prng)));
    usk.per_attr.emplace(i, std::move(sk_i));
    record.issued.Insert(i);
  }
  return usk;
}

absl::StatusOr<Ciphertext> Encrypt(const PublicKey& pk,
                                   const RingElement& message,
                                   const AccessTree& tree, Prng& prng,
                                   EncryptionTrace* trace) {
  const Params& params = pk.params;
  RTABE_RETURN_IF_ERROR(params.Validate());
  if (message.n() != params.n || message.q() != params.q) {
    return absl::InvalidArgumentError(
        "Message does not live in the public key's ring.");
  }
  for (size_t j = 0; j < message.coeffs().size(); ++j) {
    if (message.coeffs()[j] >= params.p) {
      return absl::OutOfRangeError(
          absl::StrCat("Message coefficient ", j, " = ", message.coeffs()[j],
                       " is not below p = ", params.p, "."));
    }
  }
  RTABE_RETURN_IF_ERROR(tree.ValidateFor(params.q, pk.n_attrs()));
  RTABE_ASSIGN_OR_RETURN(auto context, RingContext::ForParams(params));
  RTABE_ASSIGN_OR_RETURN(NoiseSampler noise, NoiseSampler::Create(params));

  RingElement r = SampleUniform(context, prng);
  RTABE_ASSIGN_OR_RETURN(ShareMap shares, Share(tree, r, prng));

  std::map<NodeId, RingElement> c_leaves;
  for (const auto& [leaf, r_i] : shares) {
    const AttributeId attr = tree.node(leaf).attribute;
    RingElement e_i = RingElement::Zero(context);
    RTABE_ASSIGN_OR_RETURN(RingElement masked, r_i.Mul(pk.pk[attr]));
    RTABE_ASSIGN_OR_RETURN(RingElement c_i,
                           masked.Add(noise.SampleScaled(prng, &e_i)));
    c_leaves.emplace(leaf, std::move(c_i));
    if (trace != nullptr) trace->e_leaves.insert_or_assign(leaf, e_i);
  }

  RingElement e_prime = RingElement::Zero(context);
  RTABE_ASSIGN_OR_RETURN(RingElement ra, r.Mul(pk.a_prime));
  RTABE_ASSIGN_OR_RETURN(RingElement c_prime,
                         ra.Add(noise.SampleScaled(prng, &e_prime)));

  RingElement e_body = RingElement::Zero(context);
  RTABE_ASSIGN_OR_RETURN(RingElement rpk0, r.Mul(pk.pk[0]));
  RTABE_ASSIGN_OR_RETURN(RingElement noisy,
                         rpk0.Add(noise.SampleScaled(prng, &e_body)));
  RTABE_ASSIGN_OR_RETURN(RingElement c_body, noisy.Add(message));

  if (trace != nullptr) {
    trace->r = r;
    trace->r_shares = shares;
    trace->e_prime = std::move(e_prime);
    trace->e_body = std::move(e_body);
  }
  return Ciphertext{.params = params,
                    .tree = tree,
                    .c_leaves = std::move(c_leaves),
                    .c_prime = std::move(c_prime),
                    .c_body = std::move(c_body)};
}

absl::StatusOr<RingElement> DecryptWithKeyPool(
    const Ciphertext& ct, const RingElement& sk_u,
    const std::map<AttributeId, RingElement>& per_attr, const PublicKey& pk) {
  const Params& params = pk.params;
  RTABE_RETURN_IF_ERROR(
      CheckSameParams(ct.params, params, "ciphertext and public key"));
  AttributeSet pool;
  for (const auto& [id, unused] : per_attr) pool.Insert(id);
  std::optional<std::vector<NodeId>> selected =
      SelectSatisfyingSubset(ct.tree, pool);
  if (!selected.has_value()) {
    return NotAuthorizedError("key attributes do not satisfy the policy.");
  }

  ShareMap products;
  for (NodeId leaf : *selected) {
    auto c_it = ct.c_leaves.find(leaf);
    if (c_it == ct.c_leaves.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Ciphertext lacks component for leaf ", leaf, "."));
    }
    const RingElement& key = per_attr.at(ct.tree.node(leaf).attribute);
    RTABE_ASSIGN_OR_RETURN(RingElement d_i, c_it->second.Mul(key));
    products.emplace(leaf, std::move(d_i));
  }
  RTABE_ASSIGN_OR_RETURN(RingElement combined, Combine(ct.tree, products));

  RTABE_ASSIGN_OR_RETURN(RingElement a_prime_inv, InvQ(pk.a_prime));
  RTABE_ASSIGN_OR_RETURN(RingElement diff, sk_u.Sub(pk.pk[0]));
  RTABE_ASSIGN_OR_RETURN(RingElement t1, a_prime_inv.Mul(diff));
  RTABE_ASSIGN_OR_RETURN(RingElement t2, t1.Mul(ct.c_prime));
  RTABE_ASSIGN_OR_RETURN(RingElement r_prime, combined.Sub(t2));
  RTABE_ASSIGN_OR_RETURN(RingElement raw, ct.c_body.Sub(r_prime));

  std::vector<uint64_t> message(params.n);
  const std::vector<int64_t> centered = raw.Center();
  for (size_t j = 0; j < message.size(); ++j) {
    message[j] = ReduceSigned(centered[j], params.p);
  }
  return RingElement::Create(raw.context(), std::move(message));
}

absl::StatusOr<RingElement> Decrypt(const Ciphertext& ct,
                                    const UserSecretKey& usk,
                                    const PublicKey& pk,
                                    const DecryptOptions& options) {
  RTABE_RETURN_IF_ERROR(
      CheckSameParams(usk.params, pk.params, "user key and public key"));
  if (!Evaluate(ct.tree, usk.attributes())) {
    return NotAuthorizedError(absl::StrCat("attributes of '", usk.identity,
                                           "' do not satisfy ",
                                           FormatPolicy(ct.tree), "."));
  }
  RTABE_ASSIGN_OR_RETURN(RingElement message,
                         DecryptWithKeyPool(ct, usk.sk_u, usk.per_attr, pk));
  if (options.expected_message.has_value() &&
      !(message == *options.expected_message)) {
    return DecryptionFailedError("recovered message differs from expected.");
  }
  return message;
}

}  // namespace rtabe
