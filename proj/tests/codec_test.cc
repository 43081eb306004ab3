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
#include <cstdint>
#include <vector>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "rtabe/params.h"
#include "rtabe/prng.h"
#include "testing/random_objects.h"
#include "testing/status_testing.h"

namespace rtabe {
namespace {

using ::rtabe::testing::RandomCiphertext;
using ::rtabe::testing::RandomContainer;
using ::rtabe::testing::RandomIdentityRecord;
using ::rtabe::testing::RandomMasterSecretKey;
using ::rtabe::testing::RandomParams;
using ::rtabe::testing::RandomPublicKey;
using ::rtabe::testing::RandomUserSecretKey;

using Bytes = std::vector<uint8_t>;

void PutLe(Bytes& out, uint64_t v, size_t width) {
  for (size_t i = 0; i < width; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

// The header written out by hand from the documented layout.
Bytes ExpectedHeader(uint8_t kind, const Params& params) {
  Bytes out = {'R',
               'T',
               'A',
               'B',
               'E',
               '1',
               kind,
               static_cast<uint8_t>(2 * static_cast<int>(params.mode.inverse) +
                                    static_cast<int>(params.mode.noise))};
  PutLe(out, params.n, 4);
  PutLe(out, params.q, 8);
  PutLe(out, params.p, 8);
  PutLe(out, std::bit_cast<uint64_t>(params.sigma), 8);
  return out;
}

bool MentionsOffset(const absl::Status& status) {
  return absl::StrContains(status.message(), "offset");
}

TEST(CodecTest, CoefficientWidths) {
  EXPECT_EQ(CoefficientWidth(7681), 2u);
  EXPECT_EQ(CoefficientWidth(65536), 2u);
  EXPECT_EQ(CoefficientWidth(65537), 4u);
  EXPECT_EQ(CoefficientWidth(uint64_t{1} << 32), 4u);
  EXPECT_EQ(CoefficientWidth((uint64_t{1} << 32) + 1), 8u);
}

TEST(CodecTest, ParamsLayoutIsBitExact) {
  const Params params =
      Params::Toy({.inverse = InverseConvention::kExactInverse,
                   .noise = NoiseMode::kNoiseOn});
  EXPECT_EQ(EncodeParams(params), ExpectedHeader(1, params));
}

TEST(CodecTest, CiphertextLayoutIsBitExact) {
  const Params params = Params::Toy();
  ASSERT_OK_AND_ASSIGN(auto ctx, RingContext::ForParams(params));
  ASSERT_OK_AND_ASSIGN(AccessTree tree, ParsePolicy("or(att2, att5)"));
  std::vector<uint64_t> coeffs(16);
  for (size_t i = 0; i < 16; ++i) coeffs[i] = 7680 - i;
  const RingElement e = *RingElement::Create(ctx, coeffs);
  const RingElement one = RingElement::One(ctx);
  Ciphertext ct{.params = params,
                .tree = tree,
                .c_leaves = {{1, e}, {2, one}},
                .c_prime = one,
                .c_body = e};

  Bytes expected = ExpectedHeader(5, params);
  auto put_element = [&](const RingElement& x) {
    for (uint64_t c : x.coeffs()) PutLe(expected, c, 2);
  };
  expected.push_back(1);  // gate
  PutLe(expected, 1, 4);  // threshold
  PutLe(expected, 2, 4);  // children
  expected.push_back(0);
  PutLe(expected, 2, 4);
  expected.push_back(0);
  PutLe(expected, 5, 4);
  PutLe(expected, 2, 4);  // leaf count
  PutLe(expected, 1, 4);
  put_element(e);
  PutLe(expected, 2, 4);
  put_element(one);
  put_element(one);
  put_element(e);
  EXPECT_EQ(EncodeCiphertext(ct), expected);
}

TEST(CodecTest, RoundTripsEveryKind) {
  Prng prng(163);
  for (int trial = 0; trial < 100; ++trial) {
    const Params params = RandomParams(prng);
    {
      const Bytes bytes = EncodeParams(params);
      ASSERT_OK_AND_ASSIGN(Params back, DecodeParams(bytes));
      ASSERT_EQ(back, params);
      ASSERT_EQ(EncodeParams(back), bytes);
    }
    {
      const PublicKey pk = RandomPublicKey(params, prng);
      const Bytes bytes = EncodePublicKey(pk);
      ASSERT_OK_AND_ASSIGN(PublicKey back, DecodePublicKey(bytes));
      ASSERT_EQ(back, pk);
      ASSERT_EQ(EncodePublicKey(back), bytes);
    }
    {
      const MasterSecretKey msk = RandomMasterSecretKey(params, prng);
      const Bytes bytes = EncodeMasterSecretKey(msk);
      ASSERT_OK_AND_ASSIGN(MasterSecretKey back, DecodeMasterSecretKey(bytes));
      ASSERT_EQ(back, msk);
    }
    {
      const UserSecretKey usk = RandomUserSecretKey(params, prng);
      const Bytes bytes = EncodeUserSecretKey(usk);
      ASSERT_OK_AND_ASSIGN(UserSecretKey back, DecodeUserSecretKey(bytes));
      ASSERT_EQ(back, usk);
    }
    {
      const Ciphertext ct = RandomCiphertext(params, prng);
      const Bytes bytes = EncodeCiphertext(ct);
      ASSERT_OK_AND_ASSIGN(Ciphertext back, DecodeCiphertext(bytes));
      ASSERT_EQ(back, ct);
      ASSERT_EQ(EncodeCiphertext(back), bytes);
    }
    {
      const IdentityRecord record = RandomIdentityRecord(params, prng);
      ASSERT_OK_AND_ASSIGN(IdentityRecord back,
                           DecodeIdentityRecord(EncodeIdentityRecord(record)));
      ASSERT_EQ(back, record);
    }
    {
      const CiphertextContainer container = RandomContainer(params, prng);
      ASSERT_OK_AND_ASSIGN(CiphertextContainer back,
                           DecodeContainer(EncodeContainer(container)));
      ASSERT_EQ(back, container);
    }
  }
}

TEST(CodecTest, EncodingIsDeterministic) {
  Prng a(5), b(5);
  const Params params = RandomParams(a);
  EXPECT_EQ(EncodeCiphertext(RandomCiphertext(params, a)),
            EncodeCiphertext(RandomCiphertext(RandomParams(b), b)));
}

TEST(CodecTest, EmptyInputIsBadMagic) {
  auto out = DecodePublicKey({});
  ASSERT_FALSE(out.ok());
  EXPECT_TRUE(absl::StrContains(out.status().message(), "bad magic"));
  EXPECT_TRUE(absl::StrContains(out.status().message(), "offset 0"));
  EXPECT_FALSE(PeekEnvelopeKind({}).ok());
}

TEST(CodecTest, RejectsWrongAndUnknownKinds) {
  Prng prng(167);
  Bytes bytes = EncodePublicKey(RandomPublicKey(Params::Toy(), prng));
  ASSERT_OK_AND_ASSIGN(EnvelopeKind kind, PeekEnvelopeKind(bytes));
  EXPECT_EQ(kind, EnvelopeKind::kPublicKey);
  auto wrong = DecodeCiphertext(bytes);
  ASSERT_FALSE(wrong.ok());
  EXPECT_TRUE(absl::StrContains(wrong.status().message(), "offset 6"));
  bytes[6] = 9;
  auto unknown = DecodePublicKey(bytes);
  ASSERT_FALSE(unknown.ok());
  EXPECT_TRUE(absl::StrContains(unknown.status().message(), "unknown"));
}

TEST(CodecTest, RejectsBadModeAndParams) {
  Bytes bytes = EncodeParams(Params::Toy());
  bytes[7] = 4;
  EXPECT_FALSE(DecodeParams(bytes).ok());
  bytes = EncodeParams(Params::Toy());
  bytes[12] = 0x03;  // q = 7683 = 3 * 13 * 197
  EXPECT_FALSE(DecodeParams(bytes).ok());
}

TEST(CodecTest, EveryTruncationFailsWithOffset) {
  Prng prng(173);
  const std::vector<Bytes> encodings = {
      EncodePublicKey(RandomPublicKey(Params::Toy(), prng)),
      EncodeUserSecretKey(RandomUserSecretKey(Params::Toy(), prng)),
      EncodeCiphertext(RandomCiphertext(Params::Toy(), prng)),
  };
  for (size_t k = 0; k < encodings.size(); ++k) {
    const Bytes& full = encodings[k];
    for (size_t len = 0; len < full.size(); ++len) {
      const std::span<const uint8_t> prefix(full.data(), len);
      absl::Status s = k == 0   ? DecodePublicKey(prefix).status()
                       : k == 1 ? DecodeUserSecretKey(prefix).status()
                                : DecodeCiphertext(prefix).status();
      ASSERT_FALSE(s.ok()) << "kind " << k << " length " << len;
      ASSERT_TRUE(MentionsOffset(s)) << s;
    }
  }
}

TEST(CodecTest, RejectsTrailingBytes) {
  Prng prng(179);
  Bytes bytes = EncodeCiphertext(RandomCiphertext(Params::Toy(), prng));
  const size_t size = bytes.size();
  bytes.push_back(0);
  auto out = DecodeCiphertext(bytes);
  ASSERT_FALSE(out.ok());
  EXPECT_TRUE(
      absl::StrContains(out.status().message(), absl::StrCat("offset ", size)));
}

TEST(CodecTest, RejectsCoefficientAtLeastQ) {
  const Params params = Params::Toy();
  ASSERT_OK_AND_ASSIGN(auto ctx, RingContext::ForParams(params));
  PublicKey pk{.params = params,
               .a_prime = RingElement::Zero(ctx),
               .pk = {RingElement::Zero(ctx), RingElement::Zero(ctx)}};
  Bytes bytes = EncodePublicKey(pk);
  const size_t header = ExpectedHeader(2, params).size();
  // First coefficient of a' := q.
  bytes[header] = 7681 & 0xff;
  bytes[header + 1] = 7681 >> 8;
  auto out = DecodePublicKey(bytes);
  ASSERT_FALSE(out.ok());
  EXPECT_TRUE(absl::StrContains(out.status().message(),
                                absl::StrCat("offset ", header)));
}

TEST(CodecTest, RejectsInvalidStructures) {
  Prng prng(181);
  const Params params = Params::Toy();
  // Leaf count disagreeing with the tree.
  Ciphertext ct = RandomCiphertext(params, prng);
  ct.c_leaves.erase(ct.c_leaves.begin());
  EXPECT_FALSE(DecodeCiphertext(EncodeCiphertext(ct)).ok());
  // Attribute 0 in a tree.
  ASSERT_OK_AND_ASSIGN(auto ctx, RingContext::ForParams(params));
  Ciphertext leaf_ct{.params = params,
                     .tree = AccessTree::Leaf(1),
                     .c_leaves = {{0, RingElement::Zero(ctx)}},
                     .c_prime = RingElement::Zero(ctx),
                     .c_body = RingElement::Zero(ctx)};
  Bytes bytes = EncodeCiphertext(leaf_ct);
  const size_t header = ExpectedHeader(5, params).size();
  bytes[header + 1] = 0;  // attribute u32 low byte
  EXPECT_FALSE(DecodeCiphertext(bytes).ok());
  // A public key needs PK_0.
  PublicKey empty_pk{
      .params = params, .a_prime = RingElement::Zero(ctx), .pk = {}};
  EXPECT_FALSE(DecodePublicKey(EncodePublicKey(empty_pk)).ok());
}

TEST(CodecTest, ContainerBlocksMustShareParams) {
  Prng prng(191);
  const Params toy = Params::Toy();
  CiphertextContainer container{
      .params = toy, .blocks = {}, .original_length = 3};
  Params other = toy;
  other.mode.noise = NoiseMode::kNoiseOn;
  container.blocks.push_back(RandomCiphertext(other, prng));
  EXPECT_FALSE(DecodeContainer(EncodeContainer(container)).ok());
}

TEST(CodecTest, HugeCountsDoNotAllocate) {
  const Params params = Params::Toy();
  Bytes bytes = ExpectedHeader(7, params);
  PutLe(bytes, 0xffffffff, 4);
  auto out = DecodeContainer(bytes);
  ASSERT_FALSE(out.ok());
  EXPECT_TRUE(absl::StrContains(out.status().message(), "count"));
}

}  // namespace
}  // namespace rtabe
