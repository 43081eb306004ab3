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

#include "rtabe/message.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "rtabe/status_macros.h"

namespace rtabe {

size_t MessageCapacityBytes(const Params& params) {
  // p is an odd prime, so n * log2(p) is never an integer and long double
  // rounding cannot move the floor for any supported n.
  const long double bits = static_cast<long double>(params.n) *
                           std::log2(static_cast<long double>(params.p));
  return static_cast<size_t>(std::floor(bits)) / 8;
}

absl::StatusOr<RingElement> MessageEmbed(const Params& params,
                                         std::span<const uint8_t> payload) {
  RTABE_RETURN_IF_ERROR(params.Validate());
  const size_t capacity = MessageCapacityBytes(params);
  if (payload.size() > capacity) {
    return absl::OutOfRangeError(absl::StrCat(
        "Payload of ", payload.size(),
        " bytes exceeds the message capacity of ", capacity, " bytes."));
  }
  RTABE_ASSIGN_OR_RETURN(auto context, RingContext::ForParams(params));

  // Repeated long division of the big-endian byte string by p.
  std::vector<uint8_t> value(payload.begin(), payload.end());
  std::vector<uint64_t> coeffs(params.n, 0);
  for (size_t digit = 0; digit < params.n; ++digit) {
    unsigned __int128 remainder = 0;
    bool nonzero = false;
    for (uint8_t& byte : value) {
      const unsigned __int128 cur = (remainder << 8) | byte;
      byte = static_cast<uint8_t>(cur / params.p);
      remainder = cur % params.p;
      nonzero |= byte != 0;
    }
    coeffs[params.n - 1 - digit] = static_cast<uint64_t>(remainder);
    if (!nonzero) break;
  }
  return RingElement::Create(std::move(context), std::move(coeffs));
}

absl::StatusOr<std::vector<uint8_t>> MessageExtract(const RingElement& message,
                                                    uint64_t p, size_t length) {
  std::vector<uint8_t> out(length, 0);
  for (size_t j = 0; j < message.coeffs().size(); ++j) {
    const uint64_t digit = message.coeffs()[j];
    if (digit >= p) {
      return absl::OutOfRangeError(absl::StrCat(
          "Coefficient ", j, " = ", digit, " is not a base-", p, " digit."));
    }
    // out = out * p + digit over the big-endian byte string.
    unsigned __int128 carry = digit;
    for (size_t k = length; k-- > 0;) {
      const unsigned __int128 cur =
          static_cast<unsigned __int128>(out[k]) * p + carry;
      out[k] = static_cast<uint8_t>(cur & 0xff);
      carry = cur >> 8;
    }
    if (carry != 0) {
      return absl::OutOfRangeError(
          absl::StrCat("Message value does not fit in ", length, " bytes."));
    }
  }
  return out;
}

}  // namespace rtabe
