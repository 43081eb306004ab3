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

// Packing of byte strings into the message space R_p.
//
// A payload is read as a big-endian integer and written in base p, most
// significant digit in coefficient 0. The byte length is not recorded; the
// caller supplies it on extraction.

#ifndef RTABE_MESSAGE_H_
#define RTABE_MESSAGE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "rtabe/params.h"
#include "rtabe/ring.h"

namespace rtabe {

// floor(floor(n * log2 p) / 8): the largest payload that always fits.
size_t MessageCapacityBytes(const Params& params);

absl::StatusOr<RingElement> MessageEmbed(const Params& params,
                                         std::span<const uint8_t> payload);

// Inverse of MessageEmbed for a payload of `length` bytes. Fails if a
// coefficient is not below p or the value needs more than `length` bytes.
absl::StatusOr<std::vector<uint8_t>> MessageExtract(const RingElement& message,
                                                    uint64_t p, size_t length);

}  // namespace rtabe

#endif  // RTABE_MESSAGE_H_
