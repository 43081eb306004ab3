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

// Recomputes the body noise of a ciphertext from captured randomness and
// classifies each coefficient.

#ifndef RTABE_TESTING_NOISE_CHECK_H_
#define RTABE_TESTING_NOISE_CHECK_H_

#include <cstdint>
#include <cstdlib>

#include "absl/status/statusor.h"
#include "rtabe/ring.h"
#include "rtabe/scheme.h"
#include "rtabe/status_macros.h"

namespace rtabe::testing {

struct NoiseStructure {
  size_t coefficients = 0;
  // |p * e'''_j| > q / 2, so the centered residue is not the integer value.
  size_t wrapped = 0;
  // center(C - r PK_0 - M)_j not divisible by p.
  size_t not_divisible = 0;
  // Not divisible although no wraparound happened.
  size_t unexplained = 0;
  // The centered residue differs from the integer p * e'''_j without
  // wraparound, or is not congruent to it mod q at all.
  size_t recomputation_mismatches = 0;
};

inline absl::StatusOr<NoiseStructure> CheckBodyNoise(
    const Ciphertext& ct, const PublicKey& pk, const RingElement& message,
    const EncryptionTrace& trace) {
  if (!trace.r.has_value() || !trace.e_body.has_value()) {
    return absl::FailedPreconditionError("Trace lacks r or e'''.");
  }
  const uint64_t q = ct.params.q;
  const int64_t p = static_cast<int64_t>(ct.params.p);
  RTABE_ASSIGN_OR_RETURN(RingElement r_pk0, trace.r->Mul(pk.pk[0]));
  RTABE_ASSIGN_OR_RETURN(RingElement diff, ct.c_body.Sub(r_pk0));
  RTABE_ASSIGN_OR_RETURN(diff, diff.Sub(message));
  const std::vector<int64_t> residual = diff.Center();
  const std::vector<int64_t> e = trace.e_body->Center();

  NoiseStructure out;
  out.coefficients = residual.size();
  for (size_t j = 0; j < residual.size(); ++j) {
    const __int128 integer = static_cast<__int128>(p) * e[j];
    const bool wrapped =
        2 * (integer < 0 ? -integer : integer) > static_cast<__int128>(q);
    const bool divisible = residual[j] % p == 0;
    if (wrapped) ++out.wrapped;
    if (!divisible) ++out.not_divisible;
    if (!divisible && !wrapped) ++out.unexplained;
    const __int128 delta = integer - residual[j];
    const bool congruent = delta % static_cast<__int128>(q) == 0;
    if (!congruent || (!wrapped && delta != 0)) ++out.recomputation_mismatches;
  }
  return out;
}

}  // namespace rtabe::testing

#endif  // RTABE_TESTING_NOISE_CHECK_H_
