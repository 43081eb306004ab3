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

// Arithmetic in R_q = Z_q[x]/(x^n + 1).

#ifndef RTABE_RING_H_
#define RTABE_RING_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "rtabe/params.h"

namespace rtabe {

// Precomputed tables for one (n, q) pair. Read-only after construction and
// shared by every element of the ring.
class RingContext {
 public:
  // Fails when n is not a power of two >= 4, q is not prime, or q has no
  // primitive 2n-th root of unity.
  static absl::StatusOr<std::shared_ptr<const RingContext>> Create(uint32_t n,
                                                                   uint64_t q);

  // Returns a cached context for params.n and params.q.
  static absl::StatusOr<std::shared_ptr<const RingContext>> ForParams(
      const Params& params);

  uint32_t n() const { return n_; }
  uint64_t q() const { return q_; }
  // Primitive 2n-th root of unity used by the transform.
  uint64_t psi() const { return psi_; }

  // In-place negacyclic NTT. The output is in bit-reversed order, which is
  // irrelevant for pointwise products.
  void ForwardTransform(std::span<uint64_t> values) const;
  void InverseTransform(std::span<uint64_t> values) const;

 private:
  RingContext(uint32_t n, uint64_t q, uint64_t psi);

  uint32_t n_;
  uint64_t q_;
  uint64_t psi_;
  uint64_t n_inv_;
  std::vector<uint64_t> psi_rev_;      // psi^bitrev(i)
  std::vector<uint64_t> psi_inv_rev_;  // psi^-bitrev(i)
};

class RingElement {
 public:
  // Validates length and coefficient range.
  static absl::StatusOr<RingElement> Create(
      std::shared_ptr<const RingContext> context, std::vector<uint64_t> coeffs);

  // Reduces arbitrary signed integers into [0, q).
  static absl::StatusOr<RingElement> FromSigned(
      std::shared_ptr<const RingContext> context,
      std::span<const int64_t> values);

  static RingElement Zero(std::shared_ptr<const RingContext> context);
  static RingElement One(std::shared_ptr<const RingContext> context);
  // The constant polynomial c mod q.
  static RingElement Constant(std::shared_ptr<const RingContext> context,
                              uint64_t c);

  const std::vector<uint64_t>& coeffs() const { return coeffs_; }
  uint32_t n() const { return context_->n(); }
  uint64_t q() const { return context_->q(); }
  const std::shared_ptr<const RingContext>& context() const { return context_; }

  bool IsZero() const;

  absl::StatusOr<RingElement> Add(const RingElement& other) const;
  absl::StatusOr<RingElement> Sub(const RingElement& other) const;
  // Ring product through the negacyclic NTT.
  absl::StatusOr<RingElement> Mul(const RingElement& other) const;
  // Quadratic-time negacyclic convolution. Kept as the reference for Mul.
  absl::StatusOr<RingElement> MulSchoolbook(const RingElement& other) const;

  RingElement Negate() const;
  RingElement ScalarMul(uint64_t scalar) const;

  // Coefficients mapped into (-q/2, q/2].
  std::vector<int64_t> Center() const;

  std::string DebugString() const;

  // Equal ring and equal coefficients.
  friend bool operator==(const RingElement& a, const RingElement& b);

 private:
  RingElement(std::shared_ptr<const RingContext> context,
              std::vector<uint64_t> coeffs)
      : context_(std::move(context)), coeffs_(std::move(coeffs)) {}

  absl::Status CheckSameRing(const RingElement& other) const;

  std::shared_ptr<const RingContext> context_;
  std::vector<uint64_t> coeffs_;
};

// The forward transform as a RingElement holding evaluation-domain values.
RingElement NttForward(const RingElement& a);
RingElement NttInverse(const RingElement& a_hat);
// Coefficient-wise product; for transformed inputs this is the ring product
// in the evaluation domain.
absl::StatusOr<RingElement> PointwiseMul(const RingElement& a,
                                         const RingElement& b);

// Inverse in R_q. Returns FailedPrecondition (not invertible) when some
// evaluation of `a` at a root of x^n + 1 vanishes.
absl::StatusOr<RingElement> InvQ(const RingElement& a);

// Inverse of `a` in Z_p[x]/(x^n + 1), lifted into R_q with coefficients in
// [0, p). Returns FailedPrecondition when `a mod p` is not a unit. p must be a
// prime below q.
absl::StatusOr<RingElement> InvModP(const RingElement& a, uint64_t p);

bool IsNotInvertible(const absl::Status& status);

}  // namespace rtabe

#endif  // RTABE_RING_H_
