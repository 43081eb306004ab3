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

#include "rtabe/ring.h"

#include <map>
#include <mutex>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "rtabe/modular.h"

namespace rtabe {
namespace {

constexpr char kNotInvertiblePrefix[] = "Not invertible: ";

uint32_t BitReverse(uint32_t x, int bits) {
  uint32_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

int Log2(uint32_t n) {
  int k = 0;
  while ((uint32_t{1} << k) < n) ++k;
  return k;
}

absl::Status NotInvertible(absl::string_view what) {
  return absl::FailedPreconditionError(
      absl::StrCat(kNotInvertiblePrefix, what));
}

// Dense polynomials over F_p, index = degree, no trailing zeros.
using PolyP = std::vector<uint64_t>;

void Trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Returns (quotient, remainder) of a / b; b must be nonzero.
std::pair<PolyP, PolyP> DivModP(PolyP a, const PolyP& b, uint64_t p) {
  const uint64_t lead_inv = *InvModPrime(b.back(), p);
  PolyP quot;
  if (a.size() >= b.size()) quot.assign(a.size() - b.size() + 1, 0);
  while (a.size() >= b.size()) {
    const size_t shift = a.size() - b.size();
    const uint64_t factor = MulMod(a.back(), lead_inv, p);
    quot[shift] = factor;
    for (size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = SubMod(a[shift + i], MulMod(factor, b[i], p), p);
    }
    Trim(a);
  }
  Trim(quot);
  return {std::move(quot), std::move(a)};
}

PolyP MulP(const PolyP& a, const PolyP& b, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      out[i + j] = AddMod(out[i + j], MulMod(a[i], b[j], p), p);
    }
  }
  Trim(out);
  return out;
}

PolyP SubP(PolyP a, const PolyP& b, uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = SubMod(a[i], b[i], p);
  Trim(a);
  return a;
}

}  // namespace

bool IsNotInvertible(const absl::Status& status) {
  return absl::IsFailedPrecondition(status) &&
         absl::StartsWith(status.message(), kNotInvertiblePrefix);
}

RingContext::RingContext(uint32_t n, uint64_t q, uint64_t psi)
    : n_(n), q_(q), psi_(psi), n_inv_(*InvModPrime(n, q)) {
  const int bits = Log2(n);
  const uint64_t psi_inv = *InvModPrime(psi, q);
  psi_rev_.resize(n);
  psi_inv_rev_.resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    const uint32_t e = BitReverse(i, bits);
    psi_rev_[i] = PowMod(psi, e, q);
    psi_inv_rev_[i] = PowMod(psi_inv, e, q);
  }
}

absl::StatusOr<std::shared_ptr<const RingContext>> RingContext::Create(
    uint32_t n, uint64_t q) {
  if (n < 4 || (n & (n - 1)) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("Ring degree ", n, " must be a power of two >= 4."));
  }
  if (q >= kMaxModulus || !IsPrime(q)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Modulus ", q, " must be a prime below 2^62."));
  }
  const uint64_t two_n = 2 * uint64_t{n};
  if ((q - 1) % two_n != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "No primitive ", two_n, "-th root of unity modulo ", q, "."));
  }
  // psi has order exactly 2n iff psi^n = -1, since 2n is a power of two.
  const uint64_t cofactor = (q - 1) / two_n;
  for (uint64_t g = 2; g < q; ++g) {
    const uint64_t psi = PowMod(g, cofactor, q);
    if (PowMod(psi, n, q) == q - 1) {
      return std::shared_ptr<const RingContext>(new RingContext(n, q, psi));
    }
  }
  return absl::InternalError("Root of unity search exhausted.");
}

absl::StatusOr<std::shared_ptr<const RingContext>> RingContext::ForParams(
    const Params& params) {
  static std::mutex mu;
  static std::map<std::pair<uint32_t, uint64_t>,
                  std::shared_ptr<const RingContext>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(params.n, params.q);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto context = Create(params.n, params.q);
  if (!context.ok()) return context.status();
  cache.emplace(key, *context);
  return *context;
}

void RingContext::ForwardTransform(std::span<uint64_t> a) const {
  const uint64_t q = q_;
  uint32_t t = n_;
  for (uint32_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (uint32_t i = 0; i < m; ++i) {
      const uint32_t j1 = 2 * i * t;
      const uint64_t s = psi_rev_[m + i];
      for (uint32_t j = j1; j < j1 + t; ++j) {
        const uint64_t u = a[j];
        const uint64_t v = MulMod(a[j + t], s, q);
        a[j] = AddMod(u, v, q);
        a[j + t] = SubMod(u, v, q);
      }
    }
  }
}

void RingContext::InverseTransform(std::span<uint64_t> a) const {
  const uint64_t q = q_;
  uint32_t t = 1;
  for (uint32_t m = n_; m > 1; m >>= 1) {
    const uint32_t h = m >> 1;
    uint32_t j1 = 0;
    for (uint32_t i = 0; i < h; ++i) {
      const uint64_t s = psi_inv_rev_[h + i];
      for (uint32_t j = j1; j < j1 + t; ++j) {
        const uint64_t u = a[j];
        const uint64_t v = a[j + t];
        a[j] = AddMod(u, v, q);
        a[j + t] = MulMod(SubMod(u, v, q), s, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = MulMod(x, n_inv_, q);
}

absl::StatusOr<RingElement> RingElement::Create(
    std::shared_ptr<const RingContext> context, std::vector<uint64_t> coeffs) {
  if (context == nullptr) {
    return absl::InvalidArgumentError("Ring context must not be null.");
  }
  if (coeffs.size() != context->n()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Expected ", context->n(), " coefficients, got ", coeffs.size(), "."));
  }
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] >= context->q()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Coefficient ", i, " = ", coeffs[i],
                       " is not below q = ", context->q(), "."));
    }
  }
  return RingElement(std::move(context), std::move(coeffs));
}

absl::StatusOr<RingElement> RingElement::FromSigned(
    std::shared_ptr<const RingContext> context,
    std::span<const int64_t> values) {
  if (context == nullptr) {
    return absl::InvalidArgumentError("Ring context must not be null.");
  }
  if (values.size() != context->n()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Expected ", context->n(), " coefficients, got ", values.size(), "."));
  }
  std::vector<uint64_t> coeffs(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    coeffs[i] = ReduceSigned(values[i], context->q());
  }
  return RingElement(std::move(context), std::move(coeffs));
}

RingElement RingElement::Zero(std::shared_ptr<const RingContext> context) {
  std::vector<uint64_t> coeffs(context->n(), 0);
  return RingElement(std::move(context), std::move(coeffs));
}

RingElement RingElement::One(std::shared_ptr<const RingContext> context) {
  return Constant(std::move(context), 1);
}

RingElement RingElement::Constant(std::shared_ptr<const RingContext> context,
                                  uint64_t c) {
  std::vector<uint64_t> coeffs(context->n(), 0);
  coeffs[0] = c % context->q();
  return RingElement(std::move(context), std::move(coeffs));
}

bool RingElement::IsZero() const {
  for (uint64_t c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

absl::Status RingElement::CheckSameRing(const RingElement& other) const {
  if (context_ == other.context_) return absl::OkStatus();
  if (n() != other.n() || q() != other.q()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Ring mismatch: (n=", n(), ", q=", q(),
                     ") vs (n=", other.n(), ", q=", other.q(), ")."));
  }
  return absl::OkStatus();
}

absl::StatusOr<RingElement> RingElement::Add(const RingElement& other) const {
  if (auto s = CheckSameRing(other); !s.ok()) return s;
  std::vector<uint64_t> out(coeffs_.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = AddMod(coeffs_[i], other.coeffs_[i], q());
  }
  return RingElement(context_, std::move(out));
}

absl::StatusOr<RingElement> RingElement::Sub(const RingElement& other) const {
  if (auto s = CheckSameRing(other); !s.ok()) return s;
  std::vector<uint64_t> out(coeffs_.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = SubMod(coeffs_[i], other.coeffs_[i], q());
  }
  return RingElement(context_, std::move(out));
}

absl::StatusOr<RingElement> RingElement::Mul(const RingElement& other) const {
  if (auto s = CheckSameRing(other); !s.ok()) return s;
  std::vector<uint64_t> a = coeffs_;
  std::vector<uint64_t> b = other.coeffs_;
  context_->ForwardTransform(a);
  context_->ForwardTransform(b);
  for (size_t i = 0; i < a.size(); ++i) a[i] = MulMod(a[i], b[i], q());
  context_->InverseTransform(a);
  return RingElement(context_, std::move(a));
}

absl::StatusOr<RingElement> RingElement::MulSchoolbook(
    const RingElement& other) const {
  if (auto s = CheckSameRing(other); !s.ok()) return s;
  const size_t n = coeffs_.size();
  const uint64_t q = this->q();
  std::vector<uint64_t> out(n, 0);
  if (q <= UINT32_MAX) {
    // Products fit in 64 bits; defer the reduction to one per output term.
    for (size_t k = 0; k < n; ++k) {
      unsigned __int128 plus = 0;
      unsigned __int128 minus = 0;
      for (size_t i = 0; i <= k; ++i) plus += coeffs_[i] * other.coeffs_[k - i];
      // x^i * x^j with i + j = n + k folds to -x^k.
      for (size_t i = k + 1; i < n; ++i) {
        minus += coeffs_[i] * other.coeffs_[n + k - i];
      }
      out[k] = SubMod(static_cast<uint64_t>(plus % q),
                      static_cast<uint64_t>(minus % q), q);
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        const uint64_t prod = MulMod(coeffs_[i], other.coeffs_[j], q);
        const size_t k = i + j;
        if (k < n) {
          out[k] = AddMod(out[k], prod, q);
        } else {
          out[k - n] = SubMod(out[k - n], prod, q);
        }
      }
    }
  }
  return RingElement(context_, std::move(out));
}

RingElement RingElement::Negate() const {
  std::vector<uint64_t> out(coeffs_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = NegMod(coeffs_[i], q());
  return RingElement(context_, std::move(out));
}

RingElement RingElement::ScalarMul(uint64_t scalar) const {
  scalar %= q();
  std::vector<uint64_t> out(coeffs_.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = MulMod(coeffs_[i], scalar, q());
  }
  return RingElement(context_, std::move(out));
}

std::vector<int64_t> RingElement::Center() const {
  std::vector<int64_t> out(coeffs_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = CenterMod(coeffs_[i], q());
  return out;
}

std::string RingElement::DebugString() const {
  return absl::StrCat("[", absl::StrJoin(coeffs_, ","), "] mod ", q());
}

bool operator==(const RingElement& a, const RingElement& b) {
  return a.n() == b.n() && a.q() == b.q() && a.coeffs_ == b.coeffs_;
}

RingElement NttForward(const RingElement& a) {
  std::vector<uint64_t> values = a.coeffs();
  a.context()->ForwardTransform(values);
  return *RingElement::Create(a.context(), std::move(values));
}

RingElement NttInverse(const RingElement& a_hat) {
  std::vector<uint64_t> values = a_hat.coeffs();
  a_hat.context()->InverseTransform(values);
  return *RingElement::Create(a_hat.context(), std::move(values));
}

absl::StatusOr<RingElement> PointwiseMul(const RingElement& a,
                                         const RingElement& b) {
  if (a.n() != b.n() || a.q() != b.q()) {
    return absl::InvalidArgumentError("Ring mismatch in pointwise product.");
  }
  std::vector<uint64_t> out(a.n());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = MulMod(a.coeffs()[i], b.coeffs()[i], a.q());
  }
  return RingElement::Create(a.context(), std::move(out));
}

absl::StatusOr<RingElement> InvQ(const RingElement& a) {
  std::vector<uint64_t> values = a.coeffs();
  a.context()->ForwardTransform(values);
  for (auto& v : values) {
    auto inv = InvModPrime(v, a.q());
    if (!inv.has_value()) {
      return NotInvertible("element has a zero evaluation modulo q.");
    }
    v = *inv;
  }
  a.context()->InverseTransform(values);
  return RingElement::Create(a.context(), std::move(values));
}

absl::StatusOr<RingElement> InvModP(const RingElement& a, uint64_t p) {
  if (p < 2 || p >= a.q() || !IsPrime(p)) {
    return absl::InvalidArgumentError(
        absl::StrCat("p = ", p, " must be a prime below q."));
  }
  const uint32_t n = a.n();
  PolyP modulus(n + 1, 0);
  modulus[0] = 1;
  modulus[n] = 1;
  PolyP value(n);
  for (uint32_t i = 0; i < n; ++i) value[i] = a.coeffs()[i] % p;
  Trim(value);
  if (value.empty()) return NotInvertible("element is zero modulo p.");

  // Extended Euclid tracking only the cofactor of `value`.
  PolyP r0 = modulus, r1 = value;
  PolyP t0, t1 = {1};
  while (!r1.empty()) {
    auto [quot, rem] = DivModP(r0, r1, p);
    r0 = std::move(r1);
    r1 = std::move(rem);
    PolyP t2 = SubP(t0, MulP(quot, t1, p), p);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.size() != 1) {
    return NotInvertible("element shares a factor with x^n + 1 modulo p.");
  }
  const uint64_t scale = *InvModPrime(r0[0], p);
  std::vector<uint64_t> coeffs(n, 0);
  for (size_t i = 0; i < t0.size() && i < n; ++i) {
    coeffs[i] = MulMod(t0[i], scale, p);
  }
  return RingElement::Create(a.context(), std::move(coeffs));
}

}  // namespace rtabe
