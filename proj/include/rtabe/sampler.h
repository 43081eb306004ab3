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

#ifndef RTABE_SAMPLER_H_
#define RTABE_SAMPLER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "rtabe/params.h"
#include "rtabe/prng.h"
#include "rtabe/ring.h"

namespace rtabe {

// Every coefficient independent and uniform in [0, q).
RingElement SampleUniform(const std::shared_ptr<const RingContext>& context,
                          Prng& prng);

// Centered discrete Gaussian over the integers, rho(x) = exp(-x^2 / 2 sigma^2),
// truncated to |x| <= ceil(10 sigma). Sampling inverts a cumulative table;
// not constant time.
class GaussianSampler {
 public:
  static absl::StatusOr<GaussianSampler> Create(double sigma);

  double sigma() const { return sigma_; }
  int64_t tail_bound() const { return tail_bound_; }

  int64_t SampleInteger(Prng& prng) const;

  // n independent draws stored mod q (negative v as q - |v|).
  RingElement SampleElement(const std::shared_ptr<const RingContext>& context,
                            Prng& prng) const;

 private:
  GaussianSampler(double sigma, int64_t tail_bound, std::vector<double> cdf)
      : sigma_(sigma), tail_bound_(tail_bound), cdf_(std::move(cdf)) {}

  double sigma_;
  int64_t tail_bound_;
  // cdf_[k] = P(X <= k - tail_bound_).
  std::vector<double> cdf_;
};

// The scheme's error distribution X under a Params: Gaussian draws when
// mode.noise is kNoiseOn, the zero element otherwise.
class NoiseSampler {
 public:
  static absl::StatusOr<NoiseSampler> Create(const Params& params);

  bool enabled() const { return gaussian_.has_value(); }

  RingElement Sample(Prng& prng) const;
  // p * e for a fresh e; `raw` receives e when non-null.
  RingElement SampleScaled(Prng& prng, RingElement* raw = nullptr) const;

 private:
  NoiseSampler(std::shared_ptr<const RingContext> context, uint64_t p,
               std::optional<GaussianSampler> gaussian)
      : context_(std::move(context)), p_(p), gaussian_(std::move(gaussian)) {}

  std::shared_ptr<const RingContext> context_;
  uint64_t p_;
  std::optional<GaussianSampler> gaussian_;
};

}  // namespace rtabe

#endif  // RTABE_SAMPLER_H_
