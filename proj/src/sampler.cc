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

#include "rtabe/sampler.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "rtabe/modular.h"
#include "rtabe/status_macros.h"

namespace rtabe {

RingElement SampleUniform(const std::shared_ptr<const RingContext>& context,
                          Prng& prng) {
  std::vector<uint64_t> coeffs(context->n());
  for (auto& c : coeffs) c = prng.Uniform(context->q());
  return *RingElement::Create(context, std::move(coeffs));
}

absl::StatusOr<GaussianSampler> GaussianSampler::Create(double sigma) {
  if (!std::isfinite(sigma) || sigma <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("Gaussian width ", sigma, " must be positive."));
  }
  const int64_t bound = static_cast<int64_t>(std::ceil(10.0 * sigma));
  if (bound > (int64_t{1} << 24)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Gaussian width ", sigma, " is too large for a table."));
  }
  std::vector<double> weights(2 * bound + 1);
  double total = 0.0;
  for (int64_t x = -bound; x <= bound; ++x) {
    const double w =
        std::exp(-static_cast<double>(x * x) / (2 * sigma * sigma));
    weights[x + bound] = w;
    total += w;
  }
  std::vector<double> cdf(weights.size());
  double running = 0.0;
  for (size_t k = 0; k < weights.size(); ++k) {
    running += weights[k] / total;
    cdf[k] = running;
  }
  cdf.back() = 1.0;
  return GaussianSampler(sigma, bound, std::move(cdf));
}

int64_t GaussianSampler::SampleInteger(Prng& prng) const {
  const double u = prng.UniformDouble();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  // u < 1 = cdf_.back(), so `it` is always dereferenceable.
  return static_cast<int64_t>(it - cdf_.begin()) - tail_bound_;
}

RingElement GaussianSampler::SampleElement(
    const std::shared_ptr<const RingContext>& context, Prng& prng) const {
  std::vector<uint64_t> coeffs(context->n());
  for (auto& c : coeffs) c = ReduceSigned(SampleInteger(prng), context->q());
  return *RingElement::Create(context, std::move(coeffs));
}

absl::StatusOr<NoiseSampler> NoiseSampler::Create(const Params& params) {
  RTABE_RETURN_IF_ERROR(params.Validate());
  RTABE_ASSIGN_OR_RETURN(auto context, RingContext::ForParams(params));
  std::optional<GaussianSampler> gaussian;
  if (params.mode.noise == NoiseMode::kNoiseOn) {
    RTABE_ASSIGN_OR_RETURN(gaussian, GaussianSampler::Create(params.sigma));
  }
  return NoiseSampler(std::move(context), params.p, std::move(gaussian));
}

RingElement NoiseSampler::Sample(Prng& prng) const {
  if (!gaussian_.has_value()) return RingElement::Zero(context_);
  return gaussian_->SampleElement(context_, prng);
}

RingElement NoiseSampler::SampleScaled(Prng& prng, RingElement* raw) const {
  RingElement e = Sample(prng);
  RingElement scaled = e.ScalarMul(p_);
  if (raw != nullptr) *raw = std::move(e);
  return scaled;
}

}  // namespace rtabe
