/* Copyright 2026 The ascnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "common/error.hpp"
#include "features/features.hpp"

namespace ascnet::features {

namespace {

constexpr FeatureVariant kV1{VariantId::kV1, 16000, 0.025, 0.010, kMelBands, 999, 111, 9};
constexpr FeatureVariant kV2{VariantId::kV2, 44100, 0.046, 0.023, kMelBands, 431, 43, 10};

static_assert(kV1.segment_frames * kV1.n_segments == kV1.total_frames);
static_assert(kV2.segment_frames * kV2.n_segments <= kV2.total_frames);

}  // namespace

int FeatureVariant::window_samples() const {
  return static_cast<int>(std::lround(window_s * sample_rate));
}

int FeatureVariant::hop_samples() const {
  return static_cast<int>(std::lround(hop_s * sample_rate));
}

int FeatureVariant::n_fft() const {
  int n = 1;
  while (n < window_samples()) n <<= 1;
  return n;
}

std::string_view FeatureVariant::name() const { return id == VariantId::kV1 ? "v1" : "v2"; }

std::size_t FeatureVariant::clip_samples() const {
  return static_cast<std::size_t>(sample_rate) * kClipSeconds;
}

const FeatureVariant& variant(VariantId id) {
  switch (id) {
    case VariantId::kV1: return kV1;
    case VariantId::kV2: return kV2;
  }
  fail(ErrorCode::kArgument, "unknown feature variant id " + std::to_string(static_cast<int>(id)));
}

VariantId parse_variant(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "v1") return VariantId::kV1;
  if (lower == "v2") return VariantId::kV2;
  fail(ErrorCode::kUsage, "unknown feature variant '" + std::string(text) + "' (expected v1 or v2)");
}

}  // namespace ascnet::features
