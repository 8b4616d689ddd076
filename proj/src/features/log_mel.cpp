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
#include <cmath>

#include "common/error.hpp"
#include "features/features.hpp"

namespace ascnet::features {

LogMelSpectrogram log_mel(const audio::AudioClip& clip, VariantId id) {
  const FeatureVariant& v = variant(id);
  require(clip.sample_rate == v.sample_rate, ErrorCode::kArgument,
          "log_mel: clip rate " + std::to_string(clip.sample_rate) + " Hz does not match " +
              std::string(v.name()) + " (" + std::to_string(v.sample_rate) + " Hz)");
  const Matrix power = power_spectrogram(clip, v.window_s, v.hop_s);
  const Matrix mel = power * variant_filterbank(id).transpose();

  LogMelSpectrogram out{Matrix(v.total_frames, v.n_mels), id};
  const Eigen::Index computed = mel.rows();
  for (Eigen::Index r = 0; r < v.total_frames; ++r) {
    const Eigen::Index src = std::min(r, computed - 1);
    for (Eigen::Index c = 0; c < v.n_mels; ++c) {
      out.data(r, c) = std::log(std::max(mel(src, c), kLogFloor));
    }
  }
  return out;
}

LogMelSpectrogram extract(const audio::AudioClip& raw, VariantId id) {
  const auto clip = audio::resample(audio::preprocess(raw), variant(id).sample_rate);
  return log_mel(clip, id);
}

SegmentSet segment(const LogMelSpectrogram& spec, std::string clip_id) {
  const FeatureVariant& v = variant(spec.variant);
  require(spec.data.rows() == v.total_frames && spec.data.cols() == v.n_mels,
          ErrorCode::kInvariant,
          "segment: spectrogram is " + std::to_string(spec.data.rows()) + "x" +
              std::to_string(spec.data.cols()) + ", expected " +
              std::to_string(v.total_frames) + "x" + std::to_string(v.n_mels));
  SegmentSet out;
  out.clip_id = std::move(clip_id);
  out.variant = spec.variant;
  out.segments.reserve(static_cast<std::size_t>(v.n_segments));
  for (int s = 0; s < v.n_segments; ++s) {
    out.segments.emplace_back(spec.data.middleRows(s * v.segment_frames, v.segment_frames));
  }
  return out;
}

}  // namespace ascnet::features
