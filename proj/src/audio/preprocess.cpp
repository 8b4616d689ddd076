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

#include "audio/audio_clip.hpp"
#include "common/error.hpp"

namespace ascnet::audio {

AudioClip downmix_mono(const AudioClip& clip) {
  require(clip.channel_count() >= 1, ErrorCode::kArgument, "downmix: clip has no channels");
  if (clip.channel_count() == 1) return clip;
  const std::size_t n = clip.frames();
  for (const auto& ch : clip.channels) {
    require(ch.size() == n, ErrorCode::kArgument, "downmix: channel lengths differ");
  }
  std::vector<double> mono(n, 0.0);
  const double inv = 1.0 / static_cast<double>(clip.channel_count());
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& ch : clip.channels) sum += ch[i];
    mono[i] = sum * inv;
  }
  return AudioClip::mono(std::move(mono), clip.sample_rate);
}

AudioClip normalize_amplitude(const AudioClip& clip) {
  require(clip.channel_count() == 1, ErrorCode::kArgument, "normalize: mono clip required");
  const auto& x = clip.channels.front();
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0 || peak == 1.0) return clip;
  std::vector<double> y(x.size());
  std::transform(x.begin(), x.end(), y.begin(), [peak](double v) { return v / peak; });
  return AudioClip::mono(std::move(y), clip.sample_rate);
}

AudioClip preprocess(const AudioClip& clip) {
  return normalize_amplitude(downmix_mono(clip));
}

AudioClip fit_length(const AudioClip& clip, std::size_t frames, bool* adjusted) {
  require(clip.frames() > 0, ErrorCode::kArgument, "fit_length: empty clip");
  if (adjusted) *adjusted = clip.frames() != frames;
  if (clip.frames() == frames) return clip;
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  for (const auto& ch : clip.channels) {
    std::vector<double> y(frames);
    for (std::size_t i = 0; i < frames; ++i) y[i] = ch[i % ch.size()];
    out.channels.push_back(std::move(y));
  }
  return out;
}

}  // namespace ascnet::audio
