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

#ifndef ASCNET_AUDIO_AUDIO_CLIP_HPP_
#define ASCNET_AUDIO_AUDIO_CLIP_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ascnet::audio {

// Sampled waveform, one vector per channel. All channels have equal length.
struct AudioClip {
  std::vector<std::vector<double>> channels;
  int sample_rate = 0;

  std::size_t channel_count() const { return channels.size(); }
  std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(frames()) / sample_rate : 0.0;
  }

  // Mono clip from a single sample vector.
  static AudioClip mono(std::vector<double> samples, int sample_rate);
};

// Decodes a RIFF/WAVE PCM file (16- or 24-bit integer, 1 or 2 channels).
// Integer samples are scaled by 1 / 2^(bits-1).
AudioClip decode_wav(std::string_view bytes);
AudioClip load_wav(const std::filesystem::path& path);

// Encodes samples as 16- or 24-bit PCM, clamping to the representable range.
std::string encode_wav(const AudioClip& clip, int bits_per_sample);
void save_wav(const std::filesystem::path& path, const AudioClip& clip,
              int bits_per_sample);

// Arithmetic mean across channels. A mono clip is returned unchanged.
AudioClip downmix_mono(const AudioClip& clip);

// Divides by the peak absolute amplitude; an all-zero clip is unchanged.
AudioClip normalize_amplitude(const AudioClip& clip);

// Band-limited rational resampling with a Kaiser-windowed sinc kernel.
// Output length is round(frames * target_rate / sample_rate).
AudioClip resample(const AudioClip& clip, int target_rate);

// downmix_mono followed by normalize_amplitude.
AudioClip preprocess(const AudioClip& clip);

// Repeats the signal until it spans `frames` samples, or keeps only the first
// `frames` samples. Returns the clip unchanged when the length already
// matches. `adjusted` reports whether anything changed.
AudioClip fit_length(const AudioClip& clip, std::size_t frames, bool* adjusted = nullptr);

}  // namespace ascnet::audio

#endif  // ASCNET_AUDIO_AUDIO_CLIP_HPP_
