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

#ifndef ASCNET_FEATURES_FEATURES_HPP_
#define ASCNET_FEATURES_FEATURES_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "audio/audio_clip.hpp"

namespace ascnet::features {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kMelBands = 64;
inline constexpr double kLogFloor = 1e-10;
// Clip length every variant is laid out for.
inline constexpr int kClipSeconds = 10;

enum class VariantId : std::uint8_t { kV1 = 1, kV2 = 2 };

// Front-end configuration. V1 works on 16 kHz audio with 25 ms / 10 ms
// framing, V2 on 44.1 kHz audio with 46 ms / 23 ms framing.
struct FeatureVariant {
  VariantId id;
  int sample_rate;
  double window_s;
  double hop_s;
  int n_mels;
  int total_frames;
  int segment_frames;
  int n_segments;

  int window_samples() const;
  int hop_samples() const;
  // Smallest power of two >= window_samples().
  int n_fft() const;
  std::string_view name() const;
  // Samples in the nominal 10 s clip at this variant's rate.
  std::size_t clip_samples() const;
};

const FeatureVariant& variant(VariantId id);
// Accepts "v1"/"v2" (case-insensitive).
VariantId parse_variant(std::string_view text);

struct LogMelSpectrogram {
  Matrix data;  // total_frames x 64, natural log of floored mel energy
  VariantId variant;
};

struct SegmentSet {
  std::vector<Matrix> segments;  // each segment_frames x 64, temporal order
  std::string clip_id;
  VariantId variant;
};

// Squared magnitude STFT of Hann-windowed frames with no centring. Frames
// are zero padded to the next power of two. Throws kArgument when the clip
// is shorter than one window.
Matrix power_spectrogram(const audio::AudioClip& clip, double window_s, double hop_s);

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filters with n_mels + 2 edge points spaced evenly in mel
// between 0 Hz and Nyquist. Each row is scaled to sum to 1.
Matrix mel_filterbank(int n_mels, int n_fft_bins, int sample_rate);

// Filterbank for a variant, built once and shared.
const Matrix& variant_filterbank(VariantId id);

// Log-mel features reconciled to the variant's exact frame count: extra
// frames are dropped, missing ones repeat the last computed frame. The clip
// must already be at the variant's sample rate.
LogMelSpectrogram log_mel(const audio::AudioClip& clip, VariantId id);

// Full front end: preprocess, resample to the variant rate, log_mel.
LogMelSpectrogram extract(const audio::AudioClip& raw, VariantId id);

// Splits into the variant's non-overlapping segments. V2 drops its single
// trailing frame.
SegmentSet segment(const LogMelSpectrogram& spec, std::string clip_id = {});

// "LMSF" cache files: magic, u8 version, u8 variant, u32 rows, u32 cols,
// then row-major little-endian float32.
std::string encode_lmsf(const LogMelSpectrogram& spec);
LogMelSpectrogram decode_lmsf(std::string_view bytes);
void save_lmsf(const std::filesystem::path& path, const LogMelSpectrogram& spec);
LogMelSpectrogram load_lmsf(const std::filesystem::path& path);

}  // namespace ascnet::features

#endif  // ASCNET_FEATURES_FEATURES_HPP_
