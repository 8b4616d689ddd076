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

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "common/error.hpp"
#include "features/features.hpp"

namespace ascnet::features {

namespace {

// Periodic Hann window.
std::vector<double> hann(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

}  // namespace

Matrix power_spectrogram(const audio::AudioClip& clip, double window_s, double hop_s) {
  require(clip.channel_count() == 1, ErrorCode::kArgument, "spectrogram: mono clip required");
  require(clip.sample_rate > 0, ErrorCode::kArgument, "spectrogram: invalid sample rate");
  const int win = static_cast<int>(std::lround(window_s * clip.sample_rate));
  const int hop = static_cast<int>(std::lround(hop_s * clip.sample_rate));
  require(win > 0 && hop > 0, ErrorCode::kArgument, "spectrogram: window and hop must be positive");
  const auto& x = clip.channels.front();
  require(x.size() >= static_cast<std::size_t>(win), ErrorCode::kArgument,
          "spectrogram: clip shorter than one window (" + std::to_string(x.size()) +
              " < " + std::to_string(win) + " samples)");

  int n_fft = 1;
  while (n_fft < win) n_fft <<= 1;
  const int bins = n_fft / 2 + 1;
  const std::size_t frames = 1 + (x.size() - static_cast<std::size_t>(win)) / static_cast<std::size_t>(hop);

  const std::vector<double> window = hann(win);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(static_cast<std::size_t>(n_fft), 0.0);
  std::vector<std::complex<double>> spectrum;

  Matrix power(static_cast<Eigen::Index>(frames), bins);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * static_cast<std::size_t>(hop);
    for (int i = 0; i < win; ++i) {
      frame[static_cast<std::size_t>(i)] = x[start + static_cast<std::size_t>(i)] * window[static_cast<std::size_t>(i)];
    }
    fft.fwd(spectrum, frame);
    for (int k = 0; k < bins; ++k) {
      power(static_cast<Eigen::Index>(f), k) = std::norm(spectrum[static_cast<std::size_t>(k)]);
    }
  }
  return power;
}

}  // namespace ascnet::features
