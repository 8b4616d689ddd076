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
#include <vector>

#include "common/error.hpp"
#include "features/features.hpp"

namespace ascnet::features {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matrix mel_filterbank(int n_mels, int n_fft_bins, int sample_rate) {
  require(n_mels >= 1, ErrorCode::kArgument, "filterbank: n_mels must be positive");
  require(n_fft_bins >= n_mels + 2, ErrorCode::kArgument,
          "filterbank: need at least n_mels + 2 FFT bins");
  require(sample_rate > 0, ErrorCode::kArgument, "filterbank: invalid sample rate");

  const double nyquist = sample_rate / 2.0;
  const double mel_max = hz_to_mel(nyquist);
  std::vector<double> edges(static_cast<std::size_t>(n_mels + 2));
  for (int i = 0; i < n_mels + 2; ++i) {
    edges[static_cast<std::size_t>(i)] = mel_to_hz(mel_max * i / (n_mels + 1));
  }
  // Bin k sits at k * sr / n_fft with n_fft = 2 * (bins - 1).
  const double bin_hz = nyquist / (n_fft_bins - 1);

  Matrix fb = Matrix::Zero(n_mels, n_fft_bins);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double peak = edges[static_cast<std::size_t>(m + 1)];
    const double hi = edges[static_cast<std::size_t>(m + 2)];
    for (int k = 0; k < n_fft_bins; ++k) {
      const double f = k * bin_hz;
      double w = 0.0;
      if (f > lo && f <= peak) w = (f - lo) / (peak - lo);
      else if (f > peak && f < hi) w = (hi - f) / (hi - peak);
      fb(m, k) = w;
    }
    double sum = fb.row(m).sum();
    if (sum == 0.0) {
      // Triangle narrower than one bin: collapse onto the bin nearest its peak.
      const int k = static_cast<int>(std::lround(peak / bin_hz));
      fb(m, k) = 1.0;
      sum = 1.0;
    }
    fb.row(m) /= sum;
  }
  return fb;
}

const Matrix& variant_filterbank(VariantId id) {
  static const Matrix v1 = [] {
    const auto& v = variant(VariantId::kV1);
    return mel_filterbank(v.n_mels, v.n_fft() / 2 + 1, v.sample_rate);
  }();
  static const Matrix v2 = [] {
    const auto& v = variant(VariantId::kV2);
    return mel_filterbank(v.n_mels, v.n_fft() / 2 + 1, v.sample_rate);
  }();
  return id == VariantId::kV1 ? v1 : v2;
}

}  // namespace ascnet::features
