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
#include <cstdint>
#include <numeric>
#include <numbers>

#include "audio/audio_clip.hpp"
#include "common/error.hpp"

namespace ascnet::audio {

namespace {

constexpr double kKaiserBeta = 8.6;
// Sinc zero crossings on each side of the kernel centre.
constexpr int kZeroCrossings = 64;
// Above this many phases the kernel is evaluated per output sample instead
// of being tabulated.
constexpr std::int64_t kMaxTabulatedPhases = 2048;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Low-pass interpolation kernel in units of input samples.
class SincKernel {
 public:
  SincKernel(int in_rate, int out_rate)
      : bandwidth_(static_cast<double>(std::min(in_rate, out_rate)) / in_rate),
        half_width_(kZeroCrossings / bandwidth_),
        inv_i0_beta_(1.0 / std::cyl_bessel_i(0.0, kKaiserBeta)) {}

  double operator()(double t) const {
    const double r = t / half_width_;
    if (r <= -1.0 || r >= 1.0) return 0.0;
    const double window = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) *
                          inv_i0_beta_;
    return bandwidth_ * sinc(bandwidth_ * t) * window;
  }

  // Taps needed on each side of the interpolation point.
  std::int64_t reach() const { return static_cast<std::int64_t>(std::ceil(half_width_)); }

 private:
  double bandwidth_;
  double half_width_;
  double inv_i0_beta_;
};

}  // namespace

AudioClip resample(const AudioClip& clip, int target_rate) {
  require(target_rate > 0, ErrorCode::kArgument, "resample: target rate must be positive");
  require(clip.channel_count() == 1, ErrorCode::kArgument, "resample: mono clip required");
  require(clip.sample_rate > 0, ErrorCode::kArgument, "resample: source rate must be positive");
  if (target_rate == clip.sample_rate) return clip;

  const std::int64_t in_rate = clip.sample_rate;
  const std::int64_t g = std::gcd(in_rate, static_cast<std::int64_t>(target_rate));
  // Output sample n sits at input position n * step / phases.
  const std::int64_t phases = target_rate / g;
  const std::int64_t step = in_rate / g;

  const auto& x = clip.channels.front();
  const auto in_len = static_cast<std::int64_t>(x.size());
  const std::int64_t out_len = (2 * in_len * target_rate + in_rate) / (2 * in_rate);

  const SincKernel kernel(clip.sample_rate, target_rate);
  const std::int64_t reach = kernel.reach();
  const std::int64_t taps = 2 * reach;

  // Tap m (0-based) of phase p weights input sample base - reach + 1 + m.
  std::vector<double> table;
  const bool tabulated = phases <= kMaxTabulatedPhases;
  if (tabulated) {
    table.resize(static_cast<std::size_t>(phases * taps));
    for (std::int64_t p = 0; p < phases; ++p) {
      const double frac = static_cast<double>(p) / static_cast<double>(phases);
      for (std::int64_t m = 0; m < taps; ++m) {
        table[static_cast<std::size_t>(p * taps + m)] = kernel(frac - static_cast<double>(m - reach + 1));
      }
    }
  }

  std::vector<double> y(static_cast<std::size_t>(out_len));
  for (std::int64_t n = 0; n < out_len; ++n) {
    const std::int64_t pos = n * step;
    const std::int64_t base = pos / phases;
    const std::int64_t phase = pos % phases;
    const double frac = static_cast<double>(phase) / static_cast<double>(phases);
    const std::int64_t first = base - reach + 1;
    const std::int64_t m_lo = std::max<std::int64_t>(0, -first);
    const std::int64_t m_hi = std::min<std::int64_t>(taps, in_len - first);
    double acc = 0.0;
    if (tabulated) {
      const double* h = table.data() + phase * taps;
      for (std::int64_t m = m_lo; m < m_hi; ++m) acc += h[m] * x[static_cast<std::size_t>(first + m)];
    } else {
      for (std::int64_t m = m_lo; m < m_hi; ++m) {
        acc += kernel(frac - static_cast<double>(m - reach + 1)) * x[static_cast<std::size_t>(first + m)];
      }
    }
    y[static_cast<std::size_t>(n)] = acc;
  }
  return AudioClip::mono(std::move(y), target_rate);
}

}  // namespace ascnet::audio
