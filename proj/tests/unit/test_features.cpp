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
#include <numbers>

#include <doctest.h>

#include "audio/audio_clip.hpp"
#include "features/features.hpp"
#include "support/test_support.hpp"

namespace ascnet::features {
namespace {

using testing::error_of;

audio::AudioClip tone_clip(double hz, int rate, double seconds, double amp = 1.0) {
  return audio::AudioClip::mono(
      testing::sine(hz, rate, static_cast<std::size_t>(std::llround(seconds * rate)), amp), rate);
}

TEST_CASE("variant geometry") {
  const FeatureVariant& v1 = variant(VariantId::kV1);
  CHECK(v1.sample_rate == 16000);
  CHECK(v1.window_samples() == 400);
  CHECK(v1.hop_samples() == 160);
  CHECK(v1.n_fft() == 512);
  CHECK(v1.total_frames == 999);
  CHECK(v1.segment_frames * v1.n_segments == v1.total_frames);
  const FeatureVariant& v2 = variant(VariantId::kV2);
  CHECK(v2.sample_rate == 44100);
  CHECK(v2.window_samples() == 2029);
  CHECK(v2.hop_samples() == 1014);
  CHECK(v2.n_fft() == 2048);
  CHECK(v2.total_frames == 431);
  CHECK(v2.segment_frames * v2.n_segments == 430);
  CHECK(parse_variant("v2") == VariantId::kV2);
  CHECK(error_of([] { parse_variant("v3"); }) == ErrorCode::kUsage);
}

TEST_CASE("power spectrogram framing") {
  const audio::AudioClip clip = tone_clip(440.0, 16000, 10.0);
  const Matrix p = power_spectrogram(clip, 0.025, 0.010);
  CHECK(p.rows() == 1 + (160000 - 400) / 160);
  CHECK(p.rows() == 998);
  CHECK(p.cols() == 257);
  const Matrix z = power_spectrogram(audio::AudioClip::mono(std::vector<double>(4000), 16000),
                                     0.025, 0.010);
  CHECK(z.cwiseAbs().maxCoeff() == 0.0);
  CHECK(error_of([] {
          power_spectrogram(audio::AudioClip::mono(std::vector<double>(399), 16000), 0.025, 0.01);
        }) == ErrorCode::kArgument);
}

TEST_CASE("power spectrogram frame matches a direct DFT") {
  // 40 cycles per 512-sample frame: bin-centred frequency
  const double hz = 40.0 * 16000.0 / 512.0;
  const audio::AudioClip clip = tone_clip(hz, 16000, 0.1, 0.8);
  const Matrix p = power_spectrogram(clip, 0.025, 0.010);
  const std::size_t start = 3 * 160;
  for (int k = 0; k < 257; k += 1) {
    std::complex<double> acc = 0.0;
    for (int n = 0; n < 400; ++n) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / 400.0);
      acc += w * clip.channels[0][start + n] *
             std::polar(1.0, -2.0 * std::numbers::pi * k * n / 512.0);
    }
    CHECK(p(3, k) == doctest::Approx(std::norm(acc)).epsilon(1e-9).scale(1e-6));
  }
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    Eigen::Index arg = 0;
    p.row(r).maxCoeff(&arg);
    CHECK(arg == 40);
  }
}

TEST_CASE("mel scale") {
  CHECK(hz_to_mel(0.0) == 0.0);
  CHECK(hz_to_mel(1000.0) == doctest::Approx(2595.0 * std::log10(1.0 + 1000.0 / 700.0)));
  CHECK(hz_to_mel(1000.0) == doctest::Approx(999.9855).epsilon(1e-7));
  CHECK(mel_to_hz(hz_to_mel(3210.5)) == doctest::Approx(3210.5).epsilon(1e-12));
}

TEST_CASE("filterbank structure") {
  for (const auto& [bins, rate] : {std::pair{257, 16000}, std::pair{1025, 44100}}) {
    const Matrix fb = mel_filterbank(64, bins, rate);
    REQUIRE(fb.rows() == 64);
    REQUIRE(fb.cols() == bins);
    const double top = hz_to_mel(rate / 2.0);
    const double bin_hz = (rate / 2.0) / (bins - 1);
    for (int m = 0; m < 64; ++m) {
      CAPTURE(m);
      const double lo = mel_to_hz(top * m / 65.0);
      const double hi = mel_to_hz(top * (m + 2) / 65.0);
      CHECK(fb.row(m).minCoeff() >= 0.0);
      CHECK(fb.row(m).sum() == doctest::Approx(1.0).epsilon(1e-12));
      int first = -1, last = -1;
      for (int k = 0; k < bins; ++k) {
        if (fb(m, k) > 0.0) {
          if (first < 0) first = k;
          last = k;
        }
      }
      REQUIRE(first >= 0);
      CHECK(first * bin_hz >= lo - bin_hz / 2);
      CHECK(last * bin_hz <= hi + bin_hz / 2);
      // unimodal: rises to one peak then falls
      Eigen::Index peak = 0;
      fb.row(m).maxCoeff(&peak);
      for (int k = first; k < peak; ++k) CHECK(fb(m, k) <= fb(m, k + 1));
      for (int k = static_cast<int>(peak); k < last; ++k) CHECK(fb(m, k) >= fb(m, k + 1));
    }
  }
  CHECK(error_of([] { mel_filterbank(64, 60, 16000); }) == ErrorCode::kArgument);
}

TEST_CASE("log-mel shapes for ten-second clips") {
  const LogMelSpectrogram a = log_mel(tone_clip(300.0, 16000, 10.0), VariantId::kV1);
  CHECK(a.data.rows() == 999);
  CHECK(a.data.cols() == 64);
  CHECK(a.data.allFinite());
  const LogMelSpectrogram b = log_mel(tone_clip(300.0, 44100, 10.0), VariantId::kV2);
  CHECK(b.data.rows() == 431);
  CHECK(b.data.cols() == 64);
  CHECK(error_of([] { log_mel(tone_clip(300.0, 22050, 1.0), VariantId::kV1); }) ==
        ErrorCode::kArgument);
}

TEST_CASE("log-mel of silence is the floor") {
  const LogMelSpectrogram s =
      log_mel(audio::AudioClip::mono(std::vector<double>(160000), 16000), VariantId::kV1);
  CHECK((s.data.array() == std::log(1e-10)).all());
}

TEST_CASE("scaling the clip shifts log-mel by 2 ln c") {
  Rng rng(4);
  const audio::AudioClip clip =
      audio::AudioClip::mono(testing::band_noise(100.0, 7000.0, 16000, 16000, rng), 16000);
  audio::AudioClip scaled = clip;
  const double c = 0.3;
  for (double& v : scaled.channels[0]) v *= c;
  const Matrix a = log_mel(clip, VariantId::kV1).data;
  const Matrix b = log_mel(scaled, VariantId::kV1).data;
  std::size_t compared = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (b.data()[i] > std::log(1e-10) + 1.0) {
      CHECK(b.data()[i] - a.data()[i] == doctest::Approx(2.0 * std::log(c)).epsilon(1e-9));
      ++compared;
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("a 1 kHz tone peaks in the mel band centred nearest 1 kHz") {
  const Matrix s = log_mel(tone_clip(1000.0, 16000, 2.0), VariantId::kV1).data;
  Eigen::Index arg = 0;
  s.colwise().mean().maxCoeff(&arg);
  const double top = hz_to_mel(8000.0);
  int nearest = 0;
  double best = 1e9;
  for (int m = 0; m < 64; ++m) {
    const double centre = mel_to_hz(top * (m + 1) / 65.0);
    if (std::abs(centre - 1000.0) < best) {
      best = std::abs(centre - 1000.0);
      nearest = m;
    }
  }
  CHECK(arg == nearest);
}

TEST_CASE("segmentation partitions the spectrogram") {
  const LogMelSpectrogram a = log_mel(tone_clip(500.0, 16000, 10.0), VariantId::kV1);
  const SegmentSet s = segment(a, "clip-a");
  REQUIRE(s.segments.size() == 9);
  CHECK(s.clip_id == "clip-a");
  Matrix joined(999, 64);
  for (std::size_t i = 0; i < 9; ++i) {
    REQUIRE(s.segments[i].rows() == 111);
    REQUIRE(s.segments[i].cols() == 64);
    joined.middleRows(static_cast<Eigen::Index>(i) * 111, 111) = s.segments[i];
  }
  CHECK(joined == a.data);

  const LogMelSpectrogram b = log_mel(tone_clip(500.0, 44100, 10.0), VariantId::kV2);
  const SegmentSet t = segment(b);
  REQUIRE(t.segments.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(t.segments[i].rows() == 43);
    CHECK(t.segments[i] == b.data.middleRows(static_cast<Eigen::Index>(i) * 43, 43));
  }

  LogMelSpectrogram bad = a;
  bad.data.conservativeResize(998, 64);
  CHECK(error_of([&] { segment(bad); }) == ErrorCode::kInvariant);
}

TEST_CASE("extract runs the full front end on stereo 44.1 kHz input") {
  audio::AudioClip raw;
  raw.sample_rate = 44100;
  raw.channels = {testing::sine(700.0, 44100, 441000, 0.2), testing::sine(900.0, 44100, 441000, 0.1)};
  const LogMelSpectrogram v1 = extract(raw, VariantId::kV1);
  CHECK(v1.data.rows() == 999);
  CHECK(v1.variant == VariantId::kV1);
  const LogMelSpectrogram v2 = extract(raw, VariantId::kV2);
  CHECK(v2.data.rows() == 431);
  CHECK(segment(v1).segments.size() == 9);
  CHECK(segment(v2).segments.size() == 10);
}

TEST_CASE("LMSF round trip is bit exact at float32") {
  Rng rng(5);
  LogMelSpectrogram s{Matrix(431, 64), VariantId::kV2};
  for (Eigen::Index i = 0; i < s.data.size(); ++i) {
    s.data.data()[i] = static_cast<float>(rng.uniform(-23.0, 5.0));
  }
  const std::string bytes = encode_lmsf(s);
  CHECK(bytes.size() == 4 + 1 + 1 + 4 + 4 + 431 * 64 * 4);
  CHECK(bytes.substr(0, 4) == "LMSF");
  const LogMelSpectrogram back = decode_lmsf(bytes);
  CHECK(back.variant == VariantId::kV2);
  CHECK(back.data == s.data);
  CHECK(encode_lmsf(back) == bytes);

  testing::TempDir dir("lmsf");
  save_lmsf(dir / "a.lmsf", s);
  CHECK(load_lmsf(dir / "a.lmsf").data == s.data);

  std::string bad = bytes;
  bad[0] = 'X';
  CHECK(error_of([&] { decode_lmsf(bad); }) == ErrorCode::kFormat);
  CHECK(error_of([&] { decode_lmsf(bytes.substr(0, bytes.size() - 3)); }) == ErrorCode::kFormat);
}

}  // namespace
}  // namespace ascnet::features
