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

#include "test_support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>

#include <unistd.h>

#include <unsupported/Eigen/FFT>

#include "audio/audio_clip.hpp"
#include "common/error.hpp"
#include "common/files.hpp"
#include "common/scene_classes.hpp"
#include "nn/ops.hpp"

namespace ascnet::testing {

std::vector<double> sine(double freq_hz, int rate, std::size_t n, double amp, double phase) {
  std::vector<double> x(n);
  const double w = 2.0 * std::numbers::pi * freq_hz / rate;
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(w * static_cast<double>(i) + phase);
  return x;
}

std::vector<double> band_noise(double lo_hz, double hi_hz, int rate, std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, x);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const std::size_t mirrored = std::min(k, n - k);
    const double f = static_cast<double>(mirrored) * rate / static_cast<double>(n);
    if (f < lo_hz || f > hi_hz) spec[k] = 0.0;
  }
  fft.inv(x, spec);
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : x) v /= peak;
  }
  return x;
}

std::size_t dft_peak_bin(const std::vector<double>& x) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, x);
  std::size_t best = 1;
  for (std::size_t k = 1; k <= x.size() / 2; ++k) {
    if (std::norm(spec[k]) > std::norm(spec[best])) best = k;
  }
  return best;
}

nn::Tensor random_tensor(const nn::Shape& shape, Rng& rng, double lo, double hi) {
  nn::Tensor t(shape);
  for (double& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

nn::Tensor naive_conv2d(const nn::Tensor& input, const nn::Tensor& kernels,
                        const nn::Tensor& bias) {
  const std::size_t H = input.dim(0), W = input.dim(1), C = input.dim(2);
  const std::size_t K = kernels.dim(0), kh = kernels.dim(1), kw = kernels.dim(2);
  const long ph = static_cast<long>(kh / 2), pw = static_cast<long>(kw / 2);
  nn::Tensor out({H, W, K});
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t w = 0; w < W; ++w) {
      for (std::size_t c = 0; c < K; ++c) {
        double acc = bias[c];
        for (std::size_t i = 0; i < kh; ++i) {
          for (std::size_t j = 0; j < kw; ++j) {
            const long y = static_cast<long>(h + i) - ph;
            const long x = static_cast<long>(w + j) - pw;
            if (y < 0 || x < 0 || y >= static_cast<long>(H) || x >= static_cast<long>(W)) continue;
            for (std::size_t d = 0; d < C; ++d) {
              acc += input[(static_cast<std::size_t>(y) * W + static_cast<std::size_t>(x)) * C + d] *
                     kernels[((c * kh + i) * kw + j) * C + d];
            }
          }
        }
        out[(h * W + w) * K + c] = acc;
      }
    }
  }
  return out;
}

nn::Tensor naive_conv1d(const nn::Tensor& input, const nn::Tensor& kernels,
                        const nn::Tensor& bias) {
  const std::size_t T = input.dim(0), C = input.dim(1);
  const std::size_t K = kernels.dim(0), k = kernels.dim(1);
  const long p = static_cast<long>(k / 2);
  nn::Tensor out({T, K});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t c = 0; c < K; ++c) {
      double acc = bias[c];
      for (std::size_t i = 0; i < k; ++i) {
        const long s = static_cast<long>(t + i) - p;
        if (s < 0 || s >= static_cast<long>(T)) continue;
        for (std::size_t d = 0; d < C; ++d) {
          acc += input[static_cast<std::size_t>(s) * C + d] * kernels[(c * k + i) * C + d];
        }
      }
      out[t * K + c] = acc;
    }
  }
  return out;
}

double relative_error(const nn::Tensor& a, const nn::Tensor& n) {
  double diff = 0.0, na = 0.0, nn_ = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - n[i]) * (a[i] - n[i]);
    na += a[i] * a[i];
    nn_ += n[i] * n[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn_), 1e-5});
}

namespace {

nn::Shape batched(std::size_t batch, const nn::Shape& s) {
  nn::Shape out{batch};
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

void note(GradCheck& r, const std::string& name, const nn::Tensor& a, const nn::Tensor& n) {
  const double e = relative_error(a, n);
  r.checked += a.size();
  if (r.worst.empty() || e > r.max_error) {
    r.max_error = e;
    r.worst = name;
  }
}

template <typename LossFn>
nn::Tensor numeric_grad(double* slot, std::size_t count, double h, LossFn&& loss) {
  nn::Tensor g({count});
  for (std::size_t i = 0; i < count; ++i) {
    const double saved = slot[i];
    slot[i] = saved + h;
    const double lp = loss();
    slot[i] = saved - h;
    const double lm = loss();
    slot[i] = saved;
    g[i] = (lp - lm) / (2.0 * h);
  }
  return g;
}

}  // namespace

GradCheck check_layer_gradients(const std::vector<nn::LayerSpec>& specs,
                                const nn::Shape& input_shape, std::uint64_t seed,
                                std::size_t batch, double h) {
  Rng rng(seed);
  nn::ParamStore params;
  nn::Network net(specs, input_shape, params, rng);
  // Perturb batch-norm gains and biases away from their trivial init.
  for (auto& p : params) {
    if (p.trainable) {
      for (double& v : p.value.values()) v += rng.uniform(-0.3, 0.3);
    }
  }
  nn::Tensor x = random_tensor(batched(batch, input_shape), rng);
  const nn::Tensor w = random_tensor(batched(batch, net.output_shape()), rng);
  const std::uint64_t fwd_seed = rng.next_u64();

  auto loss = [&]() {
    nn::ParamStore scratch = params;
    Rng r(fwd_seed);
    nn::Tape tape;
    const nn::Tensor y = net.forward_train(x, scratch, r, tape);
    double l = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) l += w[i] * y[i];
    return l;
  };

  nn::ParamStore run = params;
  Rng r(fwd_seed);
  nn::Tape tape;
  net.forward_train(x, run, r, tape);
  nn::Gradients grads = nn::zero_gradients(params);
  const nn::Tensor dx = net.backward(w, params, tape, grads);

  GradCheck result;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].trainable) continue;
    const nn::Tensor num = numeric_grad(params[i].value.data(), params[i].value.size(), h, loss);
    note(result, params[i].name, grads[i].reshaped({grads[i].size()}), num);
  }
  const nn::Tensor num_dx = numeric_grad(x.data(), x.size(), h, loss);
  note(result, "input", dx.reshaped({dx.size()}), num_dx);
  return result;
}

GradCheck check_loss_gradients(const std::vector<nn::LayerSpec>& specs,
                               const nn::Shape& input_shape, std::uint64_t seed,
                               std::size_t batch, double h) {
  Rng rng(seed);
  nn::ParamStore params;
  nn::Network net(specs, input_shape, params, rng);
  for (auto& p : params) {
    if (p.trainable) {
      for (double& v : p.value.values()) v += rng.uniform(-0.1, 0.1);
    }
  }
  const nn::Tensor x = random_tensor(batched(batch, input_shape), rng);
  const std::size_t classes = net.output_shape().back();
  std::vector<int> labels(batch);
  for (int& l : labels) l = static_cast<int>(rng.below(classes));
  const std::uint64_t fwd_seed = rng.next_u64();

  auto loss = [&]() {
    nn::ParamStore scratch = params;
    Rng r(fwd_seed);
    nn::Tape tape;
    const nn::Tensor probs = net.forward_train(x, scratch, r, tape);
    return nn::cross_entropy(probs, labels).loss;
  };

  nn::ParamStore run = params;
  Rng r(fwd_seed);
  nn::Tape tape;
  net.forward_train(x, run, r, tape);
  const nn::LossGradients lg = nn::backward(net, params, tape, labels);

  GradCheck result;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].trainable) continue;
    const nn::Tensor num = numeric_grad(params[i].value.data(), params[i].value.size(), h, loss);
    note(result, params[i].name, lg.grads[i].reshaped({lg.grads[i].size()}), num);
  }
  return result;
}

std::vector<double> band_cue(bool tone, Band band, std::size_t n, Rng& rng) {
  if (tone) {
    const double f = rng.uniform(band.lo_hz, band.hi_hz);
    return sine(f, kSyntheticRate, n, 1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
  }
  return band_noise(band.lo_hz, band.hi_hz, kSyntheticRate, n, rng);
}

ManifestWriter::ManifestWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_ / "audio");
}

void ManifestWriter::add(const std::string& name, int label, const std::vector<double>& samples,
                         int rate) {
  const std::string rel = "audio/" + name + ".wav";
  audio::save_wav(dir_ / rel, audio::AudioClip::mono(samples, rate), 16);
  add_row(rel, label);
}

void ManifestWriter::add_row(const std::string& relative_path, int label) {
  rows_.push_back(relative_path + "\t" + std::string(kSceneLabels[static_cast<std::size_t>(label)]));
}

std::filesystem::path ManifestWriter::write(const std::string& manifest_name) const {
  std::string text;
  for (const auto& r : rows_) text += r + "\n";
  const auto path = dir_ / manifest_name;
  write_file_atomic(path, text);
  return path;
}

std::filesystem::path write_tone_noise_set(const std::filesystem::path& dir,
                                           const std::string& name, std::size_t count,
                                           std::uint64_t seed) {
  constexpr std::size_t kSamples = 10 * kSyntheticRate;
  Rng rng(seed);
  ManifestWriter w(dir);
  for (std::size_t i = 0; i < count; ++i) {
    const bool tone = i % 2 == 0;
    const double lo = rng.uniform(200.0, 4000.0);
    const Band band{lo, lo + rng.uniform(500.0, 2000.0)};
    std::vector<double> x = band_cue(tone, band, kSamples, rng);
    for (double& v : x) v *= 0.5;
    w.add(name + "-" + std::to_string(i), tone ? kToneLabel : kNoiseLabel, x);
  }
  return w.write(name + ".tsv");
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0;; ++attempt) {
    path_ = base / ("ascnet-" + tag + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    if (std::filesystem::create_directories(path_)) break;
    require(attempt < 100, ErrorCode::kIo, "cannot create temp dir");
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace ascnet::testing
