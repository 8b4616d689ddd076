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

// Acceptance suite: one pass/fail line per criterion. Run every criterion,
// or pick some with --criterion N (repeatable).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "audio/audio_clip.hpp"
#include "eval/eval.hpp"
#include "features/features.hpp"
#include "models/model.hpp"
#include "nn/adadelta.hpp"
#include "nn/conv.hpp"
#include "nn/layer_spec.hpp"
#include "pipeline/pipeline.hpp"
#include "support/results_table.hpp"
#include "support/test_support.hpp"

namespace ascnet::acceptance {
namespace {

namespace fs = std::filesystem;
using eval::Distribution;
using features::VariantId;
using models::ModelId;
using nn::Shape;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  // Records a named check; returns it for chaining.
  bool check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "ok   " : "FAIL ") + what);
    return ok;
  }
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;  // 0 = no runtime limit
  std::function<Outcome()> run;
};

// ---- 1 ----

Outcome metric_oracle() {
  Outcome out;
  for (const auto& col : testing::kPublishedColumns) {
    const double macro = eval::macro_accuracy(col.class_acc);
    out.check(std::abs(macro - col.average) <= 0.05,
              fmt::format("{:<10} computed {:.4f}, published {:.1f}, |diff| {:.4f} (tolerance 0.05)",
                          col.name, macro, col.average, std::abs(macro - col.average)));
  }
  return out;
}

// ---- 2 ----

Outcome feature_shapes() {
  Outcome out;
  Rng rng(2);
  struct Input {
    std::string name;
    audio::AudioClip clip;
  };
  std::vector<Input> inputs;
  for (int rate : {16000, 44100, 48000}) {
    const std::size_t n = static_cast<std::size_t>(rate) * 10;
    auto x = testing::sine(440.0, rate, n, 0.5);
    const auto noise = testing::band_noise(100.0, 7000.0, rate, n, rng);
    for (std::size_t i = 0; i < n; ++i) x[i] += 0.3 * noise[i];
    audio::AudioClip clip = audio::AudioClip::mono(x, rate);
    if (rate == 44100) clip.channels.push_back(testing::sine(1000.0, rate, n, 0.4));
    inputs.push_back({fmt::format("{} Hz {}", rate, rate == 44100 ? "stereo" : "mono"), clip});
  }
  for (const auto& in : inputs) {
    for (VariantId v : {VariantId::kV1, VariantId::kV2}) {
      const bool v1 = v == VariantId::kV1;
      const auto spec = features::extract(in.clip, v);
      const auto segs = features::segment(spec);
      const std::size_t want_rows = v1 ? 999 : 431, want_segs = v1 ? 9 : 10,
                        want_frames = v1 ? 111 : 43;
      bool seg_shapes = segs.segments.size() == want_segs;
      for (const auto& s : segs.segments) {
        seg_shapes = seg_shapes && static_cast<std::size_t>(s.rows()) == want_frames && s.cols() == 64;
      }
      out.check(static_cast<std::size_t>(spec.data.rows()) == want_rows && spec.data.cols() == 64 &&
                    seg_shapes && spec.data.allFinite(),
                fmt::format("{} {}: {}x{} -> {} x ({}x{})", in.name, v1 ? "v1" : "v2",
                            spec.data.rows(), spec.data.cols(), segs.segments.size(),
                            segs.segments.empty() ? 0 : segs.segments[0].rows(),
                            segs.segments.empty() ? 0 : segs.segments[0].cols()));
    }
  }
  return out;
}

// ---- 3 ----

Outcome gradient_suite() {
  Outcome out;
  struct Case {
    std::string name;
    std::vector<nn::LayerSpec> specs;
    Shape input;
  };
  const std::vector<Case> layers = {
      {"conv2d 3x3", {nn::conv2d_spec(3, 3, 3)}, {5, 4, 2}},
      {"conv2d 5x5", {nn::conv2d_spec(2, 5, 5)}, {6, 5, 2}},
      {"conv2d 1x1", {nn::conv2d_spec(4, 1, 1)}, {3, 3, 3}},
      {"conv1d", {nn::conv1d_spec(3, 5)}, {9, 3}},
      {"batchnorm", {nn::batchnorm_spec()}, {3, 2, 3}},
      {"relu", {nn::relu_spec()}, {4, 3}},
      {"maxpool2d", {nn::maxpool2d_spec(3, 2)}, {7, 5, 2}},
      {"maxpool1d", {nn::maxpool1d_spec(3)}, {10, 2}},
      {"global avg pool", {nn::global_avg_pool_spec()}, {3, 4, 2}},
      {"flatten", {nn::flatten_spec()}, {2, 3, 2}},
      {"dense", {nn::flatten_spec(), nn::dense_spec(5)}, {2, 3}},
      {"dropout", {nn::dropout_spec(0.5)}, {6, 3}},
      {"softmax", {nn::softmax_spec()}, {7}},
      {"fire (squeeze, expand, concat)", {nn::fire_spec(2, 3)}, {4, 4, 3}},
  };
  for (const Case& c : layers) {
    const auto g = testing::check_layer_gradients(c.specs, c.input, 42, 3);
    out.check(g.checked > 0 && g.max_error < 1e-4,
              fmt::format("layer {:<31} max rel err {:.2e} ({} scalars)", c.name, g.max_error, g.checked));
  }
  {
    const std::vector<nn::LayerSpec> head = {nn::flatten_spec(), nn::dense_spec(15), nn::softmax_spec()};
    const auto g = testing::check_loss_gradients(head, {4, 3}, 43, 3);
    out.check(g.max_error < 1e-4,
              fmt::format("softmax cross-entropy head       max rel err {:.2e}", g.max_error));
  }
  struct Reduced {
    ModelId id;
    models::BuildOptions options;
  };
  const std::vector<Reduced> archs = {
      {ModelId::kCnnV1, {8, Shape{9, 8, 1}}},     {ModelId::kCnnV2_1, {8, Shape{18, 8, 1}}},
      {ModelId::kCnnV2_2, {8, Shape{18, 8, 1}}},  {ModelId::kCnnV2_3, {8, Shape{18, 8, 1}}},
      {ModelId::kSqueezeNet, {16, Shape{16, 16, 1}}}, {ModelId::kCnn1D, {16, Shape{27, 6}}}};
  for (const auto& a : archs) {
    const auto spec = models::build_model(a.id, a.options);
    const auto g = testing::check_loss_gradients(spec.layers, spec.input_shape, 99, 3);
    out.check(g.max_error < 1e-4,
              fmt::format("model {:<10} width/{:<2} input {:<8} max rel err {:.2e} ({} scalars)",
                          models::model_name(a.id), a.options.width_divisor,
                          nn::shape_string(spec.input_shape), g.max_error, g.checked));
  }
  return out;
}

// ---- 4 ----

Outcome conv_oracle() {
  Outcome out;
  Rng rng(4);
  double worst2 = 0.0, worst1 = 0.0;
  for (int i = 0; i < 10; ++i) {
    const std::size_t h = 1 + rng.below(9), w = 1 + rng.below(9), cin = 1 + rng.below(4),
                      cout = 1 + rng.below(5);
    const std::size_t kh = 1 + 2 * rng.below(3), kw = 1 + 2 * rng.below(3);
    const auto x = testing::random_tensor({h, w, cin}, rng);
    const auto k = testing::random_tensor({cout, kh, kw, cin}, rng);
    const auto b = testing::random_tensor({cout}, rng);
    const auto fast = nn::conv2d(x, k, b), slow = testing::naive_conv2d(x, k, b);
    double err = fast.shape() == slow.shape() ? 0.0 : INFINITY;
    for (std::size_t j = 0; std::isfinite(err) && j < fast.size(); ++j) {
      err = std::max(err, std::abs(fast[j] - slow[j]));
    }
    worst2 = std::max(worst2, err);
  }
  for (int i = 0; i < 10; ++i) {
    const std::size_t t = 1 + rng.below(20), cin = 1 + rng.below(5), cout = 1 + rng.below(5);
    const std::size_t k = 1 + 2 * rng.below(4);
    const auto x = testing::random_tensor({t, cin}, rng);
    const auto kern = testing::random_tensor({cout, k, cin}, rng);
    const auto b = testing::random_tensor({cout}, rng);
    const auto fast = nn::conv1d(x, kern, b), slow = testing::naive_conv1d(x, kern, b);
    double err = fast.shape() == slow.shape() ? 0.0 : INFINITY;
    for (std::size_t j = 0; std::isfinite(err) && j < fast.size(); ++j) {
      err = std::max(err, std::abs(fast[j] - slow[j]));
    }
    worst1 = std::max(worst1, err);
  }
  out.check(worst2 < 1e-12, fmt::format("conv2d, 10 random cases: max abs diff {:.2e}", worst2));
  out.check(worst1 < 1e-12, fmt::format("conv1d, 10 random cases: max abs diff {:.2e}", worst1));
  return out;
}

// ---- 5 ----

bool trace_contains(const std::vector<Shape>& trace, const std::vector<Shape>& wanted) {
  std::size_t i = 0;
  for (const Shape& s : trace) {
    if (i < wanted.size() && s == wanted[i]) ++i;
  }
  return i == wanted.size();
}

Outcome shape_trace() {
  Outcome out;
  Rng rng(5);
  for (ModelId id : models::kAllModels) {
    const models::Model m(models::build_model(id), 7);
    Shape in{2};
    in.insert(in.end(), m.spec().input_shape.begin(), m.spec().input_shape.end());
    const nn::Tensor p = m.predict(testing::random_tensor(in, rng, -20.0, 0.0));
    bool simplex = p.shape() == Shape{2, 15};
    for (std::size_t r = 0; simplex && r < 2; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < 15; ++c) {
        simplex = simplex && p[r * 15 + c] >= 0.0;
        sum += p[r * 15 + c];
      }
      simplex = simplex && std::abs(sum - 1.0) < 1e-9;
    }
    const auto trace = models::shape_trace(m.spec());
    out.check(simplex && trace.back() == Shape{15},
              fmt::format("{:<10} {} -> {} (probabilities on the simplex)", models::model_name(id),
                          nn::shape_string(m.spec().input_shape), nn::shape_string(trace.back())));
  }
  const auto lenet = models::shape_trace(models::build_model(ModelId::kCnnV2_1));
  out.check(trace_contains(lenet, {{111, 64, 8}, {37, 32, 8}, {12, 16, 32}, {6144}, {512}, {15}}),
            "cnn-v2-1 trace 111x64x8 -> 37x32x8 -> 12x16x32 -> 6144 -> 512 -> 15");
  const auto squeeze = models::shape_trace(models::build_model(ModelId::kSqueezeNet));
  Shape last_map;
  for (const auto& s : squeeze) {
    if (s.size() == 3) last_map = s;
  }
  out.check(last_map == Shape{13, 8, 15},
            fmt::format("squeezenet last feature map {} (want 13x8x15)", nn::shape_string(last_map)));
  return out;
}

// ---- 6 ----

Outcome adadelta_check() {
  Outcome out;
  nn::ParamStore params;
  params.add("w", nn::Tensor({1}, 0.0), true);
  nn::adadelta_step(params, {nn::Tensor({1}, 1.0)}, {1.0, 0.95, 1e-6});
  const double step = params[0].value[0];
  out.check(std::abs(step - -0.004472) <= 1e-6,
            fmt::format("first update {:.7f} (want -0.004472 within 1e-6)", step));
  return out;
}

// ---- shared synthetic training data ----

pipeline::SegmentDataset load_set(const fs::path& manifest) {
  const pipeline::FeatureStore store("", VariantId::kV1);
  return pipeline::build_dataset(pipeline::load_manifest(manifest), store, 0);
}

// Eval-mode segment accuracy over a whole dataset.
double segment_accuracy(const models::Model& m, const pipeline::SegmentDataset& data) {
  std::size_t correct = 0;
  std::vector<std::size_t> idx;
  for (std::size_t first = 0; first < data.size(); first += 256) {
    idx.clear();
    for (std::size_t i = first; i < std::min(data.size(), first + 256); ++i) idx.push_back(i);
    const nn::Tensor p = m.predict(data.batch(idx, m.spec().input_shape));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      Distribution d;
      std::copy(p.data() + r * kNumClasses, p.data() + (r + 1) * kNumClasses, d.begin());
      correct += eval::argmax(d) == data.labels()[idx[r]];
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double fused_macro(const models::Model& m, const pipeline::SegmentDataset& data) {
  const auto preds = pipeline::predict_dataset(m, data);
  return eval::macro_accuracy(eval::confusion(data.clip_labels(), preds), true);
}

// ---- 7 ----

constexpr int kSmokeEpochs = 6;
constexpr std::size_t kSmokeBatch = 8;

Outcome learning_smoke() {
  Outcome out;
  testing::TempDir dir("acceptance-smoke");
  const auto train_set = load_set(testing::write_tone_noise_set(dir.path(), "train", 80, 71));
  const auto val_set = load_set(testing::write_tone_noise_set(dir.path(), "val", 20, 72));

  auto run = [&] {
    pipeline::TrainOptions o;
    o.batch_size = kSmokeBatch;
    o.epochs = kSmokeEpochs;
    o.seed = 7;
    models::Model m(models::build_model(ModelId::kCnnV2_1), 17);
    return pipeline::train(std::move(m), train_set, val_set, o);
  };
  const auto a = run();
  const double seg = segment_accuracy(a.best, train_set);
  const double val = fused_macro(a.best, val_set);
  std::string curve;
  for (const auto& e : a.history.epochs) {
    curve += fmt::format(" {:.0f}/{:.0f}", 100 * e.train_seg_acc, 100 * e.val_macro_acc);
  }
  out.notes.push_back(fmt::format("     cnn-v2-1, 80 train / 20 val clips, batch {}, {} epochs; "
                                  "train seg / val macro % per epoch:{}",
                                  kSmokeBatch, kSmokeEpochs, curve));
  out.check(seg >= 0.95, fmt::format("best snapshot (epoch {}) training segment accuracy {:.1f}% "
                                     "(want >= 95%)", a.history.best_epoch + 1, 100 * seg));
  out.check(val >= 0.90, fmt::format("best snapshot fused validation macro accuracy {:.1f}% "
                                     "(want >= 90%)", 100 * val));
  const auto b = run();
  out.check(models::encode_checkpoint(a.best) == models::encode_checkpoint(b.best) &&
                a.history.to_csv() == b.history.to_csv(),
            "second run with the same seed: bit-identical checkpoint and history");
  return out;
}

// ---- 8 ----

Distribution random_simplex(Rng& rng, double lo = 0.0) {
  Distribution d;
  double sum = 0.0;
  for (double& v : d) sum += v = rng.uniform(lo, 1.0);
  for (double& v : d) v /= sum;
  return d;
}

Distribution one_hot(int c, double confidence) {
  Distribution d;
  d.fill((1.0 - confidence) / (kNumClasses - 1));
  d[static_cast<std::size_t>(c)] = confidence;
  return d;
}

eval::Candidate candidate(std::string name, const std::vector<int>& argmaxes, double acc) {
  eval::Candidate c{std::move(name), {}, acc};
  for (int a : argmaxes) c.predictions.push_back(one_hot(a, 0.9));
  return c;
}

Outcome fusion_properties() {
  Outcome out;
  Rng rng(8);
  double worst_sum = 0.0, worst_idem = 0.0, worst_perm = 0.0;
  bool nonneg = true, argmax_stable = true;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    std::vector<Distribution> ds(n);
    nn::Tensor rows({n, kNumClasses});
    for (std::size_t s = 0; s < n; ++s) {
      ds[s] = random_simplex(rng, trial % 2 ? 0.0 : 0.01);
      std::copy(ds[s].begin(), ds[s].end(), rows.data() + s * kNumClasses);
    }
    for (const Distribution& d : {eval::fuse(rows), eval::ensemble_geomean(ds)}) {
      double sum = 0.0;
      for (double v : d) {
        sum += v;
        nonneg = nonneg && v >= 0.0;
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
    const std::vector<Distribution> same(3, ds[0]);
    const Distribution idem = eval::ensemble_geomean(same);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      worst_idem = std::max(worst_idem, std::abs(idem[c] - ds[0][c]));
    }
    const Distribution ref = eval::ensemble_geomean(ds);
    std::vector<Distribution> shuffled = ds;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    const Distribution perm = eval::ensemble_geomean(shuffled);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      worst_perm = std::max(worst_perm, std::abs(perm[c] - ref[c]));
    }
    std::vector<Distribution> floored = ds;
    for (auto& d : floored) {
      for (double& v : d) v = std::max(v, 1e-6);
    }
    const double power = rng.uniform(0.2, 5.0);
    std::vector<Distribution> powered = floored;
    for (auto& d : powered) {
      double sum = 0.0;
      for (double& v : d) sum += v = std::pow(v, power);
      for (double& v : d) v /= sum;
    }
    argmax_stable = argmax_stable && eval::argmax(eval::ensemble_geomean(floored)) ==
                                         eval::argmax(eval::ensemble_geomean(powered));
  }
  out.check(worst_sum <= 1e-9 && nonneg,
            fmt::format("fusion and geometric mean stay on the simplex: max |sum - 1| {:.1e}", worst_sum));
  out.check(worst_idem <= 1e-12, fmt::format("geometric mean idempotence: max deviation {:.1e}", worst_idem));
  out.check(worst_perm <= 1e-12, fmt::format("geometric mean permutation invariance: max deviation {:.1e}", worst_perm));
  out.check(argmax_stable, "argmax unchanged under a common positive power (500 trials)");

  const std::vector<Distribution> pair = {
      [] { Distribution d{}; d[0] = 0.5; d[1] = 0.5; return d; }(),
      [] { Distribution d{}; d[0] = 0.18; d[1] = 0.82; return d; }()};
  const Distribution g = eval::ensemble_geomean(pair);
  out.check(std::abs(g[0] - 0.319) < 1e-3 && std::abs(g[1] - 0.681) < 1e-3,
            fmt::format("two-class geometric mean [{:.4f}, {:.4f}] (want [0.319, 0.681])", g[0], g[1]));

  const std::vector<eval::Candidate> forced = {
      candidate("low1", {0, 1, 2, 3}, 0.60), candidate("hi1", {0, 1, 2, 3}, 0.90),
      candidate("hi2", {0, 1, 2, 4}, 0.85),  candidate("low2", {4, 1, 2, 3}, 0.70),
      candidate("hi3", {0, 1, 5, 3}, 0.80)};
  auto chosen = eval::select_ensemble(forced, 0.75, 3).members;
  std::sort(chosen.begin(), chosen.end());
  out.check(chosen == std::vector<std::size_t>{1, 2, 4},
            "forced choice: the three candidates above baseline are selected");

  const std::vector<eval::Candidate> diverse = {
      candidate("top", {0, 1, 2, 3, 4, 5}, 0.90), candidate("twin", {0, 1, 2, 3, 4, 5}, 0.88),
      candidate("diverse", {0, 1, 7, 8, 9, 5}, 0.80)};
  double best = -1.0;
  std::vector<std::size_t> brute;
  for (std::size_t i = 0; i < diverse.size(); ++i) {
    for (std::size_t j = i + 1; j < diverse.size(); ++j) {
      const double d = eval::disagreement(diverse[i].predictions, diverse[j].predictions);
      if (d > best) best = d, brute = {i, j};
    }
  }
  auto picked = eval::select_ensemble(diverse, 0.5, 2).members;
  std::sort(picked.begin(), picked.end());
  out.check(picked == brute && picked == std::vector<std::size_t>{0, 2},
            "identical twins plus one diverse model, k=2: top + diverse, matching brute force");
  bool rejected = false;
  try {
    eval::select_ensemble(diverse, 0.95, 3);
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::kSelection;
  }
  out.check(rejected, "baseline above every candidate: selection error");
  return out;
}

// ---- 9 ----

Outcome persistence() {
  Outcome out;
  testing::TempDir dir("acceptance-persist");
  Rng rng(9);
  const auto x = testing::band_noise(200.0, 5000.0, 22050, 22050 * 10, rng);
  for (VariantId v : {VariantId::kV1, VariantId::kV2}) {
    const auto spec = features::extract(audio::AudioClip::mono(x, 22050), v);
    const std::string bytes = features::encode_lmsf(spec);
    const fs::path path = dir / fmt::format("clip-{}.lmsf", features::variant(v).name());
    features::save_lmsf(path, spec);
    const auto back = features::load_lmsf(path);
    bool exact = back.variant == v && back.data.rows() == spec.data.rows() &&
                 back.data.cols() == spec.data.cols();
    for (Eigen::Index i = 0; exact && i < spec.data.size(); ++i) {
      exact = back.data.data()[i] == static_cast<double>(static_cast<float>(spec.data.data()[i]));
    }
    out.check(exact && features::encode_lmsf(back) == bytes,
              fmt::format("LMSF {}: file round trip reproduces the 32-bit payload bit for bit",
                          features::variant(v).name()));
  }

  for (ModelId id : models::kAllModels) {
    models::Model m(models::build_model(id), 100 + static_cast<int>(id));
    const fs::path path = dir / fmt::format("{}.spck", models::model_name(id));
    models::save_checkpoint(path, m);
    const models::Model back = models::load_checkpoint(path);
    m.params().round_to_float32();
    out.check(back.spec() == m.spec() && back.params() == m.params() &&
                  models::encode_checkpoint(back) == models::encode_checkpoint(m),
              fmt::format("SPCK {}: spec, parameters, running statistics and accumulators round-trip",
                          models::model_name(id)));
  }

  // Resume: a checkpointed model and its in-memory source take the same step.
  models::Model live(models::build_model(ModelId::kCnnV2_1, {4, {}}), 5);
  const Shape batch_shape{6, 111, 64, 1};
  const std::vector<int> labels = {0, 1, 2, 0, 1, 2};
  Rng dropout(11);
  for (int step = 0; step < 3; ++step) {
    pipeline::train_step(live, testing::random_tensor(batch_shape, rng, -20, 0), labels, dropout, {});
  }
  live.params().round_to_float32();
  const std::string saved = models::encode_checkpoint(live);
  models::Model resumed = models::decode_checkpoint(saved);
  const nn::Tensor next = testing::random_tensor(batch_shape, rng, -20, 0);
  Rng d1(12), d2(12);
  const auto s1 = pipeline::train_step(live, next, labels, d1, {});
  const auto s2 = pipeline::train_step(resumed, next, labels, d2, {});
  out.check(s1.loss == s2.loss && live.params() == resumed.params() &&
                models::encode_checkpoint(live) == models::encode_checkpoint(resumed),
            "resumed training step is bit-identical to continuing in memory");
  return out;
}

// ---- 10 ----

// Two-class clips carrying a tone (beach) or noise (bus) cue in each of
// three bands. A model trained on set m only sees a label-consistent cue in
// band m; the other bands are random. Test clips show the true cue in every
// band except where an independent per-band flip shows the other class, so
// the three readers err on independent clips.
constexpr std::array<testing::Band, 3> kBands = {{{300, 700}, {1500, 2500}, {4000, 6500}}};
constexpr double kFlipRate = 0.2;

fs::path write_band_set(const fs::path& dir, const std::string& name, std::size_t count,
                        std::uint64_t seed, int reader) {
  constexpr std::size_t kSamples = 10 * testing::kSyntheticRate;
  Rng rng(seed);
  testing::ManifestWriter w(dir);
  for (std::size_t i = 0; i < count; ++i) {
    const int label = i % 2 == 0 ? testing::kToneLabel : testing::kNoiseLabel;
    std::vector<double> x(kSamples, 0.0);
    for (std::size_t b = 0; b < kBands.size(); ++b) {
      int shown = label;
      if (reader >= 0 && static_cast<int>(b) != reader) {
        shown = rng.below(2) ? testing::kToneLabel : testing::kNoiseLabel;
      } else if (reader < 0 && rng.uniform() < kFlipRate) {
        shown = label == testing::kToneLabel ? testing::kNoiseLabel : testing::kToneLabel;
      }
      const auto cue = testing::band_cue(shown == testing::kToneLabel, kBands[b], kSamples, rng);
      for (std::size_t j = 0; j < kSamples; ++j) x[j] += 0.3 * cue[j];
    }
    w.add(fmt::format("{}-{}", name, i), label, x);
  }
  return w.write(name + ".tsv");
}

Outcome ensemble_improvement() {
  Outcome out;
  testing::TempDir dir("acceptance-ensemble");
  const auto selection = load_set(write_band_set(dir.path(), "select", 40, 1001, -1));
  const auto test = load_set(write_band_set(dir.path(), "test", 100, 1002, -1));

  std::vector<std::vector<Distribution>> member_preds;
  std::vector<double> member_acc;
  for (int m = 0; m < 3; ++m) {
    const auto train_set =
        load_set(write_band_set(dir.path(), fmt::format("train{}", m), 40, 2000 + m, m));
    pipeline::TrainOptions o;
    o.batch_size = 8;
    o.epochs = 4;
    o.seed = 300 + m;
    models::Model model(models::build_model(ModelId::kCnnV2_1, {4, {}}), 400 + m);
    const auto result = pipeline::train(std::move(model), train_set, selection, o);
    member_preds.push_back(pipeline::predict_dataset(result.best, test));
    member_acc.push_back(
        eval::macro_accuracy(eval::confusion(test.clip_labels(), member_preds.back()), true));
    out.check(member_acc.back() <= 0.90,
              fmt::format("member {} (band {:.0f}-{:.0f} Hz reader): test macro accuracy {:.1f}% "
                          "(want <= 90%)", m, kBands[m].lo_hz, kBands[m].hi_hz, 100 * member_acc.back()));
  }
  std::vector<Distribution> combined;
  for (std::size_t c = 0; c < test.clip_count(); ++c) {
    const std::vector<Distribution> ds = {member_preds[0][c], member_preds[1][c], member_preds[2][c]};
    combined.push_back(eval::ensemble_geomean(ds));
  }
  const double ens = eval::macro_accuracy(eval::confusion(test.clip_labels(), combined), true);
  const double best = *std::max_element(member_acc.begin(), member_acc.end());
  const double mean = (member_acc[0] + member_acc[1] + member_acc[2]) / 3.0;
  double disagree = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) disagree += eval::disagreement(member_preds[i], member_preds[j]) / 3.0;
  }
  out.notes.push_back(fmt::format("     mean pairwise disagreement {:.2f}", disagree));
  out.check(ens >= best - 0.005, fmt::format("ensemble {:.1f}% >= best member {:.1f}% - 0.5",
                                             100 * ens, 100 * best));
  out.check(ens > mean, fmt::format("ensemble {:.1f}% > mean member {:.1f}%", 100 * ens, 100 * mean));
  return out;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "metric oracle (published average row)", 1.0, metric_oracle},
      {2, "feature-shape contract", 5.0, feature_shapes},
      {3, "gradient suite", 120.0, gradient_suite},
      {4, "convolution oracle", 10.0, conv_oracle},
      {5, "shape trace", 5.0, shape_trace},
      {6, "adadelta first step", 0.0, adadelta_check},
      {7, "end-to-end learning smoke test", 600.0, learning_smoke},
      {8, "fusion and ensemble properties", 10.0, fusion_properties},
      {9, "persistence round trips", 10.0, persistence},
      {10, "ensemble improvement", 0.0, ensemble_improvement},
  };
  return all;
}

bool run(const Criterion& c, bool verbose) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.limit_s > 0.0) {
    o.check(secs < c.limit_s, fmt::format("runtime {:.2f} s (limit {:.0f} s)", secs, c.limit_s));
  }
  const bool pass = o.pass;
  std::printf("criterion %2d: %s  %s (%.2f s)\n", c.id, pass ? "PASS" : "FAIL", c.title, secs);
  if (verbose || !pass) {
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
  }
  std::fflush(stdout);
  return pass;
}

}  // namespace
}  // namespace ascnet::acceptance

int main(int argc, char** argv) {
  using namespace ascnet::acceptance;
  CLI::App app{"ascnet acceptance suite"};
  std::vector<int> selected;
  bool verbose = false;
  app.add_option("--criterion", selected, "Criterion number (repeatable; default all)")
      ->check(CLI::Range(1, 10));
  app.add_flag("-v,--verbose", verbose, "Print every check, not only failing ones");
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::warn);

  bool all_pass = true;
  std::size_t failed = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    ++ran;
    if (!run(c, verbose)) {
      all_pass = false;
      ++failed;
    }
  }
  std::printf("%zu of %zu criteria passed\n", ran - failed, ran);
  return all_pass ? 0 : 1;
}
