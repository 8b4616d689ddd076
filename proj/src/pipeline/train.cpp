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

#include <fmt/format.h>

#include "common/error.hpp"
#include "pipeline/pipeline.hpp"

namespace ascnet::pipeline {

namespace {

constexpr std::size_t kInferenceSegments = 256;

}  // namespace

std::string TrainHistory::to_csv() const {
  std::string out = "epoch,train_loss,train_seg_acc,val_macro_acc\n";
  for (const EpochRecord& r : epochs) {
    out += fmt::format("{},{},{},{}\n", r.epoch, r.train_loss, r.train_seg_acc, r.val_macro_acc);
  }
  return out;
}

std::vector<eval::Distribution> predict_dataset(const models::Model& model,
                                                const SegmentDataset& data) {
  const std::size_t per = data.segments_per_clip();
  require(per == static_cast<std::size_t>(model.variant().n_segments) &&
              data.variant() == model.spec().variant,
          ErrorCode::kShape, "predict: features do not match the model variant");
  const std::size_t group = std::max<std::size_t>(1, kInferenceSegments / per);
  std::vector<eval::Distribution> out;
  out.reserve(data.clip_count());
  for (std::size_t first = 0; first < data.clip_count(); first += group) {
    const std::size_t count = std::min(group, data.clip_count() - first);
    const nn::Tensor probs = model.predict(data.clip_batch(first, count, model.spec().input_shape));
    for (std::size_t c = 0; c < count; ++c) {
      nn::Tensor rows({per, kNumClasses});
      std::copy(probs.data() + c * per * kNumClasses, probs.data() + (c + 1) * per * kNumClasses,
                rows.data());
      out.push_back(eval::fuse(rows));
    }
  }
  return out;
}

StepResult train_step(models::Model& model, const nn::Tensor& batch, std::span<const int> labels,
                      Rng& dropout, const nn::AdadeltaConfig& optimizer) {
  nn::Tape tape;
  model.forward_train(batch, dropout, tape);
  nn::LossGradients lg = model.backward(tape, labels);
  if (!std::isfinite(lg.loss)) fail(ErrorCode::kOptimizer, "non-finite training loss");
  const double scale = 1.0 / static_cast<double>(labels.size());
  for (nn::Tensor& g : lg.grads) {
    for (double& v : g.values()) v *= scale;
  }
  nn::adadelta_step(model.params(), lg.grads, optimizer);
  return {lg.loss, lg.correct};
}

TrainResult train(models::Model model, const SegmentDataset& train_set,
                  const SegmentDataset& validation, const TrainOptions& options) {
  require(options.epochs >= 1, ErrorCode::kArgument, "train: epochs must be >= 1");
  require(train_set.size() > 0, ErrorCode::kArgument, "train: empty training set");
  require(validation.clip_count() > 0, ErrorCode::kArgument, "train: empty validation set");
  Rng root(options.seed);
  Rng shuffle = root.fork();
  Rng dropout = root.fork();
  const nn::Shape& input = model.spec().input_shape;

  TrainHistory history;
  std::optional<models::Model> best;
  double best_acc = -1.0;
  std::vector<int> labels;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const auto batches = make_batches(train_set.size(), options.batch_size, shuffle);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const auto& idx = batches[b];
      labels.clear();
      for (std::size_t i : idx) labels.push_back(train_set.labels()[i]);
      StepResult step;
      try {
        step = train_step(model, train_set.batch(idx, input), labels, dropout, options.optimizer);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kOptimizer) throw;
        fail(ErrorCode::kOptimizer, fmt::format("epoch {} batch {}: {}", epoch, b, e.what()));
      }
      loss_sum += step.loss;
      correct += step.correct;
    }
    const auto preds = predict_dataset(model, validation);
    const double acc = eval::macro_accuracy(eval::confusion(validation.clip_labels(), preds), true);
    const double n = static_cast<double>(train_set.size());
    const EpochRecord rec{epoch, loss_sum / n, static_cast<double>(correct) / n, acc};
    history.epochs.push_back(rec);
    if (acc > best_acc) {
      best_acc = acc;
      best = model;
      history.best_epoch = epoch;
    }
    if (options.on_epoch) options.on_epoch(rec);
  }
  return {std::move(*best), std::move(history)};
}

}  // namespace ascnet::pipeline
