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

#include <spdlog/spdlog.h>

#include "common/error.hpp"
#include "common/files.hpp"
#include "pipeline/pipeline.hpp"

namespace ascnet::pipeline {

RunSummary run_training(const TrainConfig& config) {
  const models::ModelId id = models::parse_model_id(config.model);
  const features::VariantId variant = models::model_variant(id);
  if (config.variant && *config.variant != variant) {
    fail(ErrorCode::kUsage, "model '" + config.model + "' is trained on " +
                                std::string(features::variant(variant).name()) +
                                " features, config asks for " +
                                std::string(features::variant(*config.variant).name()));
  }
  const Manifest train_manifest = load_manifest(config.train_manifest);
  const Manifest val_manifest = load_manifest(config.val_manifest);
  check_disjoint(train_manifest, val_manifest);

  const FeatureStore store(config.cache_dir, variant);
  const unsigned workers = resolve_workers(config.workers);
  spdlog::info("loading {} training and {} validation clips ({} features)",
               train_manifest.entries.size(), val_manifest.entries.size(),
               features::variant(variant).name());
  const SegmentDataset train_set = build_dataset(train_manifest, store, workers);
  const SegmentDataset val_set = build_dataset(val_manifest, store, workers);

  Rng root(config.seed);
  const std::uint64_t init_seed = root.next_u64();
  models::Model model(models::build_model(id, {config.width_divisor, {}}), init_seed);
  spdlog::info("{}: {} trainable parameters", model.spec().name,
               models::param_count(model.spec()));

  TrainOptions options;
  options.batch_size = config.batch_size;
  options.epochs = config.epochs;
  options.seed = root.next_u64();
  options.on_epoch = [&](const EpochRecord& r) {
    spdlog::info("epoch {}/{}: loss {:.4f}, train segment acc {:.1f}%, val macro acc {:.1f}%",
                 r.epoch + 1, config.epochs, r.train_loss, 100.0 * r.train_seg_acc,
                 100.0 * r.val_macro_acc);
  };
  TrainResult result = train(std::move(model), train_set, val_set, options);

  const std::string run = config.run_name.empty() ? config.model : config.run_name;
  RunSummary summary;
  summary.checkpoint = config.checkpoint_dir / (run + ".spck");
  summary.history = config.checkpoint_dir / (run + ".history.csv");
  models::save_checkpoint(summary.checkpoint, result.best);
  write_file_atomic(summary.history, result.history.to_csv());
  summary.record = std::move(result.history);
  return summary;
}

Evaluation evaluate_checkpoint(const std::filesystem::path& checkpoint,
                               const std::filesystem::path& manifest,
                               const std::filesystem::path& cache_dir, unsigned workers) {
  const models::Model model = models::load_checkpoint(checkpoint);
  const Manifest m = load_manifest(manifest);
  require(!m.entries.empty(), ErrorCode::kArgument, "evaluate: manifest has no clips");
  const FeatureStore store(cache_dir, model.spec().variant);
  const SegmentDataset data = build_dataset(m, store, resolve_workers(workers));
  const auto preds = predict_dataset(model, data);

  Evaluation ev;
  ev.dump.name = checkpoint.stem().string();
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ev.dump.rows.push_back({data.clip_ids()[i], data.clip_labels()[i], preds[i]});
  }
  ev.cm = eval::confusion(data.clip_labels(), preds);
  return ev;
}

}  // namespace ascnet::pipeline
