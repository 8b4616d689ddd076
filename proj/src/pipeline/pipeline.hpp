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

#ifndef ASCNET_PIPELINE_PIPELINE_HPP_
#define ASCNET_PIPELINE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "common/rng.hpp"
#include "eval/eval.hpp"
#include "features/features.hpp"
#include "models/model.hpp"
#include "nn/adadelta.hpp"

namespace ascnet::pipeline {

// ---- manifests ----

struct ManifestEntry {
  std::string clip_id;          // path as written in the manifest
  std::filesystem::path path;   // resolved against the manifest directory
  int label = 0;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
};

// Tab-separated `relative/path<TAB>scene_label` rows; further columns are
// ignored, blank lines and `#` comments skipped. Unknown labels and
// duplicate paths are kParse errors naming the row. An empty manifest logs
// a warning.
Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

// Throws kArgument naming the first clip present in both manifests.
void check_disjoint(const Manifest& train, const Manifest& validation);

// ---- batching ----

// Shuffled partition of [0, n) into batches of `batch_size`, the last one
// possibly short. Throws kArgument when n == 0 or batch_size == 0.
std::vector<std::vector<std::size_t>> make_batches(std::size_t n, std::size_t batch_size,
                                                   Rng& rng);

// ---- configuration ----

struct TrainConfig {
  std::string model;
  std::optional<features::VariantId> variant;  // must match the model binding if set
  std::size_t batch_size = 256;
  int epochs = 200;
  std::uint64_t seed = 0;
  std::filesystem::path train_manifest;
  std::filesystem::path val_manifest;
  std::filesystem::path cache_dir;
  std::filesystem::path checkpoint_dir;
  std::string run_name;  // defaults to the model name
  unsigned workers = 0;  // 0 = hardware concurrency
  int width_divisor = 1;
};

// key=value lines (`#` comments). Relative paths resolve against base_dir.
// Unknown keys, malformed values and missing required keys (model,
// train_manifest, val_manifest, checkpoint_dir) are kParse errors.
TrainConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
TrainConfig load_config(const std::filesystem::path& path);

// ---- feature cache ----

// Per-clip LMSF files named by a hash of the absolute clip path and the
// variant. An empty cache directory disables caching.
class FeatureStore {
 public:
  FeatureStore(std::filesystem::path cache_dir, features::VariantId variant);

  features::VariantId variant() const { return variant_; }
  const std::filesystem::path& cache_dir() const { return cache_dir_; }
  std::filesystem::path cache_path(const std::filesystem::path& clip) const;
  // Cache file exists and is not older than the clip (a cache file without
  // its source clip counts as current).
  bool up_to_date(const std::filesystem::path& clip) const;
  // Reads the cached features or extracts (and caches) them. `extracted`
  // reports whether extraction ran.
  features::LogMelSpectrogram load(const std::filesystem::path& clip,
                                   bool* extracted = nullptr) const;

 private:
  std::filesystem::path cache_dir_;
  features::VariantId variant_;
};

struct ExtractFailure {
  std::filesystem::path clip;
  std::string message;
};

struct ExtractReport {
  std::size_t extracted = 0;
  std::size_t cached = 0;
  std::vector<ExtractFailure> failures;  // in manifest order
};

// Makes sure every clip has current cached features, using `workers`
// threads (0 = hardware concurrency). Failures are collected per clip.
ExtractReport extract_all(const FeatureStore& store, std::span<const ManifestEntry> clips,
                          unsigned workers);

unsigned resolve_workers(unsigned workers);

// ---- datasets ----

// Segments of every clip in a manifest, stored as float32 (the cache
// precision) and expanded to double per batch. Segments inherit the clip
// label.
class SegmentDataset {
 public:
  SegmentDataset() = default;
  SegmentDataset(features::VariantId variant, std::size_t segment_rows, std::size_t segment_cols,
                 std::size_t segments_per_clip);

  void add_clip(const std::string& clip_id, int label, const features::SegmentSet& segments);

  features::VariantId variant() const { return variant_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t clip_count() const { return clip_ids_.size(); }
  std::size_t segments_per_clip() const { return per_clip_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& clip_ids() const { return clip_ids_; }
  const std::vector<int>& clip_labels() const { return clip_labels_; }

  // N x input_shape batch of the given segments.
  nn::Tensor batch(std::span<const std::size_t> segments, const nn::Shape& input_shape) const;
  // All segments of clips [first, first + count).
  nn::Tensor clip_batch(std::size_t first, std::size_t count, const nn::Shape& input_shape) const;

 private:
  features::VariantId variant_ = features::VariantId::kV1;
  std::size_t rows_ = 0, cols_ = 0, per_clip_ = 0;
  std::vector<float> data_;
  std::vector<int> labels_;
  std::vector<std::string> clip_ids_;
  std::vector<int> clip_labels_;
};

// Loads (extracting where needed) and segments every clip. Throws kIo
// listing the clips that could not be read.
SegmentDataset build_dataset(const Manifest& manifest, const FeatureStore& store,
                             unsigned workers);

// ---- training ----

struct EpochRecord {
  int epoch = 0;  // zero-based
  double train_loss = 0.0;     // mean cross-entropy per segment
  double train_seg_acc = 0.0;  // fraction of training segments classified correctly
  double val_macro_acc = 0.0;  // fused clip-level macro accuracy
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = -1;

  // Header `epoch,train_loss,train_seg_acc,val_macro_acc`, one row per epoch.
  std::string to_csv() const;
};

struct TrainOptions {
  std::size_t batch_size = 256;
  int epochs = 200;
  std::uint64_t seed = 0;
  nn::AdadeltaConfig optimizer;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct StepResult {
  double loss = 0.0;        // summed over the batch
  std::size_t correct = 0;  // argmax hits in the batch
};

// One Adadelta step on the mean cross-entropy of `batch`. Throws kOptimizer
// on a non-finite loss or gradient, before any parameter changes.
StepResult train_step(models::Model& model, const nn::Tensor& batch, std::span<const int> labels,
                      Rng& dropout, const nn::AdadeltaConfig& optimizer);

struct TrainResult {
  models::Model best;
  TrainHistory history;
};

// Adadelta on the mean segment cross-entropy of each shuffled mini-batch;
// after every epoch, fused macro accuracy on `validation` in evaluation mode.
// Returns the parameter snapshot of the best epoch (earliest on ties).
// A non-finite loss or gradient aborts with kOptimizer naming epoch and batch.
TrainResult train(models::Model model, const SegmentDataset& train_set,
                  const SegmentDataset& validation, const TrainOptions& options);

// Fused clip-level distributions for every clip of a dataset.
std::vector<eval::Distribution> predict_dataset(const models::Model& model,
                                                const SegmentDataset& data);

struct RunSummary {
  std::filesystem::path checkpoint;
  std::filesystem::path history;
  TrainHistory record;
};

// Full config-driven run: manifests, features, model, training, and the
// best checkpoint plus history written to checkpoint_dir.
RunSummary run_training(const TrainConfig& config);

struct Evaluation {
  eval::PredictionDump dump;
  eval::ConfusionMatrix cm;
};

// Evaluates a checkpoint on every clip of a manifest; the features variant
// comes from the checkpoint.
Evaluation evaluate_checkpoint(const std::filesystem::path& checkpoint,
                               const std::filesystem::path& manifest,
                               const std::filesystem::path& cache_dir, unsigned workers);

}  // namespace ascnet::pipeline

#endif  // ASCNET_PIPELINE_PIPELINE_HPP_
