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

#ifndef ASCNET_EVAL_EVAL_HPP_
#define ASCNET_EVAL_EVAL_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "common/scene_classes.hpp"
#include "features/features.hpp"
#include "models/model.hpp"
#include "nn/tensor.hpp"

namespace ascnet::eval {

using Distribution = std::array<double, kNumClasses>;

// Highest-probability class, lowest index on exact ties.
int argmax(const Distribution& d);

// Mean of the per-segment softmax rows of an N x 15 tensor.
Distribution fuse(const nn::Tensor& segment_probs);
// Runs the model on every segment of a clip and fuses the outputs. Throws
// kShape when the segment count or shape does not match the model variant.
Distribution predict_clip(const models::Model& model, const features::SegmentSet& clip);

// Elementwise geometric mean in log space, entries floored at 1e-12,
// renormalized to sum to 1. Needs at least two inputs (kArgument).
Distribution ensemble_geomean(std::span<const Distribution> members);

struct ConfusionMatrix {
  // counts[true][predicted]
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t row_sum(std::size_t cls) const;
  std::size_t total() const;
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const Distribution> preds);

// Per-class accuracy as a fraction; classes without clips are empty.
std::array<std::optional<double>, kNumClasses> class_accuracy(const ConfusionMatrix& cm);
// Unweighted mean over classes that have clips (others excluded, with a
// warning unless `quiet`). Throws kArgument on an empty matrix.
double macro_accuracy(const ConfusionMatrix& cm, bool quiet = false);
// Unweighted mean of given per-class accuracies, on whatever scale they use.
double macro_accuracy(std::span<const double> class_accuracies);

// ---- prediction dumps ----

struct PredictionRow {
  std::string clip_id;
  int true_label = 0;
  Distribution probs{};
};

// Rows `clip_id,true_label,p0,...,p14` without a header; labels are scene
// names and probabilities use the shortest round-trip representation.
struct PredictionDump {
  std::string name;
  std::vector<PredictionRow> rows;

  std::vector<int> truth() const;
  std::vector<Distribution> predictions() const;
};

std::string encode_dump(const PredictionDump& dump);
PredictionDump parse_dump(std::string_view text, std::string name);
void save_dump(const std::filesystem::path& path, const PredictionDump& dump);
// The dump is named after the file stem, minus a ".predictions" suffix.
PredictionDump load_dump(const std::filesystem::path& path);

// Reorders every dump to the clip order of the first. Throws kAlignment
// naming missing ids when the clip sets (or their true labels) differ.
std::vector<PredictionDump> align_dumps(std::span<const PredictionDump> dumps);

// ---- ensemble selection ----

struct Candidate {
  std::string name;
  std::vector<Distribution> predictions;  // on a shared validation clip list
  double accuracy = 0.0;                  // macro accuracy
};

// Fraction of clips on which two prediction lists disagree in argmax.
double disagreement(std::span<const Distribution> a, std::span<const Distribution> b);

struct EnsembleSelection {
  std::vector<std::size_t> members;  // indices into the candidate list
  double diversity = 0.0;            // mean pairwise disagreement of members
};

// Keeps candidates with accuracy > baseline, starts from the most accurate
// and greedily adds the one that maximizes the mean pairwise argmax
// disagreement of the growing set, until k members (or every eligible
// candidate) are chosen. Ties go to higher accuracy, then name. Throws
// kSelection with fewer than two eligible candidates.
EnsembleSelection select_ensemble(std::span<const Candidate> candidates, double baseline,
                                  std::size_t k);

// ---- reports ----

struct ModelResult {
  std::string name;
  ConfusionMatrix cm;
};

// Class x model accuracy table in percent with one decimal and an average
// row; classes without clips print as "-" (text) or empty (CSV).
std::string report_text(std::span<const ModelResult> results);
std::string report_csv(std::span<const ModelResult> results);
// 15 x 15 count grid, rows true class, columns predicted.
std::string confusion_text(const ConfusionMatrix& cm);

}  // namespace ascnet::eval

#endif  // ASCNET_EVAL_EVAL_HPP_
