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

#include <numeric>

#include <spdlog/spdlog.h>

#include "common/error.hpp"
#include "eval/eval.hpp"

namespace ascnet::eval {

std::size_t ConfusionMatrix::row_sum(std::size_t cls) const {
  return std::accumulate(counts.at(cls).begin(), counts.at(cls).end(), std::size_t{0});
}

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < kNumClasses; ++r) n += row_sum(r);
  return n;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const Distribution> preds) {
  require(truth.size() == preds.size(), ErrorCode::kShape,
          "confusion: label and prediction counts differ");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    require(truth[i] >= 0 && static_cast<std::size_t>(truth[i]) < kNumClasses,
            ErrorCode::kArgument, "confusion: label out of range");
    ++cm.counts[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(argmax(preds[i]))];
  }
  return cm;
}

std::array<std::optional<double>, kNumClasses> class_accuracy(const ConfusionMatrix& cm) {
  std::array<std::optional<double>, kNumClasses> out;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const std::size_t n = cm.row_sum(c);
    if (n > 0) out[c] = static_cast<double>(cm.counts[c][c]) / static_cast<double>(n);
  }
  return out;
}

double macro_accuracy(const ConfusionMatrix& cm, bool quiet) {
  require(cm.total() > 0, ErrorCode::kArgument, "macro accuracy: empty confusion matrix");
  std::vector<double> present;
  std::vector<std::string_view> missing;
  const auto acc = class_accuracy(cm);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (acc[c]) {
      present.push_back(*acc[c]);
    } else {
      missing.push_back(kSceneLabels[c]);
    }
  }
  if (!missing.empty() && !quiet) {
    std::string names;
    for (auto m : missing) {
      if (!names.empty()) names += ", ";
      names += m;
    }
    spdlog::warn("macro accuracy excludes classes without clips: {}", names);
  }
  return macro_accuracy(present);
}

double macro_accuracy(std::span<const double> class_accuracies) {
  require(!class_accuracies.empty(), ErrorCode::kArgument, "macro accuracy: no classes");
  double sum = 0.0;
  for (double a : class_accuracies) sum += a;
  return sum / static_cast<double>(class_accuracies.size());
}

}  // namespace ascnet::eval
