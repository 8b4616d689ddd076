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

#include <optional>

#include "common/error.hpp"
#include "pipeline/parallel.hpp"
#include "pipeline/pipeline.hpp"

namespace ascnet::pipeline {

SegmentDataset::SegmentDataset(features::VariantId variant, std::size_t segment_rows,
                               std::size_t segment_cols, std::size_t segments_per_clip)
    : variant_(variant), rows_(segment_rows), cols_(segment_cols), per_clip_(segments_per_clip) {}

void SegmentDataset::add_clip(const std::string& clip_id, int label,
                              const features::SegmentSet& segments) {
  require(segments.variant == variant_ && segments.segments.size() == per_clip_,
          ErrorCode::kShape, "dataset: clip '" + clip_id + "' does not match the dataset layout");
  for (const features::Matrix& m : segments.segments) {
    require(static_cast<std::size_t>(m.rows()) == rows_ &&
                static_cast<std::size_t>(m.cols()) == cols_,
            ErrorCode::kShape, "dataset: segment shape mismatch in '" + clip_id + "'");
    data_.insert(data_.end(), m.data(), m.data() + m.size());
    labels_.push_back(label);
  }
  clip_ids_.push_back(clip_id);
  clip_labels_.push_back(label);
}

nn::Tensor SegmentDataset::batch(std::span<const std::size_t> segments,
                                 const nn::Shape& input_shape) const {
  const std::size_t per = rows_ * cols_;
  require(nn::shape_size(input_shape) == per, ErrorCode::kShape,
          "dataset: segments of " + std::to_string(rows_) + "x" + std::to_string(cols_) +
              " do not fit model input " + nn::shape_string(input_shape));
  nn::Shape shape{segments.size()};
  shape.insert(shape.end(), input_shape.begin(), input_shape.end());
  nn::Tensor out(shape);
  double* dst = out.data();
  for (std::size_t s : segments) {
    require(s < labels_.size(), ErrorCode::kArgument, "dataset: segment index out of range");
    const float* src = data_.data() + s * per;
    for (std::size_t i = 0; i < per; ++i) dst[i] = static_cast<double>(src[i]);
    dst += per;
  }
  return out;
}

nn::Tensor SegmentDataset::clip_batch(std::size_t first, std::size_t count,
                                      const nn::Shape& input_shape) const {
  require(first + count <= clip_count(), ErrorCode::kArgument, "dataset: clip range out of bounds");
  std::vector<std::size_t> idx(count * per_clip_);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = first * per_clip_ + i;
  return batch(idx, input_shape);
}

SegmentDataset build_dataset(const Manifest& manifest, const FeatureStore& store,
                             unsigned workers) {
  const features::FeatureVariant& v = features::variant(store.variant());
  SegmentDataset ds(v.id, static_cast<std::size_t>(v.segment_frames),
                    static_cast<std::size_t>(v.n_mels), static_cast<std::size_t>(v.n_segments));
  const auto& entries = manifest.entries;
  constexpr std::size_t kChunk = 64;
  std::vector<std::string> failures;
  for (std::size_t start = 0; start < entries.size(); start += kChunk) {
    const std::size_t n = std::min(kChunk, entries.size() - start);
    std::vector<std::optional<features::SegmentSet>> sets(n);
    std::vector<std::string> errors(n);
    parallel_for(n, resolve_workers(workers), [&](std::size_t i) {
      const ManifestEntry& e = entries[start + i];
      try {
        sets[i] = features::segment(store.load(e.path), e.clip_id);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    });
    for (std::size_t i = 0; i < n; ++i) {
      if (sets[i]) {
        ds.add_clip(entries[start + i].clip_id, entries[start + i].label, *sets[i]);
      } else {
        failures.push_back(entries[start + i].clip_id + ": " + errors[i]);
      }
    }
  }
  if (!failures.empty()) {
    std::string msg = std::to_string(failures.size()) + " clip(s) could not be loaded:";
    for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 5); ++i) {
      msg += "\n  " + failures[i];
    }
    fail(ErrorCode::kIo, msg);
  }
  return ds;
}

}  // namespace ascnet::pipeline
