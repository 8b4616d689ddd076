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

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "eval/eval.hpp"

namespace ascnet::eval {

namespace {

constexpr double kGeomeanFloor = 1e-12;

}  // namespace

int argmax(const Distribution& d) {
  return static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
}

Distribution fuse(const nn::Tensor& segment_probs) {
  require(segment_probs.rank() == 2 && segment_probs.dim(1) == kNumClasses &&
              segment_probs.dim(0) > 0,
          ErrorCode::kShape,
          "fuse: expected N x 15 segment predictions, got " +
              nn::shape_string(segment_probs.shape()));
  const std::size_t n = segment_probs.dim(0);
  Distribution out{};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < kNumClasses; ++c) out[c] += segment_probs[r * kNumClasses + c];
  }
  for (double& v : out) v /= static_cast<double>(n);
  return out;
}

Distribution predict_clip(const models::Model& model, const features::SegmentSet& clip) {
  const features::FeatureVariant& v = model.variant();
  require(clip.variant == v.id, ErrorCode::kShape,
          "predict_clip: clip '" + clip.clip_id + "' has " +
              std::string(features::variant(clip.variant).name()) + " features, model expects " +
              std::string(v.name()));
  require(clip.segments.size() == static_cast<std::size_t>(v.n_segments), ErrorCode::kShape,
          "predict_clip: clip '" + clip.clip_id + "' has " +
              std::to_string(clip.segments.size()) + " segments, expected " +
              std::to_string(v.n_segments));
  std::vector<const features::Matrix*> ptrs;
  ptrs.reserve(clip.segments.size());
  for (const auto& s : clip.segments) ptrs.push_back(&s);
  return fuse(model.predict(model.make_batch(ptrs)));
}

Distribution ensemble_geomean(std::span<const Distribution> members) {
  require(members.size() >= 2, ErrorCode::kArgument, "ensemble: at least two members required");
  Distribution logs{};
  for (const Distribution& d : members) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      logs[c] += std::log(std::max(d[c], kGeomeanFloor));
    }
  }
  const double n = static_cast<double>(members.size());
  double top = -INFINITY;
  for (double& l : logs) {
    l /= n;
    top = std::max(top, l);
  }
  Distribution out{};
  double sum = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out[c] = std::exp(logs[c] - top);
    sum += out[c];
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace ascnet::eval
