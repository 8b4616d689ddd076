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

#include "common/error.hpp"
#include "common/scene_classes.hpp"
#include "models/model.hpp"

namespace ascnet::models {

Model::Model(ModelSpec spec, std::uint64_t init_seed) : spec_(std::move(spec)) {
  Rng rng(init_seed);
  net_ = std::make_shared<const nn::Network>(spec_.layers, spec_.input_shape, params_, rng);
  require(net_->output_shape() == nn::Shape{kNumClasses}, ErrorCode::kShape,
          "model '" + spec_.name + "' does not end in a 15-way output, got " +
              nn::shape_string(net_->output_shape()));
}

nn::Tensor Model::predict(const nn::Tensor& batch) const { return net_->forward(batch, params_); }

nn::Tensor Model::forward_train(const nn::Tensor& batch, Rng& rng, nn::Tape& tape) {
  return net_->forward_train(batch, params_, rng, tape);
}

nn::LossGradients Model::backward(const nn::Tape& tape, std::span<const int> labels) const {
  return nn::backward(*net_, params_, tape, labels);
}

nn::Tensor Model::make_batch(std::span<const features::Matrix* const> segments) const {
  const std::size_t per = nn::shape_size(spec_.input_shape);
  nn::Shape shape{segments.size()};
  shape.insert(shape.end(), spec_.input_shape.begin(), spec_.input_shape.end());
  nn::Tensor batch(shape);
  double* out = batch.data();
  for (const features::Matrix* m : segments) {
    require(static_cast<std::size_t>(m->size()) == per &&
                static_cast<std::size_t>(m->rows()) == spec_.input_shape[0],
            ErrorCode::kShape,
            "segment " + std::to_string(m->rows()) + "x" + std::to_string(m->cols()) +
                " does not fit model input " + nn::shape_string(spec_.input_shape));
    std::copy(m->data(), m->data() + per, out);
    out += per;
  }
  return batch;
}

}  // namespace ascnet::models
