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

#include "nn/network.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "nn/ops.hpp"

namespace ascnet::nn {

Network::Network(const std::vector<LayerSpec>& specs, const Shape& input_shape,
                 ParamStore& params, Rng& init_rng, const std::string& prefix)
    : input_shape_(input_shape) {
  require(!input_shape.empty(), ErrorCode::kShape, "network input shape is empty");
  Shape shape = input_shape;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    layers_.push_back(make_layer(specs[i], shape, prefix + "l" + std::to_string(i), params, init_rng));
    shape = layers_.back()->output_shape();
  }
}

const Shape& Network::output_shape() const {
  return layers_.empty() ? input_shape_ : layers_.back()->output_shape();
}

std::vector<Shape> Network::shape_trace() const {
  std::vector<Shape> trace;
  for (const auto& l : layers_) trace.push_back(l->output_shape());
  return trace;
}

void Network::check_input(const Tensor& x) const {
  bool ok = x.rank() == input_shape_.size() + 1 && x.dim(0) > 0 &&
            std::equal(input_shape_.begin(), input_shape_.end(), x.shape().begin() + 1);
  require(ok, ErrorCode::kShape,
          "network expects N x " + shape_string(input_shape_) + " input, got " +
              shape_string(x.shape()));
}

Tensor Network::forward(const Tensor& x, const ParamStore& params) const {
  check_input(x);
  Tensor h = x;
  for (const auto& l : layers_) h = l->forward(h, params);
  return h;
}

Tensor Network::forward_train(const Tensor& x, ParamStore& params, Rng& rng, Tape& tape) const {
  check_input(x);
  tape.caches.assign(layers_.size(), LayerCache{});
  Tensor h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i]->forward_train(h, params, rng, tape.caches[i]);
  }
  tape.output = h;
  tape.recorded = true;
  return h;
}

Tensor Network::backward(const Tensor& dy, const ParamStore& params, const Tape& tape,
                         Gradients& grads, std::size_t end) const {
  require(tape.recorded, ErrorCode::kState, "backward called without a training forward pass");
  return backward(dy, params, tape.caches, grads, end);
}

Tensor Network::backward(const Tensor& dy, const ParamStore& params,
                         std::span<const LayerCache> caches, Gradients& grads,
                         std::size_t end) const {
  require(caches.size() == layers_.size(), ErrorCode::kState,
          "backward: tape does not belong to this network");
  require(end <= layers_.size(), ErrorCode::kArgument, "backward: layer range out of bounds");
  require(grads.size() == params.size(), ErrorCode::kState,
          "backward: gradient buffers do not match the parameter store");
  Tensor g = dy;
  for (std::size_t i = end; i-- > 0;) {
    g = layers_[i]->backward(g, params, caches[i], grads);
  }
  return g;
}

LossGradients backward(const Network& net, const ParamStore& params, const Tape& tape,
                       std::span<const int> labels) {
  require(tape.recorded, ErrorCode::kState, "backward called without a training forward pass");
  require(net.layer_count() > 0 && net.layer(net.layer_count() - 1).spec().kind == LayerKind::kSoftmax,
          ErrorCode::kState, "backward: network does not end in softmax");
  const Tensor& probs = tape.output;
  CrossEntropy ce = cross_entropy(probs, labels);

  LossGradients out;
  out.loss = ce.loss;
  const std::size_t K = probs.shape().back();
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const double* row = probs.data() + r * K;
    const auto best = static_cast<int>(std::max_element(row, row + K) - row);
    if (best == labels[r]) ++out.correct;
  }
  out.grads = zero_gradients(params);
  // Softmax and cross-entropy are fused: dL/dlogits = p - onehot.
  net.backward(ce.grad_logits, params, tape, out.grads, net.layer_count() - 1);
  return out;
}

}  // namespace ascnet::nn
