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

#ifndef ASCNET_NN_NETWORK_HPP_
#define ASCNET_NN_NETWORK_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "common/rng.hpp"
#include "nn/layers.hpp"

namespace ascnet::nn {

struct Tape {
  std::vector<LayerCache> caches;
  Tensor output;
  bool recorded = false;
};

// Sequential layer stack.
class Network {
 public:
  Network(const std::vector<LayerSpec>& specs, const Shape& input_shape, ParamStore& params,
          Rng& init_rng, const std::string& prefix = "");

  const Shape& input_shape() const { return input_shape_; }
  const Shape& output_shape() const;
  std::size_t layer_count() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }
  // Output shape after each layer, in order.
  std::vector<Shape> shape_trace() const;

  Tensor forward(const Tensor& x, const ParamStore& params) const;
  Tensor forward_train(const Tensor& x, ParamStore& params, Rng& rng, Tape& tape) const;
  // Backpropagates dy, the gradient w.r.t. the output of layer `end - 1`,
  // through layers [0, end).
  Tensor backward(const Tensor& dy, const ParamStore& params, const Tape& tape,
                  Gradients& grads, std::size_t end) const;
  Tensor backward(const Tensor& dy, const ParamStore& params, const Tape& tape,
                  Gradients& grads) const {
    return backward(dy, params, tape, grads, layers_.size());
  }
  // Same, over raw per-layer caches (used by composite layers).
  Tensor backward(const Tensor& dy, const ParamStore& params,
                  std::span<const LayerCache> caches, Gradients& grads, std::size_t end) const;

 private:
  void check_input(const Tensor& x) const;

  Shape input_shape_;
  std::vector<std::unique_ptr<Layer>> layers_;
};

struct LossGradients {
  double loss = 0.0;         // summed cross-entropy over the batch
  std::size_t correct = 0;   // argmax hits
  Gradients grads;           // gradients of the summed loss
};

// Reverse-mode pass for softmax + cross-entropy. The network must end in a
// softmax layer and `tape` must hold a training forward pass; otherwise
// throws kState.
LossGradients backward(const Network& net, const ParamStore& params, const Tape& tape,
                       std::span<const int> labels);

}  // namespace ascnet::nn

#endif  // ASCNET_NN_NETWORK_HPP_
