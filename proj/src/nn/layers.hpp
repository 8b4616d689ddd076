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

#ifndef ASCNET_NN_LAYERS_HPP_
#define ASCNET_NN_LAYERS_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "common/rng.hpp"
#include "nn/layer_spec.hpp"
#include "nn/tensor.hpp"

namespace ascnet::nn {

// Intermediates recorded by a training-mode forward pass. Composite layers
// keep one tape per sub-graph in `tapes`.
struct LayerCache {
  std::vector<Tensor> tensors;
  std::vector<std::uint32_t> indices;
  std::vector<std::vector<LayerCache>> tapes;
};

// A layer is an immutable description bound to parameter slots in a
// ParamStore; all mutable state lives in the store or the cache. Tensors
// passed in and out carry a leading batch axis.
class Layer {
 public:
  virtual ~Layer() = default;

  const LayerSpec& spec() const { return spec_; }
  // Per-sample shapes (no batch axis).
  const Shape& input_shape() const { return input_shape_; }
  const Shape& output_shape() const { return output_shape_; }

  // Evaluation mode. Does not touch the store.
  virtual Tensor forward(const Tensor& x, const ParamStore& params) const = 0;
  // Training mode: batch statistics, dropout masks, running-stat updates.
  virtual Tensor forward_train(const Tensor& x, ParamStore& params, Rng& rng,
                               LayerCache& cache) const = 0;
  // Accumulates parameter gradients into `grads` and returns dL/dx.
  virtual Tensor backward(const Tensor& dy, const ParamStore& params, const LayerCache& cache,
                          Gradients& grads) const = 0;

 protected:
  Layer(LayerSpec spec, Shape input_shape, Shape output_shape)
      : spec_(std::move(spec)),
        input_shape_(std::move(input_shape)),
        output_shape_(std::move(output_shape)) {}

 private:
  LayerSpec spec_;
  Shape input_shape_;
  Shape output_shape_;
};

// Per-sample output shape; throws kShape when the layer cannot accept
// `input_shape`.
Shape infer_output_shape(const LayerSpec& spec, const Shape& input_shape);

// Instantiates a layer, registering its parameters in `params` under
// `name` with Glorot-uniform weights, zero biases, unit batch-norm gain.
std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const Shape& input_shape,
                                  const std::string& name, ParamStore& params, Rng& init_rng);

}  // namespace ascnet::nn

#endif  // ASCNET_NN_LAYERS_HPP_
