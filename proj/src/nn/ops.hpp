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

#ifndef ASCNET_NN_OPS_HPP_
#define ASCNET_NN_OPS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "common/rng.hpp"
#include "nn/tensor.hpp"

namespace ascnet::nn {

// All operations here take a leading batch axis unless noted.

Tensor relu(const Tensor& x);
// `y` is the forward output.
Tensor relu_backward(const Tensor& dy, const Tensor& y);

// Non-overlapping max pooling; trailing rows/columns that do not fill a
// window are dropped. `argmax` receives the flat input index chosen for
// every output element (first maximum on ties).
Tensor maxpool2d(const Tensor& x, std::size_t pool_h, std::size_t pool_w,
                 std::vector<std::uint32_t>* argmax = nullptr);  // N x H x W x C
Tensor maxpool1d(const Tensor& x, std::size_t pool,
                 std::vector<std::uint32_t>* argmax = nullptr);  // N x T x C
Tensor maxpool_backward(const Tensor& dy, const Shape& input_shape,
                        const std::vector<std::uint32_t>& argmax);

// Mean over every axis between batch and channels: N x ... x C -> N x C.
Tensor global_avg_pool(const Tensor& x);
Tensor global_avg_pool_backward(const Tensor& dy, const Shape& input_shape);

// x (N x n or n), weights m x n, bias m.
Tensor dense(const Tensor& x, const Tensor& weights, const Tensor& bias);
// Accumulates into dweights/dbias; returns dx.
Tensor dense_backward(const Tensor& dy, const Tensor& x, const Tensor& weights,
                      Tensor& dweights, Tensor& dbias);

// Inverted dropout. In training mode each element is zeroed with
// probability `rate` and survivors are scaled by 1 / (1 - rate); `mask`
// receives the per-element multiplier. Evaluation mode is the identity.
Tensor dropout(const Tensor& x, double rate, bool training, Rng& rng, Tensor* mask = nullptr);

struct BatchNormCache {
  Tensor normalized;             // x-hat
  std::vector<double> inv_std;   // per channel
};

inline constexpr double kBatchNormEpsilon = 1e-5;
inline constexpr double kBatchNormMomentum = 0.99;

// Per-channel (last axis) normalisation over every other axis. Training
// mode uses batch statistics and folds them into the running statistics:
// running = momentum * running + (1 - momentum) * batch.
Tensor batchnorm_train(const Tensor& x, const Tensor& gain, const Tensor& shift,
                       Tensor& running_mean, Tensor& running_var, double momentum,
                       BatchNormCache* cache = nullptr);
Tensor batchnorm_eval(const Tensor& x, const Tensor& gain, const Tensor& shift,
                      const Tensor& running_mean, const Tensor& running_var);
Tensor batchnorm_backward(const Tensor& dy, const Tensor& gain, const BatchNormCache& cache,
                          Tensor& dgain, Tensor& dshift);

// Row-wise softmax over the last axis with max subtraction.
Tensor softmax(const Tensor& logits);
Tensor softmax_backward(const Tensor& dy, const Tensor& probs);

struct CrossEntropy {
  double loss = 0.0;     // summed over the batch
  Tensor grad_logits;    // probs - onehot(label), same shape as probs
};

// `probs` is N x K (or K for one sample) from softmax over the logits.
CrossEntropy cross_entropy(const Tensor& probs, std::span<const int> labels);

// Channel (last axis) concatenation and its adjoint.
Tensor concat_channels(const Tensor& a, const Tensor& b);
void split_channels(const Tensor& dy, std::size_t channels_a, Tensor& da, Tensor& db);

}  // namespace ascnet::nn

#endif  // ASCNET_NN_OPS_HPP_
