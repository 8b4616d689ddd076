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

#ifndef ASCNET_NN_ADADELTA_HPP_
#define ASCNET_NN_ADADELTA_HPP_

#include "nn/tensor.hpp"

namespace ascnet::nn {

struct AdadeltaConfig {
  double learning_rate = 1.0;
  double rho = 0.95;
  double epsilon = 1e-6;
};

// One Adadelta update over every trainable parameter:
//   E[g^2]  <- rho E[g^2] + (1 - rho) g^2
//   dx      <- -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
//   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
//   x       <- x + lr dx
// Throws kOptimizer before touching any state if a gradient is not finite.
void adadelta_step(ParamStore& params, const Gradients& grads, const AdadeltaConfig& config = {});

}  // namespace ascnet::nn

#endif  // ASCNET_NN_ADADELTA_HPP_
