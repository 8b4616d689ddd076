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

#include "nn/adadelta.hpp"

#include <cmath>

#include "common/error.hpp"

namespace ascnet::nn {

void adadelta_step(ParamStore& params, const Gradients& grads, const AdadeltaConfig& cfg) {
  require(grads.size() == params.size(), ErrorCode::kState,
          "adadelta: gradient count does not match parameters");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Parameter& p = params[i];
    if (!p.trainable) continue;
    require(grads[i].shape() == p.value.shape() && p.grad_sq_avg.shape() == p.value.shape() &&
                p.update_sq_avg.shape() == p.value.shape(),
            ErrorCode::kState, "adadelta: accumulator shape mismatch for '" + p.name + "'");
    if (!grads[i].all_finite()) {
      fail(ErrorCode::kOptimizer, "adadelta: non-finite gradient for '" + p.name + "'");
    }
  }
  const double rho = cfg.rho;
  const double eps = cfg.epsilon;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = params[i];
    if (!p.trainable) continue;
    const Tensor& g = grads[i];
    for (std::size_t j = 0; j < g.size(); ++j) {
      double& eg = p.grad_sq_avg[j];
      double& edx = p.update_sq_avg[j];
      eg = rho * eg + (1.0 - rho) * g[j] * g[j];
      const double dx = -std::sqrt(edx + eps) / std::sqrt(eg + eps) * g[j];
      edx = rho * edx + (1.0 - rho) * dx * dx;
      p.value[j] += cfg.learning_rate * dx;
    }
  }
}

}  // namespace ascnet::nn
