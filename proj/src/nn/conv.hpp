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

#ifndef ASCNET_NN_CONV_HPP_
#define ASCNET_NN_CONV_HPP_

#include <cstddef>
#include <vector>

#include "nn/tensor.hpp"

namespace ascnet::nn {

// Stride-1 convolution with "same" zero padding over an H x W x Cin image.
// Kernels are laid out Cout x kH x kW x Cin. A 1-D convolution over a
// T x Cin sequence is the case W = 1, kW = 1.
struct ConvGeometry {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;

  std::size_t positions() const { return height * width; }
  std::size_t patch_size() const { return kernel_h * kernel_w * in_channels; }
  std::size_t input_size() const { return positions() * in_channels; }
  std::size_t output_size() const { return positions() * out_channels; }
  bool pointwise() const { return kernel_h == 1 && kernel_w == 1; }
};

// Single-image forward pass. `scratch` is reused across calls.
void conv_forward(const ConvGeometry& g, const double* input, const double* kernel,
                  const double* bias, double* output, std::vector<double>& scratch);

// Single-image backward pass. Kernel and bias gradients are accumulated;
// `dinput` (overwritten) may be null when the input gradient is not needed.
void conv_backward(const ConvGeometry& g, const double* input, const double* kernel,
                   const double* dout, double* dinput, double* dkernel, double* dbias,
                   std::vector<double>& scratch);

// input H x W x Cin, kernels Cout x kH x kW x Cin, bias Cout -> H x W x Cout.
Tensor conv2d(const Tensor& input, const Tensor& kernels, const Tensor& bias);
// input T x Cin, kernels Cout x k x Cin, bias Cout -> T x Cout.
Tensor conv1d(const Tensor& input, const Tensor& kernels, const Tensor& bias);

}  // namespace ascnet::nn

#endif  // ASCNET_NN_CONV_HPP_
