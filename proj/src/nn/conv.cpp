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

#include "nn/conv.hpp"

#include <algorithm>
#include <cstring>

#include <Eigen/Core>

#include "common/error.hpp"

namespace ascnet::nn {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

// Expands the padded receptive field of every output position into a row of
// `cols` (positions x patch_size), in kernel (i, j, d) order.
void im2col(const ConvGeometry& g, const double* input, double* cols) {
  const auto ph = static_cast<std::ptrdiff_t>((g.kernel_h - 1) / 2);
  const auto pw = static_cast<std::ptrdiff_t>((g.kernel_w - 1) / 2);
  const auto H = static_cast<std::ptrdiff_t>(g.height);
  const auto W = static_cast<std::ptrdiff_t>(g.width);
  const std::size_t cin = g.in_channels;
  double* row = cols;
  for (std::ptrdiff_t h = 0; h < H; ++h) {
    for (std::ptrdiff_t w = 0; w < W; ++w) {
      double* dst = row;
      for (std::size_t i = 0; i < g.kernel_h; ++i) {
        const std::ptrdiff_t ih = h + static_cast<std::ptrdiff_t>(i) - ph;
        for (std::size_t j = 0; j < g.kernel_w; ++j) {
          const std::ptrdiff_t iw = w + static_cast<std::ptrdiff_t>(j) - pw;
          if (ih < 0 || ih >= H || iw < 0 || iw >= W) {
            std::fill(dst, dst + cin, 0.0);
          } else {
            std::memcpy(dst, input + static_cast<std::size_t>(ih * W + iw) * cin,
                        cin * sizeof(double));
          }
          dst += cin;
        }
      }
      row += g.patch_size();
    }
  }
}

void col2im(const ConvGeometry& g, const double* cols, double* dinput) {
  const auto ph = static_cast<std::ptrdiff_t>((g.kernel_h - 1) / 2);
  const auto pw = static_cast<std::ptrdiff_t>((g.kernel_w - 1) / 2);
  const auto H = static_cast<std::ptrdiff_t>(g.height);
  const auto W = static_cast<std::ptrdiff_t>(g.width);
  const std::size_t cin = g.in_channels;
  std::fill(dinput, dinput + g.input_size(), 0.0);
  const double* row = cols;
  for (std::ptrdiff_t h = 0; h < H; ++h) {
    for (std::ptrdiff_t w = 0; w < W; ++w) {
      const double* src = row;
      for (std::size_t i = 0; i < g.kernel_h; ++i) {
        const std::ptrdiff_t ih = h + static_cast<std::ptrdiff_t>(i) - ph;
        for (std::size_t j = 0; j < g.kernel_w; ++j) {
          const std::ptrdiff_t iw = w + static_cast<std::ptrdiff_t>(j) - pw;
          if (ih >= 0 && ih < H && iw >= 0 && iw < W) {
            double* dst = dinput + static_cast<std::size_t>(ih * W + iw) * cin;
            for (std::size_t d = 0; d < cin; ++d) dst[d] += src[d];
          }
          src += cin;
        }
      }
      row += g.patch_size();
    }
  }
}

const double* patches(const ConvGeometry& g, const double* input, std::vector<double>& scratch) {
  if (g.pointwise()) return input;
  scratch.resize(g.positions() * g.patch_size());
  im2col(g, input, scratch.data());
  return scratch.data();
}

}  // namespace

void conv_forward(const ConvGeometry& g, const double* input, const double* kernel,
                  const double* bias, double* output, std::vector<double>& scratch) {
  const auto P = static_cast<Eigen::Index>(g.positions());
  const auto K = static_cast<Eigen::Index>(g.patch_size());
  const auto C = static_cast<Eigen::Index>(g.out_channels);
  ConstMap cols(patches(g, input, scratch), P, K);
  ConstMap w(kernel, C, K);
  MutMap out(output, P, C);
  out.noalias() = cols * w.transpose();
  out.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(bias, C);
}

void conv_backward(const ConvGeometry& g, const double* input, const double* kernel,
                   const double* dout, double* dinput, double* dkernel, double* dbias,
                   std::vector<double>& scratch) {
  const auto P = static_cast<Eigen::Index>(g.positions());
  const auto K = static_cast<Eigen::Index>(g.patch_size());
  const auto C = static_cast<Eigen::Index>(g.out_channels);
  ConstMap dy(dout, P, C);
  {
    ConstMap cols(patches(g, input, scratch), P, K);
    MutMap dw(dkernel, C, K);
    dw.noalias() += dy.transpose() * cols;
  }
  Eigen::Map<Eigen::RowVectorXd>(dbias, C) += dy.colwise().sum();
  if (dinput == nullptr) return;
  ConstMap w(kernel, C, K);
  if (g.pointwise()) {
    MutMap(dinput, P, K).noalias() = dy * w;
    return;
  }
  scratch.resize(g.positions() * g.patch_size());
  MutMap(scratch.data(), P, K).noalias() = dy * w;
  col2im(g, scratch.data(), dinput);
}

Tensor conv2d(const Tensor& input, const Tensor& kernels, const Tensor& bias) {
  require(input.rank() == 3, ErrorCode::kShape, "conv2d: input must be H x W x C");
  require(kernels.rank() == 4, ErrorCode::kShape, "conv2d: kernels must be Cout x kH x kW x Cin");
  require(kernels.dim(3) == input.dim(2), ErrorCode::kShape,
          "conv2d: kernel depth " + std::to_string(kernels.dim(3)) +
              " does not match input channels " + std::to_string(input.dim(2)));
  require(kernels.dim(1) % 2 == 1 && kernels.dim(2) % 2 == 1, ErrorCode::kShape,
          "conv2d: kernel dimensions must be odd");
  require(bias.size() == kernels.dim(0), ErrorCode::kShape, "conv2d: bias length mismatch");
  const ConvGeometry g{input.dim(0), input.dim(1), input.dim(2),
                       kernels.dim(0), kernels.dim(1), kernels.dim(2)};
  Tensor out({g.height, g.width, g.out_channels});
  std::vector<double> scratch;
  conv_forward(g, input.data(), kernels.data(), bias.data(), out.data(), scratch);
  return out;
}

Tensor conv1d(const Tensor& input, const Tensor& kernels, const Tensor& bias) {
  require(input.rank() == 2, ErrorCode::kShape, "conv1d: input must be T x C");
  require(kernels.rank() == 3, ErrorCode::kShape, "conv1d: kernels must be Cout x k x Cin");
  require(kernels.dim(2) == input.dim(1), ErrorCode::kShape,
          "conv1d: kernel depth " + std::to_string(kernels.dim(2)) +
              " does not match input channels " + std::to_string(input.dim(1)));
  require(kernels.dim(1) % 2 == 1, ErrorCode::kShape, "conv1d: kernel width must be odd");
  require(bias.size() == kernels.dim(0), ErrorCode::kShape, "conv1d: bias length mismatch");
  const ConvGeometry g{input.dim(0), 1, input.dim(1), kernels.dim(0), kernels.dim(1), 1};
  Tensor out({g.height, g.out_channels});
  std::vector<double> scratch;
  conv_forward(g, input.data(), kernels.data(), bias.data(), out.data(), scratch);
  return out;
}

}  // namespace ascnet::nn
