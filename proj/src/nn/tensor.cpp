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

#include "nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "common/error.hpp"

namespace ascnet::nn {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::string s;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(shape[i]);
  }
  return s.empty() ? "scalar" : s;
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  require(data_.size() == shape_size(shape_), ErrorCode::kShape,
          "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
              shape_string(shape_));
}

void Tensor::reshape(Shape shape) {
  require(shape_size(shape) == data_.size(), ErrorCode::kShape,
          "cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  shape_ = std::move(shape);
}

Tensor Tensor::reshaped(Shape shape) const {
  Tensor t = *this;
  t.reshape(std::move(shape));
  return t;
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::size_t ParamStore::add(std::string name, Tensor value, bool trainable) {
  require(!find(name).has_value(), ErrorCode::kInvariant, "duplicate parameter '" + name + "'");
  Parameter p{std::move(name), std::move(value), trainable, {}, {}};
  if (trainable) {
    p.grad_sq_avg = Tensor(p.value.shape());
    p.update_sq_avg = Tensor(p.value.shape());
  }
  params_.push_back(std::move(p));
  return params_.size() - 1;
}

std::optional<std::size_t> ParamStore::find(const std::string& name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t ParamStore::trainable_scalars() const {
  std::size_t n = 0;
  for (const auto& p : params_) {
    if (p.trainable) n += p.value.size();
  }
  return n;
}

void ParamStore::round_to_float32() {
  auto round = [](Tensor& t) {
    for (double& v : t.values()) v = static_cast<double>(static_cast<float>(v));
  };
  for (auto& p : params_) {
    round(p.value);
    round(p.grad_sq_avg);
    round(p.update_sq_avg);
  }
}

bool ParamStore::operator==(const ParamStore& other) const {
  if (params_.size() != other.params_.size()) return false;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto& a = params_[i];
    const auto& b = other.params_[i];
    if (a.name != b.name || a.trainable != b.trainable || !(a.value == b.value) ||
        !(a.grad_sq_avg == b.grad_sq_avg) || !(a.update_sq_avg == b.update_sq_avg)) {
      return false;
    }
  }
  return true;
}

Gradients zero_gradients(const ParamStore& params) {
  Gradients g;
  g.reserve(params.size());
  for (const auto& p : params) {
    g.push_back(p.trainable ? Tensor(p.value.shape()) : Tensor());
  }
  return g;
}

}  // namespace ascnet::nn
