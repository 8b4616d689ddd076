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

#ifndef ASCNET_NN_TENSOR_HPP_
#define ASCNET_NN_TENSOR_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ascnet::nn {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major array of doubles.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  void reshape(Shape shape);
  Tensor reshaped(Shape shape) const;
  void fill(double v);
  bool all_finite() const;

  bool operator==(const Tensor& other) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

// Named parameter plus its Adadelta accumulators (E[g^2], E[dx^2]).
// Non-trainable entries (batch-norm running statistics) leave the
// accumulators empty.
struct Parameter {
  std::string name;
  Tensor value;
  bool trainable = true;
  Tensor grad_sq_avg;
  Tensor update_sq_avg;
};

class ParamStore {
 public:
  std::size_t add(std::string name, Tensor value, bool trainable);

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return params_[i]; }
  const Parameter& operator[](std::size_t i) const { return params_[i]; }
  std::optional<std::size_t> find(const std::string& name) const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  // Number of trainable scalars.
  std::size_t trainable_scalars() const;

  // Rounds every value and accumulator to the nearest float32, i.e. the
  // precision kept by checkpoints.
  void round_to_float32();

  bool operator==(const ParamStore& other) const;

 private:
  std::vector<Parameter> params_;
};

// One tensor per ParamStore entry; non-trainable entries are empty.
using Gradients = std::vector<Tensor>;

Gradients zero_gradients(const ParamStore& params);

}  // namespace ascnet::nn

#endif  // ASCNET_NN_TENSOR_HPP_
