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

#ifndef ASCNET_MODELS_MODEL_HPP_
#define ASCNET_MODELS_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "common/rng.hpp"
#include "features/features.hpp"
#include "nn/layer_spec.hpp"
#include "nn/network.hpp"

namespace ascnet::models {

enum class ModelId { kCnnV1, kCnnV2_1, kCnnV2_2, kCnnV2_3, kSqueezeNet, kCnn1D };

inline constexpr ModelId kAllModels[] = {ModelId::kCnnV1,   ModelId::kCnnV2_1,
                                         ModelId::kCnnV2_2, ModelId::kCnnV2_3,
                                         ModelId::kSqueezeNet, ModelId::kCnn1D};

std::string_view model_name(ModelId id);
// Throws kUsage listing the valid names.
ModelId parse_model_id(std::string_view name);
// CNN-V1 runs on full-rate (V2) features; every other model on 16 kHz (V1).
features::VariantId model_variant(ModelId id);

// Architecture plus the input it is bound to. The canonical text form is one
// header line each for `model`, `variant` and `input`, then one layer per
// line:
//
//   model cnn-v2-1
//   variant v1
//   input 111 64 1
//   conv2d 8 3 3 same
//   bn
//   ...
struct ModelSpec {
  std::string name;
  features::VariantId variant = features::VariantId::kV1;
  nn::Shape input_shape;
  std::vector<nn::LayerSpec> layers;

  std::string to_text() const;
  static ModelSpec parse(std::string_view text);

  bool operator==(const ModelSpec&) const = default;
};

struct FireSpec {
  int squeeze = 0;
  int expand = 0;  // filters in each of the 1x1 and 3x3 branches
};

// Test-scale variants: divide every hidden width by `width_divisor`
// (minimum 1; the 15-way output is kept) and optionally override the input.
struct BuildOptions {
  int width_divisor = 1;
  std::optional<nn::Shape> input_shape;
};

ModelSpec build_lenet(int kernel, features::VariantId variant, const BuildOptions& opts = {});
nn::LayerSpec build_fire(const FireSpec& spec);
ModelSpec build_squeezenet_mini(features::VariantId variant, const BuildOptions& opts = {});
ModelSpec build_cnn1d(features::VariantId variant, const BuildOptions& opts = {});
ModelSpec build_model(ModelId id, const BuildOptions& opts = {});

// Trainable scalars: conv kernels and biases, batch-norm gain and shift,
// dense weights and biases.
std::size_t param_count(const ModelSpec& spec);
// Per-sample output shape after each top-level layer.
std::vector<nn::Shape> shape_trace(const ModelSpec& spec);

// A built network with its parameters. Copies share the immutable layer
// graph and own their parameters, so a copy is a parameter snapshot.
class Model {
 public:
  Model(ModelSpec spec, std::uint64_t init_seed);

  const ModelSpec& spec() const { return spec_; }
  const nn::Network& network() const { return *net_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  const features::FeatureVariant& variant() const { return features::variant(spec_.variant); }

  // Evaluation-mode class probabilities, N x 15.
  nn::Tensor predict(const nn::Tensor& batch) const;
  nn::Tensor forward_train(const nn::Tensor& batch, Rng& rng, nn::Tape& tape);
  nn::LossGradients backward(const nn::Tape& tape, std::span<const int> labels) const;

  // Stacks segments into an N x input_shape batch.
  nn::Tensor make_batch(std::span<const features::Matrix* const> segments) const;

 private:
  ModelSpec spec_;
  nn::ParamStore params_;
  std::shared_ptr<const nn::Network> net_;
};

// "SPCK" checkpoints: magic, u8 version, u32-prefixed model spec text, then
// entries to the end of the file, each a u32-prefixed name, u8 rank, u32 dims
// and a float32 payload. Entries are every parameter in declaration order,
// each trainable one followed by its two Adadelta accumulators.
std::string encode_checkpoint(const Model& model);
Model decode_checkpoint(std::string_view bytes);
void save_checkpoint(const std::filesystem::path& path, const Model& model);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace ascnet::models

#endif  // ASCNET_MODELS_MODEL_HPP_
