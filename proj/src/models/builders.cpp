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

#include <algorithm>
#include <array>

#include "common/error.hpp"
#include "common/scene_classes.hpp"
#include "models/model.hpp"

namespace ascnet::models {

namespace {

using features::VariantId;
using nn::LayerSpec;

int scaled(int width, const BuildOptions& opts) {
  require(opts.width_divisor >= 1, ErrorCode::kArgument, "width divisor must be >= 1");
  return std::max(1, width / opts.width_divisor);
}

nn::Shape image_input(VariantId v, const BuildOptions& opts) {
  if (opts.input_shape) return *opts.input_shape;
  const auto& fv = features::variant(v);
  return {static_cast<std::size_t>(fv.segment_frames), static_cast<std::size_t>(fv.n_mels), 1};
}

nn::Shape sequence_input(VariantId v, const BuildOptions& opts) {
  if (opts.input_shape) return *opts.input_shape;
  const auto& fv = features::variant(v);
  return {static_cast<std::size_t>(fv.segment_frames), static_cast<std::size_t>(fv.n_mels)};
}

void conv_bn_relu(std::vector<LayerSpec>& out, LayerSpec conv) {
  out.push_back(std::move(conv));
  out.push_back(nn::batchnorm_spec());
  out.push_back(nn::relu_spec());
}

constexpr int kClasses = static_cast<int>(kNumClasses);

struct ModelInfo {
  ModelId id;
  std::string_view name;
  VariantId variant;
};

constexpr std::array<ModelInfo, 6> kModels = {{
    {ModelId::kCnnV1, "cnn-v1", VariantId::kV2},
    {ModelId::kCnnV2_1, "cnn-v2-1", VariantId::kV1},
    {ModelId::kCnnV2_2, "cnn-v2-2", VariantId::kV1},
    {ModelId::kCnnV2_3, "cnn-v2-3", VariantId::kV1},
    {ModelId::kSqueezeNet, "squeezenet", VariantId::kV1},
    {ModelId::kCnn1D, "cnn1d", VariantId::kV1},
}};

const ModelInfo& info(ModelId id) {
  for (const auto& m : kModels) {
    if (m.id == id) return m;
  }
  fail(ErrorCode::kArgument, "unknown model id");
}

}  // namespace

std::string_view model_name(ModelId id) { return info(id).name; }

VariantId model_variant(ModelId id) { return info(id).variant; }

ModelId parse_model_id(std::string_view name) {
  for (const auto& m : kModels) {
    if (m.name == name) return m.id;
  }
  std::string valid;
  for (const auto& m : kModels) {
    if (!valid.empty()) valid += ", ";
    valid += m.name;
  }
  fail(ErrorCode::kUsage, "unknown model '" + std::string(name) + "' (valid: " + valid + ")");
}

ModelSpec build_lenet(int k, VariantId v, const BuildOptions& opts) {
  require(k > 0 && k % 2 == 1, ErrorCode::kArgument, "lenet: kernel size must be odd");
  ModelSpec spec;
  spec.name = "lenet-" + std::to_string(k) + "x" + std::to_string(k);
  spec.variant = v;
  spec.input_shape = image_input(v, opts);
  auto& l = spec.layers;
  conv_bn_relu(l, nn::conv2d_spec(scaled(8, opts), k, k));
  l.push_back(nn::maxpool2d_spec(3, 2));
  conv_bn_relu(l, nn::conv2d_spec(scaled(16, opts), k, k));
  l.push_back(nn::maxpool2d_spec(3, 2));
  conv_bn_relu(l, nn::conv2d_spec(scaled(32, opts), k, k));
  l.push_back(nn::dropout_spec(0.5));
  l.push_back(nn::flatten_spec());
  l.push_back(nn::dense_spec(scaled(512, opts)));
  l.push_back(nn::relu_spec());
  l.push_back(nn::dense_spec(kClasses));
  l.push_back(nn::softmax_spec());
  return spec;
}

LayerSpec build_fire(const FireSpec& f) { return nn::fire_spec(f.squeeze, f.expand); }

ModelSpec build_squeezenet_mini(VariantId v, const BuildOptions& opts) {
  ModelSpec spec;
  spec.name = "squeezenet";
  spec.variant = v;
  spec.input_shape = image_input(v, opts);
  auto& l = spec.layers;
  auto fire = [&](int sq, int ex) {
    l.push_back(build_fire({scaled(sq, opts), scaled(ex, opts)}));
  };
  conv_bn_relu(l, nn::conv2d_spec(scaled(64, opts), 3, 3));
  l.push_back(nn::maxpool2d_spec(2, 2));
  fire(16, 64);
  fire(16, 64);
  l.push_back(nn::maxpool2d_spec(2, 2));
  fire(32, 128);
  fire(32, 128);
  l.push_back(nn::maxpool2d_spec(2, 2));
  fire(48, 192);
  fire(64, 256);
  l.push_back(nn::dropout_spec(0.5));
  conv_bn_relu(l, nn::conv2d_spec(kClasses, 1, 1));
  l.push_back(nn::global_avg_pool_spec());
  l.push_back(nn::softmax_spec());
  return spec;
}

ModelSpec build_cnn1d(VariantId v, const BuildOptions& opts) {
  ModelSpec spec;
  spec.name = "cnn1d";
  spec.variant = v;
  spec.input_shape = sequence_input(v, opts);
  auto& l = spec.layers;
  conv_bn_relu(l, nn::conv1d_spec(scaled(64, opts), 5));
  l.push_back(nn::maxpool1d_spec(3));
  conv_bn_relu(l, nn::conv1d_spec(scaled(128, opts), 5));
  l.push_back(nn::maxpool1d_spec(3));
  conv_bn_relu(l, nn::conv1d_spec(scaled(256, opts), 5));
  l.push_back(nn::dropout_spec(0.5));
  l.push_back(nn::flatten_spec());
  l.push_back(nn::dense_spec(scaled(512, opts)));
  l.push_back(nn::relu_spec());
  l.push_back(nn::dense_spec(kClasses));
  l.push_back(nn::softmax_spec());
  return spec;
}

ModelSpec build_model(ModelId id, const BuildOptions& opts) {
  const VariantId v = model_variant(id);
  ModelSpec spec;
  switch (id) {
    case ModelId::kCnnV1:
    case ModelId::kCnnV2_1: spec = build_lenet(3, v, opts); break;
    case ModelId::kCnnV2_2: spec = build_lenet(5, v, opts); break;
    case ModelId::kCnnV2_3: spec = build_lenet(7, v, opts); break;
    case ModelId::kSqueezeNet: spec = build_squeezenet_mini(v, opts); break;
    case ModelId::kCnn1D: spec = build_cnn1d(v, opts); break;
  }
  spec.name = std::string(model_name(id));
  return spec;
}

namespace {

std::size_t count_layer(const LayerSpec& l, const nn::Shape& in) {
  switch (l.kind) {
    case nn::LayerKind::kConv2D:
      return static_cast<std::size_t>(l.units) *
                 (static_cast<std::size_t>(l.size_h * l.size_w) * in.back() + 1);
    case nn::LayerKind::kConv1D:
      return static_cast<std::size_t>(l.units) * (static_cast<std::size_t>(l.size_h) * in.back() + 1);
    case nn::LayerKind::kBatchNorm:
      return 2 * in.back();
    case nn::LayerKind::kDense:
      return static_cast<std::size_t>(l.units) * (in[0] + 1);
    case nn::LayerKind::kFire: {
      std::size_t n = 0;
      nn::Shape s = in;
      for (const auto& sub : l.branches.at(0)) {
        n += count_layer(sub, s);
        s = nn::infer_output_shape(sub, s);
      }
      for (std::size_t b = 1; b < l.branches.size(); ++b) {
        nn::Shape t = s;
        for (const auto& sub : l.branches[b]) {
          n += count_layer(sub, t);
          t = nn::infer_output_shape(sub, t);
        }
      }
      return n;
    }
    default:
      return 0;
  }
}

}  // namespace

std::size_t param_count(const ModelSpec& spec) {
  std::size_t n = 0;
  nn::Shape s = spec.input_shape;
  for (const auto& l : spec.layers) {
    n += count_layer(l, s);
    s = nn::infer_output_shape(l, s);
  }
  return n;
}

std::vector<nn::Shape> shape_trace(const ModelSpec& spec) {
  std::vector<nn::Shape> trace;
  nn::Shape s = spec.input_shape;
  for (const auto& l : spec.layers) {
    s = nn::infer_output_shape(l, s);
    trace.push_back(s);
  }
  return trace;
}

}  // namespace ascnet::models
