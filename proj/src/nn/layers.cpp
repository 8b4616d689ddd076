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

#include "nn/layers.hpp"

#include <cmath>

#include "common/error.hpp"
#include "nn/conv.hpp"
#include "nn/network.hpp"
#include "nn/ops.hpp"

namespace ascnet::nn {

namespace {

Shape with_batch(std::size_t n, const Shape& sample) {
  Shape s{n};
  s.insert(s.end(), sample.begin(), sample.end());
  return s;
}

std::size_t batch_of(const Tensor& t) { return t.rank() ? t.dim(0) : 0; }

Tensor glorot(const Shape& shape, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t(shape);
  for (double& v : t.values()) v = rng.uniform(-limit, limit);
  return t;
}

// ---------------------------------------------------------------------------

class ConvLayer final : public Layer {
 public:
  ConvLayer(const LayerSpec& spec, const Shape& in, const std::string& name, ParamStore& params,
            Rng& rng)
      : Layer(spec, in, infer_output_shape(spec, in)) {
    const bool one_d = spec.kind == LayerKind::kConv1D;
    geom_.height = in[0];
    geom_.width = one_d ? 1 : in[1];
    geom_.in_channels = in.back();
    geom_.out_channels = static_cast<std::size_t>(spec.units);
    geom_.kernel_h = static_cast<std::size_t>(spec.size_h);
    geom_.kernel_w = one_d ? 1 : static_cast<std::size_t>(spec.size_w);
    const std::size_t area = geom_.kernel_h * geom_.kernel_w;
    const Shape kshape = one_d ? Shape{geom_.out_channels, geom_.kernel_h, geom_.in_channels}
                               : Shape{geom_.out_channels, geom_.kernel_h, geom_.kernel_w,
                                       geom_.in_channels};
    kernel_ = params.add(name + ".kernel",
                         glorot(kshape, area * geom_.in_channels, area * geom_.out_channels, rng),
                         true);
    bias_ = params.add(name + ".bias", Tensor({geom_.out_channels}), true);
  }

  Tensor forward(const Tensor& x, const ParamStore& p) const override {
    const std::size_t n = batch_of(x);
    Tensor y(with_batch(n, output_shape()));
    std::vector<double> scratch;
    for (std::size_t i = 0; i < n; ++i) {
      conv_forward(geom_, x.data() + i * geom_.input_size(), p[kernel_].value.data(),
                   p[bias_].value.data(), y.data() + i * geom_.output_size(), scratch);
    }
    return y;
  }

  Tensor forward_train(const Tensor& x, ParamStore& p, Rng&, LayerCache& c) const override {
    c.tensors = {x};
    return forward(x, p);
  }

  Tensor backward(const Tensor& dy, const ParamStore& p, const LayerCache& c,
                  Gradients& g) const override {
    const Tensor& x = c.tensors.at(0);
    const std::size_t n = batch_of(x);
    Tensor dx(x.shape());
    std::vector<double> scratch;
    for (std::size_t i = 0; i < n; ++i) {
      conv_backward(geom_, x.data() + i * geom_.input_size(), p[kernel_].value.data(),
                    dy.data() + i * geom_.output_size(), dx.data() + i * geom_.input_size(),
                    g[kernel_].data(), g[bias_].data(), scratch);
    }
    return dx;
  }

 private:
  ConvGeometry geom_;
  std::size_t kernel_ = 0;
  std::size_t bias_ = 0;
};

class BatchNormLayer final : public Layer {
 public:
  BatchNormLayer(const LayerSpec& spec, const Shape& in, const std::string& name,
                 ParamStore& params)
      : Layer(spec, in, in) {
    const std::size_t c = in.back();
    gain_ = params.add(name + ".gain", Tensor({c}, 1.0), true);
    shift_ = params.add(name + ".shift", Tensor({c}), true);
    mean_ = params.add(name + ".running_mean", Tensor({c}), false);
    var_ = params.add(name + ".running_var", Tensor({c}, 1.0), false);
  }

  Tensor forward(const Tensor& x, const ParamStore& p) const override {
    return batchnorm_eval(x, p[gain_].value, p[shift_].value, p[mean_].value, p[var_].value);
  }

  Tensor forward_train(const Tensor& x, ParamStore& p, Rng&, LayerCache& c) const override {
    BatchNormCache bc;
    Tensor y = batchnorm_train(x, p[gain_].value, p[shift_].value, p[mean_].value,
                               p[var_].value, kBatchNormMomentum, &bc);
    const std::size_t channels = bc.inv_std.size();
    c.tensors = {std::move(bc.normalized), Tensor({channels}, std::move(bc.inv_std))};
    return y;
  }

  Tensor backward(const Tensor& dy, const ParamStore& p, const LayerCache& c,
                  Gradients& g) const override {
    const Tensor& inv = c.tensors.at(1);
    BatchNormCache bc{c.tensors.at(0), std::vector<double>(inv.values().begin(), inv.values().end())};
    return batchnorm_backward(dy, p[gain_].value, bc, g[gain_], g[shift_]);
  }

 private:
  std::size_t gain_ = 0, shift_ = 0, mean_ = 0, var_ = 0;
};

class ReluLayer final : public Layer {
 public:
  ReluLayer(const LayerSpec& spec, const Shape& in) : Layer(spec, in, in) {}

  Tensor forward(const Tensor& x, const ParamStore&) const override { return relu(x); }

  Tensor forward_train(const Tensor& x, ParamStore&, Rng&, LayerCache& c) const override {
    Tensor y = relu(x);
    c.tensors = {y};
    return y;
  }

  Tensor backward(const Tensor& dy, const ParamStore&, const LayerCache& c,
                  Gradients&) const override {
    return relu_backward(dy, c.tensors.at(0));
  }
};

class MaxPoolLayer final : public Layer {
 public:
  MaxPoolLayer(const LayerSpec& spec, const Shape& in)
      : Layer(spec, in, infer_output_shape(spec, in)) {}

  Tensor forward(const Tensor& x, const ParamStore&) const override { return pool(x, nullptr); }

  Tensor forward_train(const Tensor& x, ParamStore&, Rng&, LayerCache& c) const override {
    return pool(x, &c.indices);
  }

  Tensor backward(const Tensor& dy, const ParamStore&, const LayerCache& c,
                  Gradients&) const override {
    return maxpool_backward(dy, with_batch(batch_of(dy), input_shape()), c.indices);
  }

 private:
  Tensor pool(const Tensor& x, std::vector<std::uint32_t>* argmax) const {
    const auto ph = static_cast<std::size_t>(spec().size_h);
    if (spec().kind == LayerKind::kMaxPool1D) return maxpool1d(x, ph, argmax);
    return maxpool2d(x, ph, static_cast<std::size_t>(spec().size_w), argmax);
  }
};

class GlobalAvgPoolLayer final : public Layer {
 public:
  GlobalAvgPoolLayer(const LayerSpec& spec, const Shape& in)
      : Layer(spec, in, infer_output_shape(spec, in)) {}

  Tensor forward(const Tensor& x, const ParamStore&) const override { return global_avg_pool(x); }

  Tensor forward_train(const Tensor& x, ParamStore&, Rng&, LayerCache&) const override {
    return global_avg_pool(x);
  }

  Tensor backward(const Tensor& dy, const ParamStore&, const LayerCache&,
                  Gradients&) const override {
    return global_avg_pool_backward(dy, with_batch(batch_of(dy), input_shape()));
  }
};

class FlattenLayer final : public Layer {
 public:
  FlattenLayer(const LayerSpec& spec, const Shape& in)
      : Layer(spec, in, infer_output_shape(spec, in)) {}

  Tensor forward(const Tensor& x, const ParamStore&) const override {
    return x.reshaped(with_batch(batch_of(x), output_shape()));
  }

  Tensor forward_train(const Tensor& x, ParamStore& p, Rng&, LayerCache&) const override {
    return forward(x, p);
  }

  Tensor backward(const Tensor& dy, const ParamStore&, const LayerCache&,
                  Gradients&) const override {
    return dy.reshaped(with_batch(batch_of(dy), input_shape()));
  }
};

class DenseLayer final : public Layer {
 public:
  DenseLayer(const LayerSpec& spec, const Shape& in, const std::string& name, ParamStore& params,
             Rng& rng)
      : Layer(spec, in, infer_output_shape(spec, in)) {
    const std::size_t n = in[0];
    const auto m = static_cast<std::size_t>(spec.units);
    weight_ = params.add(name + ".weight", glorot({m, n}, n, m, rng), true);
    bias_ = params.add(name + ".bias", Tensor({m}), true);
  }

  Tensor forward(const Tensor& x, const ParamStore& p) const override {
    return dense(x, p[weight_].value, p[bias_].value);
  }

  Tensor forward_train(const Tensor& x, ParamStore& p, Rng&, LayerCache& c) const override {
    c.tensors = {x};
    return forward(x, p);
  }

  Tensor backward(const Tensor& dy, const ParamStore& p, const LayerCache& c,
                  Gradients& g) const override {
    return dense_backward(dy, c.tensors.at(0), p[weight_].value, g[weight_], g[bias_]);
  }

 private:
  std::size_t weight_ = 0, bias_ = 0;
};

class DropoutLayer final : public Layer {
 public:
  DropoutLayer(const LayerSpec& spec, const Shape& in) : Layer(spec, in, in) {}

  Tensor forward(const Tensor& x, const ParamStore&) const override { return x; }

  Tensor forward_train(const Tensor& x, ParamStore&, Rng& rng, LayerCache& c) const override {
    Tensor mask;
    Tensor y = dropout(x, spec().rate, true, rng, &mask);
    c.tensors = {std::move(mask)};
    return y;
  }

  Tensor backward(const Tensor& dy, const ParamStore&, const LayerCache& c,
                  Gradients&) const override {
    const Tensor& mask = c.tensors.at(0);
    Tensor dx = dy;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= mask[i];
    return dx;
  }
};

class SoftmaxLayer final : public Layer {
 public:
  SoftmaxLayer(const LayerSpec& spec, const Shape& in) : Layer(spec, in, in) {}

  Tensor forward(const Tensor& x, const ParamStore&) const override { return softmax(x); }

  Tensor forward_train(const Tensor& x, ParamStore&, Rng&, LayerCache& c) const override {
    Tensor y = softmax(x);
    c.tensors = {y};
    return y;
  }

  Tensor backward(const Tensor& dy, const ParamStore&, const LayerCache& c,
                  Gradients&) const override {
    return softmax_backward(dy, c.tensors.at(0));
  }
};

// Squeeze stem feeding two expand paths whose outputs are concatenated.
class FireLayer final : public Layer {
 public:
  FireLayer(const LayerSpec& spec, const Shape& in, const std::string& name, ParamStore& params,
            Rng& rng)
      : Layer(spec, in, infer_output_shape(spec, in)),
        squeeze_(spec.branches.at(0), in, params, rng, name + ".squeeze."),
        expand1_(spec.branches.at(1), squeeze_.output_shape(), params, rng, name + ".expand1x1."),
        expand3_(spec.branches.at(2), squeeze_.output_shape(), params, rng, name + ".expand3x3.") {}

  Tensor forward(const Tensor& x, const ParamStore& p) const override {
    const Tensor s = squeeze_.forward(x, p);
    return concat_channels(expand1_.forward(s, p), expand3_.forward(s, p));
  }

  Tensor forward_train(const Tensor& x, ParamStore& p, Rng& rng, LayerCache& c) const override {
    Tape ts, t1, t3;
    const Tensor s = squeeze_.forward_train(x, p, rng, ts);
    Tensor a = expand1_.forward_train(s, p, rng, t1);
    Tensor b = expand3_.forward_train(s, p, rng, t3);
    c.tapes = {std::move(ts.caches), std::move(t1.caches), std::move(t3.caches)};
    return concat_channels(a, b);
  }

  Tensor backward(const Tensor& dy, const ParamStore& p, const LayerCache& c,
                  Gradients& g) const override {
    Tensor da, db;
    split_channels(dy, expand1_.output_shape().back(), da, db);
    Tensor ds = expand1_.backward(da, p, c.tapes.at(1), g, expand1_.layer_count());
    const Tensor ds3 = expand3_.backward(db, p, c.tapes.at(2), g, expand3_.layer_count());
    for (std::size_t i = 0; i < ds.size(); ++i) ds[i] += ds3[i];
    return squeeze_.backward(ds, p, c.tapes.at(0), g, squeeze_.layer_count());
  }

 private:

  Network squeeze_;
  Network expand1_;
  Network expand3_;
};

}  // namespace

Shape infer_output_shape(const LayerSpec& spec, const Shape& in) {
  const std::string what(layer_kind_name(spec.kind));
  auto need_rank = [&](std::size_t r) {
    require(in.size() == r, ErrorCode::kShape,
            what + " expects a rank-" + std::to_string(r) + " input, got " + shape_string(in));
  };
  switch (spec.kind) {
    case LayerKind::kConv2D:
      need_rank(3);
      return {in[0], in[1], static_cast<std::size_t>(spec.units)};
    case LayerKind::kConv1D:
      need_rank(2);
      return {in[0], static_cast<std::size_t>(spec.units)};
    case LayerKind::kMaxPool2D: {
      need_rank(3);
      const auto ph = static_cast<std::size_t>(spec.size_h);
      const auto pw = static_cast<std::size_t>(spec.size_w);
      require(ph <= in[0] && pw <= in[1], ErrorCode::kShape,
              "maxpool2d window " + std::to_string(ph) + "x" + std::to_string(pw) +
                  " larger than input " + shape_string(in));
      return {in[0] / ph, in[1] / pw, in[2]};
    }
    case LayerKind::kMaxPool1D: {
      need_rank(2);
      const auto p = static_cast<std::size_t>(spec.size_h);
      require(p <= in[0], ErrorCode::kShape,
              "maxpool1d window " + std::to_string(p) + " larger than input " + shape_string(in));
      return {in[0] / p, in[1]};
    }
    case LayerKind::kGlobalAvgPool:
      require(in.size() >= 2, ErrorCode::kShape, "globalavgpool needs spatial axes, got " + shape_string(in));
      return {in.back()};
    case LayerKind::kFlatten:
      return {shape_size(in)};
    case LayerKind::kDense:
      need_rank(1);
      return {static_cast<std::size_t>(spec.units)};
    case LayerKind::kSoftmax:
      need_rank(1);
      return in;
    case LayerKind::kBatchNorm:
    case LayerKind::kReLU:
    case LayerKind::kDropout:
      require(!in.empty(), ErrorCode::kShape, what + " needs at least one axis");
      return in;
    case LayerKind::kFire: {
      need_rank(3);
      return {in[0], in[1], static_cast<std::size_t>(2 * spec.expand)};
    }
    case LayerKind::kConcat:
      break;
  }
  fail(ErrorCode::kShape, what + " cannot appear as a standalone layer");
}

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const Shape& in, const std::string& name,
                                  ParamStore& params, Rng& rng) {
  switch (spec.kind) {
    case LayerKind::kConv2D:
    case LayerKind::kConv1D:
      return std::make_unique<ConvLayer>(spec, in, name, params, rng);
    case LayerKind::kBatchNorm:
      return std::make_unique<BatchNormLayer>(spec, in, name, params);
    case LayerKind::kReLU:
      return std::make_unique<ReluLayer>(spec, in);
    case LayerKind::kMaxPool2D:
    case LayerKind::kMaxPool1D:
      return std::make_unique<MaxPoolLayer>(spec, in);
    case LayerKind::kGlobalAvgPool:
      return std::make_unique<GlobalAvgPoolLayer>(spec, in);
    case LayerKind::kFlatten:
      return std::make_unique<FlattenLayer>(spec, in);
    case LayerKind::kDense:
      return std::make_unique<DenseLayer>(spec, in, name, params, rng);
    case LayerKind::kDropout:
      return std::make_unique<DropoutLayer>(spec, in);
    case LayerKind::kSoftmax:
      return std::make_unique<SoftmaxLayer>(spec, in);
    case LayerKind::kFire:
      return std::make_unique<FireLayer>(spec, in, name, params, rng);
    case LayerKind::kConcat:
      break;
  }
  fail(ErrorCode::kShape, "concat cannot appear as a standalone layer");
}

}  // namespace ascnet::nn
