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

#include "nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "common/error.hpp"

namespace ascnet::nn {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

void same_shape(const Tensor& a, const Tensor& b, const char* what) {
  require(a.shape() == b.shape(), ErrorCode::kShape,
          std::string(what) + ": shape " + shape_string(a.shape()) + " vs " +
              shape_string(b.shape()));
}

std::size_t last_dim(const Tensor& x) {
  require(x.rank() >= 1, ErrorCode::kShape, "tensor has no axes");
  return x.shape().back();
}

Tensor pool(const Tensor& x, std::size_t batch, std::size_t H, std::size_t W, std::size_t C,
            std::size_t ph, std::size_t pw, Shape out_shape, std::vector<std::uint32_t>* argmax) {
  require(ph >= 1 && pw >= 1, ErrorCode::kShape, "maxpool: window must be positive");
  require(ph <= H && pw <= W, ErrorCode::kShape,
          "maxpool: window " + std::to_string(ph) + "x" + std::to_string(pw) +
              " larger than input " + std::to_string(H) + "x" + std::to_string(W));
  require(x.size() <= std::numeric_limits<std::uint32_t>::max(), ErrorCode::kShape,
          "maxpool: input too large");
  const std::size_t OH = H / ph;
  const std::size_t OW = W / pw;
  Tensor y(std::move(out_shape));
  if (argmax) argmax->assign(y.size(), 0);
  const double* in = x.data();
  std::size_t o = 0;
  for (std::size_t n = 0; n < batch; ++n) {
    const std::size_t base = n * H * W * C;
    for (std::size_t oh = 0; oh < OH; ++oh) {
      for (std::size_t ow = 0; ow < OW; ++ow) {
        for (std::size_t c = 0; c < C; ++c, ++o) {
          double best = -std::numeric_limits<double>::infinity();
          std::size_t best_idx = base + ((oh * ph) * W + ow * pw) * C + c;
          for (std::size_t i = 0; i < ph; ++i) {
            for (std::size_t j = 0; j < pw; ++j) {
              const std::size_t idx = base + ((oh * ph + i) * W + (ow * pw + j)) * C + c;
              if (in[idx] > best) {
                best = in[idx];
                best_idx = idx;
              }
            }
          }
          y[o] = best;
          if (argmax) (*argmax)[o] = static_cast<std::uint32_t>(best_idx);
        }
      }
    }
  }
  return y;
}

}  // namespace

Tensor relu(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& dy, const Tensor& y) {
  same_shape(dy, y, "relu_backward");
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!(y[i] > 0.0)) dx[i] = 0.0;
  }
  return dx;
}

Tensor maxpool2d(const Tensor& x, std::size_t ph, std::size_t pw,
                 std::vector<std::uint32_t>* argmax) {
  require(x.rank() == 4, ErrorCode::kShape, "maxpool2d: input must be N x H x W x C");
  const std::size_t N = x.dim(0), H = x.dim(1), W = x.dim(2), C = x.dim(3);
  return pool(x, N, H, W, C, ph, pw, {N, ph ? H / ph : 0, pw ? W / pw : 0, C}, argmax);
}

Tensor maxpool1d(const Tensor& x, std::size_t p, std::vector<std::uint32_t>* argmax) {
  require(x.rank() == 3, ErrorCode::kShape, "maxpool1d: input must be N x T x C");
  const std::size_t N = x.dim(0), T = x.dim(1), C = x.dim(2);
  return pool(x, N, T, 1, C, p, 1, {N, p ? T / p : 0, C}, argmax);
}

Tensor maxpool_backward(const Tensor& dy, const Shape& input_shape,
                        const std::vector<std::uint32_t>& argmax) {
  require(argmax.size() == dy.size(), ErrorCode::kShape, "maxpool_backward: argmax size mismatch");
  Tensor dx(input_shape);
  for (std::size_t o = 0; o < dy.size(); ++o) dx[argmax[o]] += dy[o];
  return dx;
}

Tensor global_avg_pool(const Tensor& x) {
  require(x.rank() >= 2, ErrorCode::kShape, "global_avg_pool: input must be N x ... x C");
  const std::size_t N = x.dim(0);
  const std::size_t C = last_dim(x);
  const std::size_t spatial = x.size() / (N * C);
  Tensor y({N, C});
  const double inv = 1.0 / static_cast<double>(spatial);
  for (std::size_t n = 0; n < N; ++n) {
    const double* in = x.data() + n * spatial * C;
    for (std::size_t s = 0; s < spatial; ++s) {
      for (std::size_t c = 0; c < C; ++c) y[n * C + c] += in[s * C + c];
    }
    for (std::size_t c = 0; c < C; ++c) y[n * C + c] *= inv;
  }
  return y;
}

Tensor global_avg_pool_backward(const Tensor& dy, const Shape& input_shape) {
  Tensor dx(input_shape);
  const std::size_t N = input_shape.front();
  const std::size_t C = input_shape.back();
  const std::size_t spatial = dx.size() / (N * C);
  require(dy.size() == N * C, ErrorCode::kShape, "global_avg_pool_backward: shape mismatch");
  const double inv = 1.0 / static_cast<double>(spatial);
  for (std::size_t n = 0; n < N; ++n) {
    double* out = dx.data() + n * spatial * C;
    for (std::size_t s = 0; s < spatial; ++s) {
      for (std::size_t c = 0; c < C; ++c) out[s * C + c] = dy[n * C + c] * inv;
    }
  }
  return dx;
}

Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b) {
  require(w.rank() == 2, ErrorCode::kShape, "dense: weights must be m x n");
  require(x.rank() == 1 || x.rank() == 2, ErrorCode::kShape, "dense: input must be n or N x n");
  const std::size_t n = last_dim(x);
  const std::size_t N = x.rank() == 2 ? x.dim(0) : 1;
  const std::size_t m = w.dim(0);
  require(w.dim(1) == n, ErrorCode::kShape,
          "dense: input width " + std::to_string(n) + " does not match weights " +
              shape_string(w.shape()));
  require(b.size() == m, ErrorCode::kShape, "dense: bias length mismatch");
  Tensor y(x.rank() == 2 ? Shape{N, m} : Shape{m});
  MutMap out(y.data(), static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(m));
  out.noalias() = ConstMap(x.data(), static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(n)) *
                  ConstMap(w.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)).transpose();
  out.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(b.data(), static_cast<Eigen::Index>(m));
  return y;
}

Tensor dense_backward(const Tensor& dy, const Tensor& x, const Tensor& w, Tensor& dw, Tensor& db) {
  const auto n = static_cast<Eigen::Index>(w.dim(1));
  const auto m = static_cast<Eigen::Index>(w.dim(0));
  const auto N = static_cast<Eigen::Index>(x.size() / w.dim(1));
  require(dy.size() == static_cast<std::size_t>(N * m), ErrorCode::kShape,
          "dense_backward: output gradient shape mismatch");
  ConstMap g(dy.data(), N, m);
  ConstMap in(x.data(), N, n);
  MutMap(dw.data(), m, n).noalias() += g.transpose() * in;
  Eigen::Map<Eigen::RowVectorXd>(db.data(), m) += g.colwise().sum();
  Tensor dx(x.shape());
  MutMap(dx.data(), N, n).noalias() = g * ConstMap(w.data(), m, n);
  return dx;
}

Tensor dropout(const Tensor& x, double rate, bool training, Rng& rng, Tensor* mask) {
  require(rate >= 0.0 && rate < 1.0, ErrorCode::kArgument, "dropout: rate must be in [0, 1)");
  if (!training || rate == 0.0) {
    if (mask) *mask = Tensor(x.shape(), 1.0);
    return x;
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  Tensor m(x.shape());
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m[i] = rng.uniform() < rate ? 0.0 : keep_scale;
    y[i] = x[i] * m[i];
  }
  if (mask) *mask = std::move(m);
  return y;
}

Tensor batchnorm_train(const Tensor& x, const Tensor& gain, const Tensor& shift,
                       Tensor& running_mean, Tensor& running_var, double momentum,
                       BatchNormCache* cache) {
  const std::size_t C = last_dim(x);
  require(x.size() > 0 && x.dim(0) > 0, ErrorCode::kArgument, "batchnorm: empty batch");
  require(gain.size() == C && shift.size() == C && running_mean.size() == C &&
              running_var.size() == C,
          ErrorCode::kShape, "batchnorm: parameter length does not match channels");
  const std::size_t M = x.size() / C;
  std::vector<double> mean(C, 0.0), var(C, 0.0);
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = 0; c < C; ++c) mean[c] += x[r * C + c];
  }
  for (std::size_t c = 0; c < C; ++c) mean[c] /= static_cast<double>(M);
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      const double d = x[r * C + c] - mean[c];
      var[c] += d * d;
    }
  }
  std::vector<double> inv_std(C);
  for (std::size_t c = 0; c < C; ++c) {
    var[c] /= static_cast<double>(M);
    inv_std[c] = 1.0 / std::sqrt(var[c] + kBatchNormEpsilon);
    running_mean[c] = momentum * running_mean[c] + (1.0 - momentum) * mean[c];
    running_var[c] = momentum * running_var[c] + (1.0 - momentum) * var[c];
  }
  Tensor xhat(x.shape());
  Tensor y(x.shape());
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t i = r * C + c;
      xhat[i] = (x[i] - mean[c]) * inv_std[c];
      y[i] = gain[c] * xhat[i] + shift[c];
    }
  }
  if (cache) {
    cache->normalized = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Tensor batchnorm_eval(const Tensor& x, const Tensor& gain, const Tensor& shift,
                      const Tensor& running_mean, const Tensor& running_var) {
  const std::size_t C = last_dim(x);
  require(x.size() > 0, ErrorCode::kArgument, "batchnorm: empty batch");
  require(gain.size() == C && shift.size() == C && running_mean.size() == C &&
              running_var.size() == C,
          ErrorCode::kShape, "batchnorm: parameter length does not match channels");
  std::vector<double> scale(C), offset(C);
  for (std::size_t c = 0; c < C; ++c) {
    scale[c] = gain[c] / std::sqrt(running_var[c] + kBatchNormEpsilon);
    offset[c] = shift[c] - running_mean[c] * scale[c];
  }
  Tensor y(x.shape());
  const std::size_t M = x.size() / C;
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = 0; c < C; ++c) y[r * C + c] = x[r * C + c] * scale[c] + offset[c];
  }
  return y;
}

Tensor batchnorm_backward(const Tensor& dy, const Tensor& gain, const BatchNormCache& cache,
                          Tensor& dgain, Tensor& dshift) {
  const Tensor& xhat = cache.normalized;
  same_shape(dy, xhat, "batchnorm_backward");
  const std::size_t C = last_dim(dy);
  const std::size_t M = dy.size() / C;
  std::vector<double> sum_dy(C, 0.0), sum_dy_xhat(C, 0.0);
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t i = r * C + c;
      sum_dy[c] += dy[i];
      sum_dy_xhat[c] += dy[i] * xhat[i];
    }
  }
  for (std::size_t c = 0; c < C; ++c) {
    dshift[c] += sum_dy[c];
    dgain[c] += sum_dy_xhat[c];
  }
  Tensor dx(dy.shape());
  const double inv_m = 1.0 / static_cast<double>(M);
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t i = r * C + c;
      dx[i] = gain[c] * cache.inv_std[c] *
              (dy[i] - inv_m * sum_dy[c] - xhat[i] * inv_m * sum_dy_xhat[c]);
    }
  }
  return dx;
}

Tensor softmax(const Tensor& logits) {
  const std::size_t K = last_dim(logits);
  const std::size_t rows = logits.size() / K;
  Tensor p(logits.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* z = logits.data() + r * K;
    double* out = p.data() + r * K;
    const double mx = *std::max_element(z, z + K);
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      out[k] = std::exp(z[k] - mx);
      sum += out[k];
    }
    for (std::size_t k = 0; k < K; ++k) out[k] /= sum;
  }
  return p;
}

Tensor softmax_backward(const Tensor& dy, const Tensor& p) {
  same_shape(dy, p, "softmax_backward");
  const std::size_t K = last_dim(p);
  const std::size_t rows = p.size() / K;
  Tensor dx(p.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    double dot = 0.0;
    for (std::size_t k = 0; k < K; ++k) dot += dy[r * K + k] * p[r * K + k];
    for (std::size_t k = 0; k < K; ++k) dx[r * K + k] = p[r * K + k] * (dy[r * K + k] - dot);
  }
  return dx;
}

CrossEntropy cross_entropy(const Tensor& probs, std::span<const int> labels) {
  const std::size_t K = last_dim(probs);
  const std::size_t rows = probs.size() / K;
  require(labels.size() == rows, ErrorCode::kShape,
          "cross_entropy: " + std::to_string(labels.size()) + " labels for " +
              std::to_string(rows) + " predictions");
  CrossEntropy out{0.0, probs};
  for (std::size_t r = 0; r < rows; ++r) {
    const int label = labels[r];
    require(label >= 0 && static_cast<std::size_t>(label) < K, ErrorCode::kArgument,
            "cross_entropy: label " + std::to_string(label) + " outside [0, " +
                std::to_string(K) + ")");
    const std::size_t i = r * K + static_cast<std::size_t>(label);
    out.loss -= std::log(probs[i]);
    out.grad_logits[i] -= 1.0;
  }
  return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  require(a.rank() == b.rank() && a.rank() >= 1, ErrorCode::kShape, "concat: rank mismatch");
  for (std::size_t i = 0; i + 1 < a.rank(); ++i) {
    require(a.dim(i) == b.dim(i), ErrorCode::kShape,
            "concat: leading dimensions differ (" + shape_string(a.shape()) + " vs " +
                shape_string(b.shape()) + ")");
  }
  const std::size_t ca = last_dim(a), cb = last_dim(b);
  const std::size_t rows = a.size() / ca;
  Shape shape = a.shape();
  shape.back() = ca + cb;
  Tensor y(shape);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(a.data() + r * ca, ca, y.data() + r * (ca + cb));
    std::copy_n(b.data() + r * cb, cb, y.data() + r * (ca + cb) + ca);
  }
  return y;
}

void split_channels(const Tensor& dy, std::size_t ca, Tensor& da, Tensor& db) {
  const std::size_t c = last_dim(dy);
  require(ca < c, ErrorCode::kShape, "split: channel split point out of range");
  const std::size_t cb = c - ca;
  const std::size_t rows = dy.size() / c;
  Shape sa = dy.shape(), sb = dy.shape();
  sa.back() = ca;
  sb.back() = cb;
  da = Tensor(sa);
  db = Tensor(sb);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(dy.data() + r * c, ca, da.data() + r * ca);
    std::copy_n(dy.data() + r * c + ca, cb, db.data() + r * cb);
  }
}

}  // namespace ascnet::nn
