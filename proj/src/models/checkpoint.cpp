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

#include <cmath>
#include <limits>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/files.hpp"
#include "models/model.hpp"

namespace ascnet::models {

namespace {

constexpr std::string_view kMagic = "SPCK";
constexpr std::uint8_t kVersion = 1;
constexpr std::string_view kGradSqSuffix = ".adadelta_grad_sq";
constexpr std::string_view kUpdateSqSuffix = ".adadelta_update_sq";

void put_entry(ByteWriter& w, const std::string& name, const nn::Tensor& t) {
  w.put_string(name);
  require(t.rank() <= std::numeric_limits<std::uint8_t>::max(), ErrorCode::kArgument,
          "checkpoint: tensor rank too large");
  w.put_u8(static_cast<std::uint8_t>(t.rank()));
  for (std::size_t d : t.shape()) w.put_u32(static_cast<std::uint32_t>(d));
  for (double v : t.values()) w.put_f32(static_cast<float>(v));
}

void read_entry(ByteReader& r, const std::string& expected_name, nn::Tensor& target) {
  const std::string name = r.string();
  if (name != expected_name) {
    fail(ErrorCode::kFormat,
         "checkpoint: expected entry '" + expected_name + "', found '" + name + "'");
  }
  const std::size_t rank = r.u8();
  nn::Shape shape(rank);
  for (auto& d : shape) d = r.u32();
  if (shape != target.shape()) {
    fail(ErrorCode::kFormat, "checkpoint: entry '" + name + "' has shape " +
                                 nn::shape_string(shape) + ", model expects " +
                                 nn::shape_string(target.shape()));
  }
  for (double& v : target.values()) v = static_cast<double>(r.f32());
}

}  // namespace

std::string encode_checkpoint(const Model& model) {
  ByteWriter w;
  w.put_bytes(kMagic);
  w.put_u8(kVersion);
  w.put_string(model.spec().to_text());
  for (const nn::Parameter& p : model.params()) {
    put_entry(w, p.name, p.value);
    if (p.trainable) {
      put_entry(w, p.name + std::string(kGradSqSuffix), p.grad_sq_avg);
      put_entry(w, p.name + std::string(kUpdateSqSuffix), p.update_sq_avg);
    }
  }
  return std::move(w).bytes();
}

Model decode_checkpoint(std::string_view bytes) {
  ByteReader r(bytes, "checkpoint");
  if (bytes.size() < kMagic.size() || r.take(kMagic.size()) != kMagic) {
    fail(ErrorCode::kFormat, "checkpoint: bad magic");
  }
  const std::uint8_t version = r.u8();
  require(version == kVersion, ErrorCode::kFormat,
          "checkpoint: unsupported version " + std::to_string(version));
  ModelSpec spec;
  try {
    spec = ModelSpec::parse(r.string());
  } catch (const Error& e) {
    fail(ErrorCode::kFormat, std::string("checkpoint: embedded model spec: ") + e.what());
  }
  Model model(std::move(spec), 0);
  for (nn::Parameter& p : model.params()) {
    read_entry(r, p.name, p.value);
    if (p.trainable) {
      read_entry(r, p.name + std::string(kGradSqSuffix), p.grad_sq_avg);
      read_entry(r, p.name + std::string(kUpdateSqSuffix), p.update_sq_avg);
    }
  }
  require(r.done(), ErrorCode::kFormat, "checkpoint: trailing entries do not match the model");
  return model;
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  write_file_atomic(path, encode_checkpoint(model));
}

Model load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file(path));
}

}  // namespace ascnet::models
