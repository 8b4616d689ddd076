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

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/files.hpp"
#include "features/features.hpp"

namespace ascnet::features {

namespace {

constexpr std::string_view kMagic = "LMSF";
constexpr std::uint8_t kVersion = 1;

}  // namespace

std::string encode_lmsf(const LogMelSpectrogram& spec) {
  ByteWriter w;
  w.put_bytes(kMagic);
  w.put_u8(kVersion);
  w.put_u8(static_cast<std::uint8_t>(spec.variant));
  w.put_u32(static_cast<std::uint32_t>(spec.data.rows()));
  w.put_u32(static_cast<std::uint32_t>(spec.data.cols()));
  for (Eigen::Index r = 0; r < spec.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < spec.data.cols(); ++c) {
      w.put_f32(static_cast<float>(spec.data(r, c)));
    }
  }
  return std::move(w).bytes();
}

LogMelSpectrogram decode_lmsf(std::string_view bytes) {
  ByteReader r(bytes, "LMSF");
  if (r.take(4) != kMagic) fail(ErrorCode::kFormat, "LMSF: bad magic");
  const std::uint8_t version = r.u8();
  if (version != kVersion) {
    fail(ErrorCode::kFormat, "LMSF: unsupported version " + std::to_string(version));
  }
  const std::uint8_t id = r.u8();
  if (id != static_cast<std::uint8_t>(VariantId::kV1) &&
      id != static_cast<std::uint8_t>(VariantId::kV2)) {
    fail(ErrorCode::kFormat, "LMSF: unknown variant id " + std::to_string(id));
  }
  const std::uint32_t rows = r.u32();
  const std::uint32_t cols = r.u32();
  if (static_cast<std::uint64_t>(rows) * cols * 4 != r.remaining()) {
    fail(ErrorCode::kFormat, "LMSF: payload size does not match header");
  }
  LogMelSpectrogram spec{Matrix(rows, cols), static_cast<VariantId>(id)};
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) spec.data(i, j) = r.f32();
  }
  return spec;
}

void save_lmsf(const std::filesystem::path& path, const LogMelSpectrogram& spec) {
  write_file_atomic(path, encode_lmsf(spec));
}

LogMelSpectrogram load_lmsf(const std::filesystem::path& path) {
  try {
    return decode_lmsf(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace ascnet::features
