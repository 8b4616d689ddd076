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

#ifndef ASCNET_COMMON_BINARY_IO_HPP_
#define ASCNET_COMMON_BINARY_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace ascnet {

// Little-endian encoder appending to a byte string.
class ByteWriter {
 public:
  void put_bytes(std::string_view bytes) { out_.append(bytes); }
  void put_u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void put_u16(std::uint16_t v);
  void put_u32(std::uint32_t v);
  void put_f32(float v);
  // u32 length prefix followed by the raw bytes.
  void put_string(std::string_view s);

  const std::string& bytes() const& { return out_; }
  std::string bytes() && { return std::move(out_); }

 private:
  std::string out_;
};

// Bounds-checked little-endian decoder. Truncated input throws
// Error(kFormat) naming `what`.
class ByteReader {
 public:
  ByteReader(std::string_view data, std::string what)
      : data_(data), what_(std::move(what)) {}

  std::string_view take(std::size_t n);
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  float f32();
  std::string string();

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
  std::string what_;
};

}  // namespace ascnet

#endif  // ASCNET_COMMON_BINARY_IO_HPP_
