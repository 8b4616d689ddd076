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
#include <cmath>
#include <cstdint>

#include "audio/audio_clip.hpp"
#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/files.hpp"

namespace ascnet::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

FormatChunk parse_format(std::string_view body) {
  if (body.size() < 16) fail(ErrorCode::kDecode, "wav: fmt chunk too short");
  ByteReader r(body, "wav fmt chunk");
  FormatChunk f;
  f.format = r.u16();
  f.channels = r.u16();
  f.sample_rate = r.u32();
  r.u32();  // byte rate
  f.block_align = r.u16();
  f.bits = r.u16();
  if (f.format == kFormatExtensible) {
    if (body.size() < 40) fail(ErrorCode::kDecode, "wav: truncated extensible fmt chunk");
    r.u16();  // cbSize
    r.u16();  // valid bits
    r.u32();  // channel mask
    // The first two bytes of the sub-format GUID carry the format tag.
    f.format = r.u16();
  }
  return f;
}

std::int32_t read_sample(const unsigned char* p, int bits) {
  if (bits == 16) {
    return static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0] | (p[1] << 8)));
  }
  // 24-bit: three little-endian bytes, sign-extended.
  std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                    (static_cast<std::uint32_t>(p[1]) << 8) |
                    (static_cast<std::uint32_t>(p[2]) << 16);
  if (u & 0x800000u) u |= 0xFF000000u;
  return static_cast<std::int32_t>(u);
}

}  // namespace

AudioClip AudioClip::mono(std::vector<double> samples, int sample_rate) {
  AudioClip clip;
  clip.channels.push_back(std::move(samples));
  clip.sample_rate = sample_rate;
  return clip;
}

AudioClip decode_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    fail(ErrorCode::kDecode, "wav: missing RIFF/WAVE header");
  }
  ByteReader r(bytes.substr(12), "wav chunk list");
  FormatChunk fmt;
  bool have_fmt = false;
  std::string_view data;
  bool have_data = false;
  while (r.remaining() >= 8) {
    std::string_view id = r.take(4);
    std::uint32_t size = r.u32();
    // Streaming writers leave 0 or 0xFFFFFFFF on a final data chunk.
    if (id == "data" && (size == 0 || size == 0xffffffffu)) {
      size = static_cast<std::uint32_t>(r.remaining());
    }
    if (size > r.remaining()) {
      fail(ErrorCode::kDecode, "wav: chunk '" + std::string(id) + "' overruns file");
    }
    std::string_view body = r.take(size);
    if (size % 2 == 1 && r.remaining() > 0) r.take(1);
    if (id == "fmt ") {
      fmt = parse_format(body);
      have_fmt = true;
    } else if (id == "data") {
      data = body;
      have_data = true;
    }
  }
  if (!have_fmt) fail(ErrorCode::kDecode, "wav: no fmt chunk");
  if (!have_data) fail(ErrorCode::kDecode, "wav: no data chunk");

  if (fmt.format == kFormatIeeeFloat) {
    fail(ErrorCode::kUnsupportedFormat, "wav: floating-point PCM is not supported");
  }
  if (fmt.format != kFormatPcm) {
    fail(ErrorCode::kUnsupportedFormat,
         "wav: unsupported encoding tag " + std::to_string(fmt.format));
  }
  if (fmt.bits != 16 && fmt.bits != 24) {
    fail(ErrorCode::kUnsupportedFormat,
         "wav: unsupported bit depth " + std::to_string(fmt.bits));
  }
  if (fmt.channels < 1 || fmt.channels > 2) {
    fail(ErrorCode::kUnsupportedFormat,
         "wav: unsupported channel count " + std::to_string(fmt.channels));
  }
  if (fmt.sample_rate == 0) fail(ErrorCode::kDecode, "wav: zero sample rate");
  const std::size_t bytes_per_sample = fmt.bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  if (fmt.block_align != frame_bytes) {
    fail(ErrorCode::kDecode, "wav: block alignment does not match format");
  }

  const std::size_t frames = data.size() / frame_bytes;
  const double scale = 1.0 / static_cast<double>(1u << (fmt.bits - 1));
  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt.sample_rate);
  clip.channels.assign(fmt.channels, std::vector<double>(frames));
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      clip.channels[c][i] = read_sample(p, fmt.bits) * scale;
      p += bytes_per_sample;
    }
  }
  return clip;
}

AudioClip load_wav(const std::filesystem::path& path) {
  try {
    return decode_wav(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string encode_wav(const AudioClip& clip, int bits) {
  require(bits == 16 || bits == 24, ErrorCode::kArgument, "wav: bits must be 16 or 24");
  require(clip.channel_count() >= 1 && clip.channel_count() <= 2, ErrorCode::kArgument,
          "wav: 1 or 2 channels required");
  require(clip.sample_rate > 0, ErrorCode::kArgument, "wav: sample rate must be positive");
  const std::uint32_t channels = static_cast<std::uint32_t>(clip.channel_count());
  const std::uint32_t bytes_per_sample = static_cast<std::uint32_t>(bits / 8);
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(clip.frames()) * channels * bytes_per_sample;
  const double full = static_cast<double>(1 << (bits - 1));

  ByteWriter w;
  w.put_bytes("RIFF");
  w.put_u32(36 + data_size + (data_size % 2));
  w.put_bytes("WAVE");
  w.put_bytes("fmt ");
  w.put_u32(16);
  w.put_u16(kFormatPcm);
  w.put_u16(static_cast<std::uint16_t>(channels));
  w.put_u32(static_cast<std::uint32_t>(clip.sample_rate));
  w.put_u32(static_cast<std::uint32_t>(clip.sample_rate) * channels * bytes_per_sample);
  w.put_u16(static_cast<std::uint16_t>(channels * bytes_per_sample));
  w.put_u16(static_cast<std::uint16_t>(bits));
  w.put_bytes("data");
  w.put_u32(data_size);
  for (std::size_t i = 0; i < clip.frames(); ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double scaled = std::round(clip.channels[c][i] * full);
      const auto v = static_cast<std::int32_t>(std::clamp(scaled, -full, full - 1));
      const auto u = static_cast<std::uint32_t>(v);
      w.put_u8(static_cast<std::uint8_t>(u & 0xFF));
      w.put_u8(static_cast<std::uint8_t>((u >> 8) & 0xFF));
      if (bits == 24) w.put_u8(static_cast<std::uint8_t>((u >> 16) & 0xFF));
    }
  }
  if (data_size % 2) w.put_u8(0);
  return std::move(w).bytes();
}

void save_wav(const std::filesystem::path& path, const AudioClip& clip, int bits) {
  write_file_atomic(path, encode_wav(clip, bits));
}

}  // namespace ascnet::audio
