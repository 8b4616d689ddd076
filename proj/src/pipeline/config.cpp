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

#include <charconv>

#include <fmt/format.h>

#include "common/error.hpp"
#include "common/files.hpp"
#include "pipeline/pipeline.hpp"

namespace ascnet::pipeline {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <typename T>
T parse_number(std::string_view value, std::size_t line, std::string_view key) {
  T out{};
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) {
    fail(ErrorCode::kParse,
         fmt::format("config line {}: '{}' is not a valid value for {}", line, value, key));
  }
  return out;
}

}  // namespace

TrainConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  TrainConfig cfg;
  auto resolve = [&](std::string_view v) {
    const std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::kParse, fmt::format("config line {}: expected key=value", line_no));
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "model") {
      cfg.model = std::string(value);
    } else if (key == "variant") {
      try {
        cfg.variant = features::parse_variant(value);
      } catch (const Error& e) {
        fail(ErrorCode::kParse, fmt::format("config line {}: {}", line_no, e.what()));
      }
    } else if (key == "batch_size") {
      cfg.batch_size = parse_number<std::size_t>(value, line_no, key);
      if (cfg.batch_size == 0) fail(ErrorCode::kParse, "config: batch_size must be >= 1");
    } else if (key == "epochs") {
      cfg.epochs = parse_number<int>(value, line_no, key);
      if (cfg.epochs < 1) fail(ErrorCode::kParse, "config: epochs must be >= 1");
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(value, line_no, key);
    } else if (key == "train_manifest") {
      cfg.train_manifest = resolve(value);
    } else if (key == "val_manifest") {
      cfg.val_manifest = resolve(value);
    } else if (key == "cache_dir") {
      cfg.cache_dir = resolve(value);
    } else if (key == "checkpoint_dir") {
      cfg.checkpoint_dir = resolve(value);
    } else if (key == "run_name") {
      cfg.run_name = std::string(value);
    } else if (key == "workers") {
      cfg.workers = parse_number<unsigned>(value, line_no, key);
    } else if (key == "width_divisor") {
      cfg.width_divisor = parse_number<int>(value, line_no, key);
      if (cfg.width_divisor < 1) fail(ErrorCode::kParse, "config: width_divisor must be >= 1");
    } else {
      fail(ErrorCode::kParse, fmt::format("config line {}: unknown key '{}'", line_no, key));
    }
  }
  auto need = [](bool present, std::string_view key) {
    if (!present) fail(ErrorCode::kParse, fmt::format("config: missing required key '{}'", key));
  };
  need(!cfg.model.empty(), "model");
  need(!cfg.train_manifest.empty(), "train_manifest");
  need(!cfg.val_manifest.empty(), "val_manifest");
  need(!cfg.checkpoint_dir.empty(), "checkpoint_dir");
  return cfg;
}

TrainConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

}  // namespace ascnet::pipeline
