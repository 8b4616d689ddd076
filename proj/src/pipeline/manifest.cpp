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

#include <unordered_set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

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

}  // namespace

Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  Manifest m;
  std::unordered_set<std::string> seen;
  std::size_t row = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      fail(ErrorCode::kParse, fmt::format("manifest row {}: expected <path><TAB><label>", row));
    }
    const std::string_view path = trim(line.substr(0, tab));
    std::string_view rest = line.substr(tab + 1);
    const std::string_view label = trim(rest.substr(0, rest.find('\t')));
    if (path.empty()) fail(ErrorCode::kParse, fmt::format("manifest row {}: empty path", row));
    const auto index = scene_index(label);
    if (!index) {
      fail(ErrorCode::kParse,
           fmt::format("manifest row {}: unknown scene label '{}'", row, label));
    }
    if (!seen.insert(std::string(path)).second) {
      fail(ErrorCode::kParse, fmt::format("manifest row {}: duplicate path '{}'", row, path));
    }
    const std::filesystem::path p(path);
    m.entries.push_back({std::string(path), p.is_absolute() ? p : base_dir / p, *index});
  }
  if (m.entries.empty()) spdlog::warn("manifest has no entries");
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

void check_disjoint(const Manifest& train, const Manifest& validation) {
  std::unordered_set<std::string> train_paths;
  for (const auto& e : train.entries) {
    train_paths.insert(e.path.lexically_normal().string());
  }
  for (const auto& e : validation.entries) {
    if (train_paths.contains(e.path.lexically_normal().string())) {
      fail(ErrorCode::kArgument,
           "clip '" + e.clip_id + "' appears in both the training and validation manifests");
    }
  }
}

}  // namespace ascnet::pipeline
