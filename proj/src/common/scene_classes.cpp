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

#include "common/scene_classes.hpp"

#include "common/error.hpp"

namespace ascnet {

namespace {

constexpr std::array<std::string_view, kNumClasses> kSceneTitles = {
    "Beach",         "Bus",           "Cafe / Restaurant", "Car",
    "City center",   "Forest path",   "Grocery store",     "Home",
    "Library",       "Metro station", "Office",            "Park",
    "Residential area", "Train",      "Tram",
};

}  // namespace

std::optional<int> scene_index(std::string_view label) {
  for (std::size_t i = 0; i < kSceneLabels.size(); ++i) {
    if (kSceneLabels[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::string_view scene_title(int index) {
  require(index >= 0 && static_cast<std::size_t>(index) < kNumClasses,
          ErrorCode::kArgument, "scene index out of range");
  return kSceneTitles[static_cast<std::size_t>(index)];
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kArgument: return "argument error";
    case ErrorCode::kDecode: return "decode error";
    case ErrorCode::kUnsupportedFormat: return "unsupported format";
    case ErrorCode::kShape: return "shape error";
    case ErrorCode::kState: return "state error";
    case ErrorCode::kOptimizer: return "optimizer error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kSelection: return "selection error";
    case ErrorCode::kAlignment: return "alignment error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kUsage: return "usage error";
    case ErrorCode::kInvariant: return "invariant violation";
  }
  return "unknown error";
}

}  // namespace ascnet
