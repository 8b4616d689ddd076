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

#ifndef ASCNET_COMMON_SCENE_CLASSES_HPP_
#define ASCNET_COMMON_SCENE_CLASSES_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace ascnet {

inline constexpr std::size_t kNumClasses = 15;

// DCASE 2017 Task 1 scene labels, in the order used for class indices.
inline constexpr std::array<std::string_view, kNumClasses> kSceneLabels = {
    "beach",          "bus",          "cafe/restaurant", "car",
    "city_center",    "forest_path",  "grocery_store",   "home",
    "library",        "metro_station", "office",         "park",
    "residential_area", "train",      "tram",
};

std::optional<int> scene_index(std::string_view label);

// Human-readable row title for result tables ("Cafe / Restaurant").
std::string_view scene_title(int index);

}  // namespace ascnet

#endif  // ASCNET_COMMON_SCENE_CLASSES_HPP_
